// dent/optimizer.h

// Copyright 2026  dent authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DENT_OPTIMIZER_H_
#define DENT_OPTIMIZER_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dent {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
};

// One bias-corrected adaptive-moment update of params in place. Throws
// NumericalError on a non-finite gradient entry and InvalidArgument on size
// mismatch.
void adam_step(std::span<double> params, AdamState &state,
               std::span<const double> gradient, const AdamConfig &config = {});

}  // namespace dent

#endif  // DENT_OPTIMIZER_H_
