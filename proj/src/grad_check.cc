// src/grad_check.cc

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

#include "dent/grad_check.h"

#include <algorithm>
#include <utility>

namespace dent {

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

std::vector<std::size_t> FdCheckReport::failed_indices() const {
  std::vector<std::size_t> out;
  for (const auto &e : entries)
    if (e.judged && !e.pass) out.push_back(e.index);
  return out;
}

ChainObjective::ChainObjective(std::vector<double> clean_in,
                               std::vector<double> target_in,
                               std::uint64_t noise_seed, double lambda_in,
                               int ds)
    : clean(std::move(clean_in)),
      target(std::move(target_in)),
      lambda(lambda_in),
      ds_factor(ds) {
  if (clean.size() != target.size())
    throw InvalidArgument("ChainObjective: clean and target lengths differ");
  white = white_noise(NoiseSource{noise_seed, clean.size()});
}

}  // namespace dent
