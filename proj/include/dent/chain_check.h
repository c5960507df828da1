// dent/chain_check.h
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
// Finite-difference check of the full two-chain gradient on a short excerpt
// of synthetic speech, as run by `dent check-grad` and the acceptance suite.

#ifndef DENT_CHAIN_CHECK_H_
#define DENT_CHAIN_CHECK_H_

#include <cstdint>

#include "dent/grad_check.h"

namespace dent {

struct ChainCheckConfig {
  std::uint64_t seed = 0;
  std::size_t length = 1000;  // samples of clean input
  int ds_factor = 16;
  KinkPolicy policy = KinkPolicy::kFreeze;
  // Multiplies the recorded partial of every node of this op (fault
  // injection); inactive when fault_scale == 1.
  Op fault_op = Op::kAtan;
  double fault_scale = 1.0;
};

struct ChainCheckResult {
  FdCheckReport report;
  double seconds = 0.0;
};

// Clean excerpt, target from the reference channel and the evaluation point
// all derive from cfg.seed.
ChainObjective chain_check_objective(const ChainCheckConfig &cfg);
FreeParams chain_check_point(const ChainCheckConfig &cfg);

ChainCheckResult run_chain_check(const ChainCheckConfig &cfg);

}  // namespace dent

#endif  // DENT_CHAIN_CHECK_H_
