// chain_check.cc
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
#include "dent/chain_check.h"

#include <chrono>
#include <vector>

#include "dent/dsp.h"
#include "dent/free_params.h"
#include "dent/synthetic.h"
#include "dent/trainer.h"

namespace dent {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + salt;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

ChainObjective chain_check_objective(const ChainCheckConfig &cfg) {
  if (cfg.length == 0)
    throw InvalidArgument("chain check: length must be > 0");
  const AudioBuffer speech = synth_speech(1.0, mix(cfg.seed, 1));
  if (cfg.length > speech.size())
    throw InvalidArgument("chain check: length must be at most one second");
  // Start inside the first voiced stretch so the excerpt is not silent.
  const std::size_t start = (speech.size() - cfg.length) / 4;
  const AudioBuffer clean = speech.slice(start, cfg.length);
  const AudioBuffer target =
      forward(clean, NoiseSource{mix(cfg.seed, 2), cfg.length},
              reference_channel(cfg.ds_factor));
  return ChainObjective({clean.samples().begin(), clean.samples().end()},
                        {target.samples().begin(), target.samples().end()},
                        mix(cfg.seed, 3), 1.0, cfg.ds_factor);
}

FreeParams chain_check_point(const ChainCheckConfig &cfg) {
  return to_free(random_init(mix(cfg.seed, 4), cfg.ds_factor));
}

ChainCheckResult run_chain_check(const ChainCheckConfig &cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const ChainObjective obj = chain_check_objective(cfg);
  const FreeParams u = chain_check_point(cfg);
  FdCheckOptions opts;
  opts.kink_policy = cfg.policy;
  // The oracle runs in long double, so a small step costs no accuracy and
  // keeps the h^2 term of log|X| near small magnitudes under tolerance.
  opts.step = 1e-5;
  if (cfg.fault_scale != 1.0) {
    const Op op = cfg.fault_op;
    const double scale = cfg.fault_scale;
    opts.grad.configure_tape = [op, scale](Tape &t) {
      t.inject_fault(op, scale);
    };
  }
  ChainCheckResult r;
  r.report = fd_check(obj, u, opts);
  r.seconds = std::chrono::duration<double>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

}  // namespace dent
