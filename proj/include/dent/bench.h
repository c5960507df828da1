// dent/bench.h

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

// Timing harness for the companded gain smoother and for full training runs
// at several companding factors.

#ifndef DENT_BENCH_H_
#define DENT_BENCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dent/trainer.h"

namespace dent {

struct SmoothingTiming {
  int ds_factor = 1;
  std::size_t track_length = 0;
  double median_seconds = 0.0;  // one smoothing pass over the track
};

// Builds the gain track of `seconds` of synthetic speech and times the
// recursive smoother at each factor; median over `repeats`.
std::vector<SmoothingTiming> time_smoothing(std::span<const int> ds_factors,
                                            double seconds, int repeats,
                                            std::uint64_t seed = 7,
                                            int sample_rate = kDefaultSampleRate);

struct TrainingBench {
  int ds_factor = 1;
  double train_seconds = 0.0;
  double mssl = 0.0;  // on the held-out set, noise seeds shared across rows
};

// Trains from the same init on the same data at each factor and evaluates
// every result on `test` with one shared noise seed.
std::vector<TrainingBench> bench_training(std::span<const int> ds_factors,
                                          const ChunkDataset &train,
                                          const ChunkDataset &test,
                                          const DentParams &init,
                                          const TrainConfig &base,
                                          std::uint64_t eval_seed);

}  // namespace dent

#endif  // DENT_BENCH_H_
