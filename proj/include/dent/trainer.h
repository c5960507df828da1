// dent/trainer.h

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

#ifndef DENT_TRAINER_H_
#define DENT_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dent/optimizer.h"
#include "dent/signal.h"

namespace dent {

// s2t framing: 25 ms RMS windows every 10 ms; active when the window level
// exceeds the loudest window of the chunk minus 50 dB.
inline constexpr double kS2tWindowSeconds = 0.025;
inline constexpr double kS2tHopSeconds = 0.010;
inline constexpr double kS2tThresholdDb = 50.0;

struct ChunkPair {
  AudioBuffer clean;
  AudioBuffer noisy;
  double s2t = 0.0;
  std::size_t source_index = 0;  // position of the chunk in the corpus
};

struct ChunkDataset {
  std::vector<ChunkPair> pairs;
  double total_duration() const { return static_cast<double>(pairs.size()); }
  bool empty() const { return pairs.empty(); }
};

struct TrainConfig {
  long steps = 1500;
  double learning_rate = 0.02;
  int ds_factor = 16;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  double s2t_lo = 0.8;
  double s2t_hi = 1.0;
  int duration_seconds = 10;
  long log_every = 1;

  // Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
};

// Fraction of active windows in [0, 1]; 0 for digital silence.
double compute_s2t(const AudioBuffer &clean);

// Every whole 1-second chunk of an aligned corpus, in order, with s2t.
std::vector<ChunkPair> chunk_corpus(const AudioBuffer &clean,
                                    const AudioBuffer &noisy);

// Seeded uniform choice of duration_seconds chunks with s2t in [lo, hi).
// Throws DataError with the qualifying count when there are too few.
ChunkDataset select_chunks(const AudioBuffer &clean, const AudioBuffer &noisy,
                           const TrainConfig &cfg);

struct StepRecord {
  long step = 0;
  long epoch = 0;
  std::size_t chunk = 0;  // source_index of the chunk
  double loss = 0.0;
  double grad_norm = 0.0;
};

struct FitResult {
  DentParams params;
  double initial_loss = 0.0;
  std::vector<StepRecord> history;
  std::vector<double> epoch_losses;
  long best_epoch = -1;
  double seconds = 0.0;
};

using StepCallback = std::function<void(const StepRecord &)>;

// Noise seed used at a given training step.
std::uint64_t step_noise_seed(std::uint64_t run_seed, long step);

// Minimizes MSSL between simulate(clean) and noisy, one chunk per step.
FitResult fit(const ChunkDataset &data, const DentParams &init,
              const TrainConfig &cfg, const StepCallback &on_step = {});

// Mean MSSL over the pairs, with per-pair noise seeds derived from seed.
double evaluate(const DentParams &params, const ChunkDataset &test,
                std::uint64_t seed);
// Mean MSSL with an explicit noise seed per pair.
double evaluate(const DentParams &params, const ChunkDataset &test,
                std::span<const std::uint64_t> seeds);

// Random starting point around a mild, nearly transparent channel.
DentParams random_init(std::uint64_t seed, int ds_factor,
                       int sample_rate = kDefaultSampleRate);

}  // namespace dent

#endif  // DENT_TRAINER_H_
