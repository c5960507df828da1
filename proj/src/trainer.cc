// src/trainer.cc

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

#include "dent/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "dent/dsp.h"
#include "dent/free_params.h"
#include "dent/grad_check.h"
#include "dent/spectral_loss.h"

namespace dent {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void TrainConfig::validate() const {
  if (steps < 0) throw InvalidArgument("TrainConfig: steps must be >= 0");
  if (!(learning_rate > 0.0))
    throw InvalidArgument("TrainConfig: learning rate must be > 0");
  if (ds_factor < 1) throw InvalidArgument("TrainConfig: ds_factor must be >= 1");
  if (!(lambda >= 0.0)) throw InvalidArgument("TrainConfig: lambda must be >= 0");
  if (!(s2t_lo >= 0.0 && s2t_lo < s2t_hi && s2t_hi <= 1.0))
    throw InvalidArgument("TrainConfig: s2t range must satisfy 0 <= lo < hi <= 1");
  if (duration_seconds < 1)
    throw InvalidArgument("TrainConfig: duration must be a positive number of seconds");
  if (log_every < 1) throw InvalidArgument("TrainConfig: log cadence must be >= 1");
}

double compute_s2t(const AudioBuffer &clean) {
  const std::span<const double> x = clean.samples();
  const auto win = static_cast<std::size_t>(
      std::lround(kS2tWindowSeconds * clean.sample_rate()));
  const auto hop = static_cast<std::size_t>(
      std::lround(kS2tHopSeconds * clean.sample_rate()));
  if (x.empty() || win == 0 || hop == 0) return 0.0;
  std::vector<double> level;
  if (x.size() < win) {
    double e = 0.0;
    for (double v : x) e += v * v;
    level.push_back(10.0 * std::log10(e / static_cast<double>(x.size())));
  } else {
    for (std::size_t start = 0; start + win <= x.size(); start += hop) {
      double e = 0.0;
      for (std::size_t i = start; i < start + win; ++i) e += x[i] * x[i];
      level.push_back(10.0 * std::log10(e / static_cast<double>(win)));
    }
  }
  const double peak = *std::max_element(level.begin(), level.end());
  if (!std::isfinite(peak)) return 0.0;  // digital silence
  const double threshold = peak - kS2tThresholdDb;
  const auto active = std::count_if(level.begin(), level.end(),
                                    [&](double l) { return l > threshold; });
  return static_cast<double>(active) / static_cast<double>(level.size());
}

std::vector<ChunkPair> chunk_corpus(const AudioBuffer &clean,
                                    const AudioBuffer &noisy) {
  if (clean.sample_rate() != noisy.sample_rate())
    throw DataError("chunk_corpus: clean and noisy sample rates differ (" +
                    std::to_string(clean.sample_rate()) + " vs " +
                    std::to_string(noisy.sample_rate()) + ")");
  const auto chunk = static_cast<std::size_t>(clean.sample_rate());
  const std::size_t count = std::min(clean.size(), noisy.size()) / chunk;
  std::vector<ChunkPair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ChunkPair p;
    p.clean = clean.slice(k * chunk, chunk);
    p.noisy = noisy.slice(k * chunk, chunk);
    p.s2t = compute_s2t(p.clean);
    p.source_index = k;
    out.push_back(std::move(p));
  }
  return out;
}

ChunkDataset select_chunks(const AudioBuffer &clean, const AudioBuffer &noisy,
                           const TrainConfig &cfg) {
  cfg.validate();
  std::vector<ChunkPair> all = chunk_corpus(clean, noisy);
  std::vector<std::size_t> qualifying;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (all[k].s2t >= cfg.s2t_lo && all[k].s2t < cfg.s2t_hi)
      qualifying.push_back(k);
  }
  const auto need = static_cast<std::size_t>(cfg.duration_seconds);
  if (qualifying.size() < need)
    throw DataError("select_chunks: need " + std::to_string(need) +
                    " one-second chunks with s2t in [" +
                    std::to_string(cfg.s2t_lo) + ", " +
                    std::to_string(cfg.s2t_hi) + "), found " +
                    std::to_string(qualifying.size()) + " of " +
                    std::to_string(all.size()));
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(qualifying.begin(), qualifying.end(), rng);
  ChunkDataset data;
  for (std::size_t k = 0; k < need; ++k)
    data.pairs.push_back(std::move(all[qualifying[k]]));
  return data;
}

std::uint64_t step_noise_seed(std::uint64_t run_seed, long step) {
  return splitmix64(splitmix64(run_seed) ^ static_cast<std::uint64_t>(step));
}

double evaluate(const DentParams &params, const ChunkDataset &test,
                std::span<const std::uint64_t> seeds) {
  if (test.empty()) throw InvalidArgument("evaluate: empty test set");
  if (seeds.size() != test.pairs.size())
    throw InvalidArgument("evaluate: need one noise seed per pair");
  double sum = 0.0;
  for (std::size_t k = 0; k < test.pairs.size(); ++k) {
    const ChunkPair &p = test.pairs[k];
    const AudioBuffer sim =
        forward(p.clean, NoiseSource{seeds[k], p.clean.size()}, params);
    sum += mssl(sim, p.noisy);
  }
  return sum / static_cast<double>(test.pairs.size());
}

double evaluate(const DentParams &params, const ChunkDataset &test,
                std::uint64_t seed) {
  std::vector<std::uint64_t> seeds(test.pairs.size());
  for (std::size_t k = 0; k < seeds.size(); ++k)
    seeds[k] = splitmix64(seed + 0x5851f42d4c957f2dULL * (k + 1));
  return evaluate(params, test, seeds);
}

FitResult fit(const ChunkDataset &data, const DentParams &init,
              const TrainConfig &cfg, const StepCallback &on_step) {
  cfg.validate();
  if (data.empty()) throw InvalidArgument("fit: empty dataset");
  const auto t0 = std::chrono::steady_clock::now();
  const int sample_rate = data.pairs.front().clean.sample_rate();
  const DentParams start = DentParams(
      init.g_distort(), init.drc(), init.eq_audio(), init.eq_noise(),
      init.noise_amplitude(), cfg.lambda, cfg.ds_factor, sample_rate);

  FitResult result{start, 0.0, {}, {}, -1, 0.0};
  try {
    result.initial_loss =
        evaluate(start, data, splitmix64(cfg.seed ^ 0xe7a1));
  } catch (const NumericalError &e) {
    throw NumericalError(std::string("fit: initial loss before step 0: ") +
                         e.what());
  }

  FreeParams u = to_free(start);
  FreeParams best = u;
  double best_loss = std::numeric_limits<double>::infinity();
  AdamState state(u.size());
  AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;

  const std::size_t n = data.pairs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);
  double epoch_sum = 0.0;
  std::size_t epoch_count = 0;

  for (long step = 0; step < cfg.steps; ++step) {
    const auto pos = static_cast<std::size_t>(step) % n;
    const long epoch = step / static_cast<long>(n);
    if (pos == 0) std::shuffle(order.begin(), order.end(), rng);
    const ChunkPair &pair = data.pairs[order[pos]];
    const std::span<const double> clean = pair.clean.samples();
    const std::span<const double> noisy = pair.noisy.samples();
    ChainObjective objective({clean.begin(), clean.end()},
                             {noisy.begin(), noisy.end()},
                             step_noise_seed(cfg.seed, step), cfg.lambda,
                             cfg.ds_factor);
    ValueAndGrad vg;
    try {
      vg = value_and_grad(objective, u);
    } catch (const NumericalError &e) {
      throw NumericalError("fit: step " + std::to_string(step) + " (chunk " +
                           std::to_string(pair.source_index) + "): " +
                           e.what());
    }
    double norm = 0.0;
    for (double g : vg.grad) norm += g * g;
    StepRecord rec{step, epoch, pair.source_index, vg.value, std::sqrt(norm)};
    result.history.push_back(rec);
    if (on_step && step % cfg.log_every == 0) on_step(rec);
    adam_step(u, state, vg.grad, adam);

    epoch_sum += vg.value;
    ++epoch_count;
    if (pos + 1 == n || step + 1 == cfg.steps) {
      const double mean = epoch_sum / static_cast<double>(epoch_count);
      result.epoch_losses.push_back(mean);
      if (mean < best_loss) {
        best_loss = mean;
        best = u;
        result.best_epoch = epoch;
      }
      epoch_sum = 0.0;
      epoch_count = 0;
    }
  }
  if (cfg.steps > 0)
    result.params = from_free(best, cfg.lambda, cfg.ds_factor, sample_rate);
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return result;
}

DentParams random_init(std::uint64_t seed, int ds_factor, int sample_rate) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  FreeParams u(kTrainableCount);
  using namespace free_index;
  u[kGDistort] = uniform(-0.5, 0.5);
  u[kThreshold] = uniform(-30.0, -10.0);
  u[kRatio] = uniform(0.0, 1.5);
  u[kAlphaAttack] = uniform(1.5, 3.0);
  u[kAlphaRelease] = uniform(1.5, 3.0);
  u[kMakeup] = uniform(-2.0, 2.0);
  u[kNoiseAmplitude] = uniform(std::log(0.005), std::log(0.05));
  for (std::size_t k = 0; k < 2 * kEqBins; ++k)
    u[kEqAudio + k] = uniform(0.3, 0.8);
  return from_free(u, 1.0, ds_factor, sample_rate);
}

}  // namespace dent
