// src/bench.cc

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

#include "dent/bench.h"

#include <algorithm>
#include <chrono>

#include "dent/dsp.h"
#include "dent/synthetic.h"

namespace dent {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<SmoothingTiming> time_smoothing(std::span<const int> ds_factors,
                                            double seconds, int repeats,
                                            std::uint64_t seed,
                                            int sample_rate) {
  if (repeats < 1) throw InvalidArgument("time_smoothing: repeats must be >= 1");
  const DentParams channel = reference_channel(1, sample_rate);
  const AudioBuffer speech = synth_speech(seconds, seed, sample_rate);
  const std::vector<double> shaped =
      waveshape(speech.samples(), channel.g_distort());
  const std::vector<double> x_db = to_db(shaped);
  const GainTrack<double> g = drc_static_gain<double>(
      x_db, channel.drc().threshold_db, channel.drc().ratio);
  const double aa = channel.drc().alpha_attack;
  const double ar = channel.drc().alpha_release;

  std::vector<SmoothingTiming> out;
  for (int ds : ds_factors) {
    const GainTrack<double> gd = downsample_gain(g, ds);
    // Repeat inside one measurement so that short tracks still take long
    // enough for the clock.
    const std::size_t inner =
        std::max<std::size_t>(1, (4u << 20) / gd.values.size());
    std::vector<double> samples;
    double sink = 0.0;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      for (std::size_t i = 0; i < inner; ++i) {
        const GainTrack<double> s = smooth_gain<double>(gd, aa, ar);
        sink += s.values.back();
      }
      const auto t1 = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double>(t1 - t0).count() /
                        static_cast<double>(inner));
    }
    if (sink == 1.2345) samples.push_back(0.0);  // keeps the loop observable
    out.push_back({ds, gd.values.size(), median(samples)});
  }
  return out;
}

std::vector<TrainingBench> bench_training(std::span<const int> ds_factors,
                                          const ChunkDataset &train,
                                          const ChunkDataset &test,
                                          const DentParams &init,
                                          const TrainConfig &base,
                                          std::uint64_t eval_seed) {
  std::vector<TrainingBench> out;
  for (int ds : ds_factors) {
    TrainConfig cfg = base;
    cfg.ds_factor = ds;
    const FitResult r = fit(train, init, cfg);
    out.push_back({ds, r.seconds, evaluate(r.params, test, eval_seed)});
  }
  return out;
}

}  // namespace dent
