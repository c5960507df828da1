// src/synthetic.cc

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

#include "dent/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dent/dsp.h"

namespace dent {

namespace {

constexpr double kPi = std::numbers::pi;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 gen_;
};

struct Syllable {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool voiced = true;
  std::array<double, 3> formants{};
};

// Writes one utterance (a run of syllables) into out[begin, end).
void render_utterance(std::vector<double> &out, std::size_t begin,
                      std::size_t end, int sample_rate, Rng &rng) {
  const double sr = sample_rate;
  std::vector<Syllable> syl;
  for (std::size_t t = begin; t < end;) {
    Syllable s;
    s.begin = t;
    s.end = std::min(end, t + static_cast<std::size_t>(
                                  rng.uniform(0.12, 0.28) * sr));
    s.voiced = rng.chance(0.8);
    s.formants = {rng.uniform(300, 850), rng.uniform(900, 2300),
                  rng.uniform(2400, 3300)};
    syl.push_back(s);
    t = s.end;
  }
  const double f0_base = rng.uniform(95.0, 210.0);
  const double vib_phase = rng.uniform(0.0, 2.0 * kPi);
  const double max_freq = std::min(7000.0, 0.45 * sr);
  const std::array<double, 3> gains = {1.0, 0.6, 0.3};
  const std::array<double, 3> widths = {90.0, 130.0, 180.0};
  double phase = 0.0;
  double prev_noise = 0.0;
  std::vector<double> amp;
  for (std::size_t si = 0; si < syl.size(); ++si) {
    const Syllable &s = syl[si];
    const Syllable &next = syl[std::min(si + 1, syl.size() - 1)];
    const double len = static_cast<double>(s.end - s.begin);
    for (std::size_t t = s.begin; t < s.end; ++t) {
      const double tau = static_cast<double>(t - s.begin) / len;
      const double sec = static_cast<double>(t) / sr;
      const double env = 0.25 + 0.75 * std::sin(kPi * tau);
      double v = 0.0;
      if (s.voiced) {
        const double f0 = f0_base * (1.0 + 0.08 * std::sin(2.0 * kPi * 0.7 * sec +
                                                          vib_phase));
        phase += 2.0 * kPi * f0 / sr;
        if (phase > 2.0 * kPi) phase -= 2.0 * kPi;
        const auto n_harm = static_cast<std::size_t>(max_freq / f0);
        if ((t - s.begin) % 80 == 0 || amp.size() != n_harm) {
          amp.assign(n_harm, 0.0);
          for (std::size_t k = 1; k <= n_harm; ++k) {
            const double f = static_cast<double>(k) * f0;
            double a = 0.02;
            for (int i = 0; i < 3; ++i) {
              // Formants glide toward the next syllable.
              const double fc = s.formants[i] +
                                tau * (next.formants[i] - s.formants[i]);
              const double z = (f - fc) / widths[i];
              a += gains[i] * std::exp(-0.5 * z * z);
            }
            amp[k - 1] = a * std::pow(static_cast<double>(k), -0.6);
          }
        }
        const std::complex<double> step(std::cos(phase), std::sin(phase));
        std::complex<double> h = step;
        for (double a : amp) {
          v += a * h.imag();
          h *= step;
        }
        v += 0.02 * rng.uniform(-1.0, 1.0);
      } else {
        const double w = rng.uniform(-1.0, 1.0);
        v = 0.6 * (w - prev_noise);
        prev_noise = w;
      }
      out[t] = env * v;
    }
  }
}

}  // namespace

AudioBuffer synth_speech(double seconds, std::uint64_t seed, int sample_rate) {
  if (!(seconds > 0.0)) throw InvalidArgument("synth_speech: seconds must be > 0");
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  std::vector<double> x(n, 0.0);
  Rng rng(seed);
  const double sr = sample_rate;
  std::size_t t = static_cast<std::size_t>(rng.uniform(0.0, 0.1) * sr);
  while (t < n) {
    const std::size_t len = static_cast<std::size_t>(rng.uniform(0.5, 1.6) * sr);
    const std::size_t end = std::min(n, t + len);
    render_utterance(x, t, end, sample_rate, rng);
    const double pause =
        rng.chance(0.15) ? rng.uniform(0.35, 0.9) : rng.uniform(0.03, 0.2);
    t = end + static_cast<std::size_t>(pause * sr);
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double &v : x) v *= 0.5 / peak;
  return AudioBuffer(std::move(x), sample_rate);
}

DentParams reference_channel(int ds_factor, int sample_rate) {
  const double nyquist = 0.5 * sample_rate;
  std::vector<double> band(kEqBins), pink(kEqBins);
  auto taper = [](double x) {  // 0 -> 0, 1 -> 1, raised cosine in between
    x = std::clamp(x, 0.0, 1.0);
    return 0.5 - 0.5 * std::cos(kPi * x);
  };
  constexpr double kFloor = 0.03;
  constexpr double kEdge = 150.0;
  for (std::size_t j = 0; j < kEqBins; ++j) {
    const double f = nyquist * static_cast<double>(j) / (kEqBins - 1);
    const double pass = taper((f - 300.0 + kEdge) / kEdge) *
                        taper((3400.0 + kEdge - f) / kEdge);
    band[j] = kFloor + (1.0 - kFloor) * pass;
    pink[j] = std::min(3.0, std::sqrt(500.0 / std::max(f, 30.0)));
  }
  DrcParams drc;
  drc.threshold_db = -24.0;
  drc.ratio = 8.0;
  drc.alpha_attack = 0.9;
  drc.alpha_release = 0.95;
  drc.makeup_db = 10.0;
  return DentParams(4.0, drc, EqParams(band), EqParams(pink), 0.001, 1.0,
                    ds_factor, sample_rate);
}

ParallelCorpus make_parallel_corpus(double seconds, std::uint64_t seed,
                                    const DentParams &channel) {
  ParallelCorpus c;
  c.clean = synth_speech(seconds, seed, channel.sample_rate());
  const std::span<const double> x = c.clean.samples();
  const auto chunk = static_cast<std::size_t>(channel.sample_rate());
  std::vector<double> noisy;
  noisy.reserve(x.size());
  std::mt19937_64 seeds(seed ^ 0x6e6f697365ULL);
  for (std::size_t start = 0; start < x.size(); start += chunk) {
    const std::size_t len = std::min(chunk, x.size() - start);
    const AudioBuffer piece = c.clean.slice(start, len);
    const AudioBuffer out = forward(piece, NoiseSource{seeds(), len}, channel);
    noisy.insert(noisy.end(), out.samples().begin(), out.samples().end());
  }
  c.noisy = AudioBuffer(std::move(noisy), channel.sample_rate());
  return c;
}

}  // namespace dent
