// tests/dsp_test.cc

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

#include "dent/dsp.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <type_traits>
#include <vector>

#include "dent/grad_check.h"
#include "dent/spectral_loss.h"
#include "gtest/gtest.h"

namespace dent {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_signal(std::size_t n, std::uint64_t seed,
                                  double amp = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> x(n);
  for (auto &v : x) v = u(rng);
  return x;
}

// Per-sample reference DRC at ds_factor = 1, written straight from the
// static curve and the one-pole recursion.
std::vector<double> reference_drc(const std::vector<double> &x,
                                  const DrcParams &p) {
  std::vector<double> y(x.size());
  double gs = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double db = 20.0 * std::log10(std::max(std::abs(x[t]), 1e-5));
    const double g =
        db > p.threshold_db ? (1.0 / p.ratio - 1.0) * (db - p.threshold_db)
                            : 0.0;
    if (t == 0) {
      gs = g;
    } else {
      const double a = g > gs ? p.alpha_attack : p.alpha_release;
      gs = a * gs + (1.0 - a) * g;
    }
    const double s = x[t] > 0 ? 1.0 : (x[t] < 0 ? -1.0 : 0.0);
    y[t] = s * std::pow(10.0, (db + gs + p.makeup_db) / 20.0);
  }
  return y;
}

// Overlap-add with explicit periodic Hann windows of length 2 us centred on
// k * us, divided by the summed weights.
std::vector<double> reference_upsample(const std::vector<double> &g, int us,
                                       std::size_t target_len) {
  std::vector<double> out(target_len);
  for (std::size_t t = 0; t < target_len; ++t) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const long j = static_cast<long>(t) - static_cast<long>(k) * us + us;
      if (j < 0 || j >= 2 * us) continue;
      const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * j / (2.0 * us));
      num += w * g[k];
      den += w;
    }
    out[t] = num / den;
  }
  return out;
}

TEST(WaveshapeTest, KnownValues) {
  const std::vector<double> x = {0.0, 1.0};
  const auto y = waveshape(x, 1.0);
  EXPECT_DOUBLE_EQ(y[0], 0.0);
  EXPECT_NEAR(y[1], 0.63909, 5e-5);
  EXPECT_NEAR(y[1], (2.0 / kPi) * std::atan(kPi / 2.0), 1e-15);
}

TEST(WaveshapeTest, SmallGainIsLinear) {
  const std::vector<double> x = {0.5};
  for (double g : {1e-2, 1e-4, 1e-6}) {
    const auto y = waveshape(x, g);
    EXPECT_NEAR(y[0] / x[0], g, g * g);
  }
}

TEST(WaveshapeTest, BoundOddMonotone) {
  const auto x = random_signal(2000, 5, 50.0);
  for (double g : {0.1, 1.0, 4.0, 50.0}) {
    const auto y = waveshape(x, g);
    std::vector<double> neg(x.size());
    std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
    const auto yn = waveshape(neg, g);
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_LT(std::abs(y[i]), 1.0);
      EXPECT_DOUBLE_EQ(yn[i], -y[i]);
    }
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const auto ys = waveshape(sorted, g);
    for (std::size_t i = 1; i < ys.size(); ++i) EXPECT_GE(ys[i], ys[i - 1]);
  }
}

TEST(WaveshapeTest, RejectsNonPositiveGain) {
  const std::vector<double> x = {0.1};
  EXPECT_THROW(waveshape(x, 0.0), InvalidArgument);
  EXPECT_THROW(waveshape(x, -1.0), InvalidArgument);
}

TEST(WaveshapeTest, GainDerivative) {
  auto f = [](auto u, BranchTrace *) {
    using S = std::remove_cvref_t<decltype(u[0])>;
    const std::vector<S> x = {S(1.0)};
    return waveshape<S>(x, u[0])[0];
  };
  const std::vector<double> at = {1.0};
  const auto g = grad(f, at);
  const double expected =
      (2.0 / kPi) * (kPi / 2.0) / (1.0 + (kPi / 2.0) * (kPi / 2.0));
  EXPECT_NEAR(g[0], expected, 1e-14);
  EXPECT_NEAR(g[0], 0.2884, 5e-5);
}

TEST(StaticGainTest, Branches) {
  const double t = -20.0;
  const std::vector<double> db = {t - 10.0, t, t + 12.0};
  const auto g = drc_static_gain<double>(db, t, 4.0);
  EXPECT_DOUBLE_EQ(g.values[0], 0.0);
  EXPECT_DOUBLE_EQ(g.values[1], 0.0);
  EXPECT_DOUBLE_EQ(g.values[2], -9.0);
  EXPECT_EQ(g.rate_divisor, 1);
}

TEST(StaticGainTest, UnityRatioIsZero) {
  const auto db = random_signal(500, 2, 100.0);
  for (double v : drc_static_gain<double>(db, -30.0, 1.0).values)
    EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(StaticGainTest, NonPositiveAndZeroExactlyBelowThreshold) {
  const auto db = random_signal(2000, 4, 60.0);
  const double t = -10.0;
  const auto g = drc_static_gain<double>(db, t, 3.0);
  for (std::size_t i = 0; i < db.size(); ++i) {
    EXPECT_LE(g.values[i], 0.0);
    EXPECT_EQ(g.values[i] == 0.0, db[i] <= t) << db[i];
  }
}

TEST(StaticGainTest, PaperLiteralSwitch) {
  DspOptions opts;
  opts.convention = GainConvention::kPaperLiteral;
  const std::vector<double> db = {-8.0};
  EXPECT_DOUBLE_EQ(drc_static_gain<double>(db, -20.0, 4.0, opts).values[0],
                   3.0);
}

TEST(StaticGainTest, RejectsRatioBelowOne) {
  const std::vector<double> db = {0.0};
  EXPECT_THROW(drc_static_gain<double>(db, 0.0, 0.5), InvalidArgument);
}

TEST(DownsampleTest, Examples) {
  GainTrack<double> g{{0.0, -2.0, -4.0, -6.0}, 1};
  EXPECT_EQ(downsample_gain(g, 1).values, g.values);
  const auto d = downsample_gain(g, 2);
  ASSERT_EQ(d.values.size(), 2u);
  EXPECT_DOUBLE_EQ(d.values[0], 0.0);
  EXPECT_DOUBLE_EQ(d.values[1], -6.0);
  EXPECT_EQ(d.rate_divisor, 2);
}

TEST(DownsampleTest, LengthAndConstant) {
  for (std::size_t len : {1u, 7u, 16u, 17u, 1000u}) {
    for (int ds : {1, 2, 3, 16}) {
      GainTrack<double> g{std::vector<double>(len, -3.5), 1};
      const auto d = downsample_gain(g, ds);
      EXPECT_EQ(d.values.size(), (len + ds - 1) / ds);
      for (double v : d.values) EXPECT_DOUBLE_EQ(v, -3.5);
    }
  }
}

TEST(DownsampleTest, InterpolatesFractionalPositions) {
  // L = 5, M = 3: positions 0, 2, 4 land on samples; L = 6, M = 3: 0, 2.5, 5.
  GainTrack<double> g{{0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, 1};
  const auto d = downsample_gain(g, 2);
  ASSERT_EQ(d.values.size(), 3u);
  EXPECT_DOUBLE_EQ(d.values[1], 2.5);
  EXPECT_DOUBLE_EQ(d.values[2], 5.0);
}

TEST(DownsampleTest, Rejects) {
  GainTrack<double> empty;
  EXPECT_THROW(downsample_gain(empty, 2), InvalidArgument);
  GainTrack<double> g{{1.0}, 1};
  EXPECT_THROW(downsample_gain(g, 0), InvalidArgument);
}

TEST(SmoothTest, Examples) {
  GainTrack<double> c{std::vector<double>(50, -4.0), 1};
  for (double v : smooth_gain(c, 0.9, 0.7).values) EXPECT_DOUBLE_EQ(v, -4.0);

  GainTrack<double> g{random_signal(100, 8, 20.0), 1};
  EXPECT_EQ(smooth_gain(g, 0.0, 0.0).values, g.values);

  GainTrack<double> step{{0.0, -6.0}, 1};
  const auto s = smooth_gain(step, 0.9, 0.5);
  EXPECT_DOUBLE_EQ(s.values[0], 0.0);
  EXPECT_DOUBLE_EQ(s.values[1], -3.0);
}

TEST(SmoothTest, AttackOnRisingInput) {
  GainTrack<double> g{{-6.0, 0.0}, 1};
  const auto s = smooth_gain(g, 0.25, 0.9);
  EXPECT_DOUBLE_EQ(s.values[1], 0.25 * -6.0);
}

TEST(SmoothTest, StaysWithinInputRange) {
  GainTrack<double> g{random_signal(3000, 9, 30.0), 4};
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  const auto s = smooth_gain(g, 0.8, 0.95);
  EXPECT_EQ(s.rate_divisor, 4);
  for (double v : s.values) {
    EXPECT_GE(v, *lo);
    EXPECT_LE(v, *hi);
  }
}

TEST(SmoothTest, RejectsBadCoefficients) {
  GainTrack<double> g{{0.0}, 1};
  EXPECT_THROW(smooth_gain(g, 1.0, 0.5), InvalidArgument);
  EXPECT_THROW(smooth_gain(g, 0.5, -0.1), InvalidArgument);
}

TEST(UpsampleTest, TwoPointRamp) {
  GainTrack<double> g{{0.0, -6.0}, 4};
  const auto u = upsample_gain(g, 4, 8);
  const auto ref = reference_upsample(g.values, 4, 8);
  ASSERT_EQ(u.values.size(), 8u);
  for (std::size_t t = 0; t < 8; ++t) EXPECT_NEAR(u.values[t], ref[t], 1e-12);
  // Monotone ramp from 0 toward -6.
  EXPECT_DOUBLE_EQ(u.values[0], 0.0);
  for (std::size_t t = 1; t < 8; ++t) EXPECT_LE(u.values[t], u.values[t - 1]);
  EXPECT_DOUBLE_EQ(u.values[4], -6.0);
}

TEST(UpsampleTest, MatchesBruteForceOnRandomTracks) {
  for (int us : {1, 2, 3, 4, 8, 16}) {
    GainTrack<double> g{random_signal(37, 100 + us, 10.0), us};
    const std::size_t target = 37 * us - static_cast<std::size_t>(us / 2);
    const auto u = upsample_gain(g, us, target);
    const auto ref = reference_upsample(g.values, us, target);
    for (std::size_t t = 0; t < target; ++t)
      EXPECT_NEAR(u.values[t], ref[t], 1e-12) << "us " << us << " t " << t;
  }
}

TEST(UpsampleTest, PartitionOfUnity) {
  for (int us : {1, 2, 4, 8, 16, 64}) {
    GainTrack<double> g{std::vector<double>(20, -7.25), us};
    for (std::size_t target : {static_cast<std::size_t>(20 * us),
                               static_cast<std::size_t>(19 * us + 1)}) {
      const auto u = upsample_gain(g, us, target);
      ASSERT_EQ(u.values.size(), target);
      for (double v : u.values) EXPECT_NEAR(v, -7.25, 1e-12);
    }
  }
}

TEST(UpsampleTest, IdentityAtFactorOne) {
  GainTrack<double> g{random_signal(64, 12, 5.0), 1};
  EXPECT_EQ(upsample_gain(g, 1, 64).values, g.values);
}

TEST(UpsampleTest, RejectsUncoverableTargets) {
  GainTrack<double> g{{0.0, 1.0}, 4};
  EXPECT_THROW(upsample_gain(g, 4, 9), InvalidArgument);
  EXPECT_THROW(upsample_gain(g, 2, 4), InvalidArgument);
}

TEST(DrcTest, IdentityAtUnityRatio) {
  const auto x = random_signal(4000, 21, 0.9);
  DrcParams p;
  p.ratio = 1.0;
  p.makeup_db = 0.0;
  for (int ds : {1, 4, 16}) {
    const auto y = drc(x, p, ds);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) >= kDbFloor) EXPECT_NEAR(y[i], x[i], 1e-12);
    }
  }
}

TEST(DrcTest, MakeupGain) {
  const auto x = random_signal(1000, 22, 0.9);
  DrcParams p;
  p.ratio = 1.0;
  p.makeup_db = 6.0;
  const auto y = drc(x, p, 16);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) < kDbFloor) continue;
    EXPECT_NEAR(y[i] / x[i], 1.9953, 5e-5);
    EXPECT_NEAR(y[i] / x[i], std::pow(10.0, 0.3), 1e-12);
  }
}

TEST(DrcTest, MatchesPerSampleReference) {
  auto x = random_signal(3000, 23, 0.9);
  x[17] = 0.0;
  x[18] = 1e-7;
  DrcParams p;
  p.threshold_db = -18.0;
  p.ratio = 5.0;
  p.alpha_attack = 0.6;
  p.alpha_release = 0.97;
  p.makeup_db = 2.0;
  const auto y = drc(x, p, 1);
  const auto ref = reference_drc(x, p);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_NEAR(y[i], ref[i], 1e-12 * std::max(1.0, std::abs(ref[i]))) << i;
}

TEST(DrcTest, StepResponseSettlesNineDbDown) {
  DrcParams p;
  p.threshold_db = -20.0;
  p.ratio = 4.0;
  p.alpha_attack = 0.999;
  p.alpha_release = 0.999;
  const double quiet = std::pow(10.0, -30.0 / 20.0);
  const double loud = std::pow(10.0, (p.threshold_db + 12.0) / 20.0);
  std::vector<double> x(20000);
  for (std::size_t t = 0; t < x.size(); ++t)
    x[t] = (t < 2000 ? quiet : loud) * (t % 2 ? -1.0 : 1.0);
  const auto y = drc(x, p, 1);
  const auto ref = reference_drc(x, p);
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(y[t], ref[t], 1e-12);
  // Overshoot: right after the step the output is still near the input.
  EXPECT_GT(to_db(y[2000]), to_db(loud) - 0.1);
  // Settled: 9 dB below the input peak.
  EXPECT_NEAR(to_db(y.back()) - to_db(loud), -9.0, 0.01);
  for (std::size_t t = 2001; t < x.size(); ++t)
    EXPECT_LE(std::abs(y[t]), std::abs(y[t - 1]) + 1e-15);
}

TEST(DrcTest, KeepsSignsAndZeros) {
  const std::vector<double> x = {0.0, -0.5, 0.5, -1e-6};
  DrcParams p;
  const auto y = drc(x, p, 2);
  EXPECT_EQ(y[0], 0.0);
  EXPECT_LT(y[1], 0.0);
  EXPECT_GT(y[2], 0.0);
  EXPECT_LT(y[3], 0.0);
}

TEST(EqTest, AllOnesIsDelta) {
  const std::vector<double> ones(kEqBins, 1.0);
  const auto h = eq_impulse_response<double>(ones);
  ASSERT_EQ(h.size(), kEqTaps);
  double energy = 0.0;
  for (double v : h) energy += v * v;
  EXPECT_NEAR(h[kEqTaps / 2], 1.0, 1e-12);
  EXPECT_GT(h[kEqTaps / 2] * h[kEqTaps / 2] / energy, 0.999);
  // End taps are zeroed by the window.
  EXPECT_EQ(h.front(), 0.0);
  EXPECT_EQ(h.back(), 0.0);
}

TEST(EqTest, AllOnesPassbandRipple) {
  const std::vector<double> ones(kEqBins, 1.0);
  const auto h = eq_impulse_response<double>(ones);
  // Response of the taps on a dense grid, DC to Nyquist.
  double lo = 1e9, hi = -1e9;
  for (int k = 0; k <= 4000; ++k) {
    const double w = kPi * k / 4000.0;
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < h.size(); ++m)
      acc += h[m] * std::polar(1.0, -w * static_cast<double>(m));
    const double db = 20.0 * std::log10(std::abs(acc));
    lo = std::min(lo, db);
    hi = std::max(hi, db);
  }
  EXPECT_LE(hi - lo, 0.1);
  // And a signal comes through unchanged.
  const auto x = random_signal(3000, 31);
  const auto y = equalize(x, EqParams());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
}

TEST(EqTest, ZerosGiveSilence) {
  const auto x = random_signal(2500, 32);
  const auto y = equalize(x, EqParams(std::vector<double>(kEqBins, 0.0)));
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(EqTest, RejectsWrongBinCount) {
  const std::vector<double> bins(999, 1.0);
  EXPECT_THROW(eq_impulse_response<double>(bins), InvalidArgument);
  const std::vector<double> x(10, 0.0), even_taps(4, 0.0);
  EXPECT_THROW(fir_filter<double>(x, even_taps), InvalidArgument);
}

TEST(EqTest, SymmetricTaps) {
  const auto mag = random_signal(kEqBins, 33, 1.0);
  std::vector<double> fr(kEqBins);
  std::transform(mag.begin(), mag.end(), fr.begin(),
                 [](double v) { return std::abs(v); });
  const auto h = eq_impulse_response<double>(fr);
  for (std::size_t m = 0; m < kEqTaps; ++m)
    EXPECT_NEAR(h[m], h[kEqTaps - 1 - m], 1e-15);
}

TEST(EqTest, Linear) {
  std::vector<double> fr(kEqBins);
  for (std::size_t j = 0; j < kEqBins; ++j) fr[j] = 1.0 + std::sin(0.01 * j);
  const EqParams eq(fr);
  const auto x = random_signal(4000, 34);
  const auto z = random_signal(4000, 35);
  const double a = 0.7, b = -1.3;
  std::vector<double> mix(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mix[i] = a * x[i] + b * z[i];
  const auto ex = equalize(x, eq), ez = equalize(z, eq), em = equalize(mix, eq);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_NEAR(em[i], a * ex[i] + b * ez[i], 1e-12);
}

TEST(EqTest, FilterMatchesDirectConvolution) {
  const auto x = random_signal(300, 36);
  const auto h = random_signal(41, 37);
  const auto y = fir_filter<double>(x, h);
  for (std::size_t t = 0; t < x.size(); ++t) {
    double acc = 0.0;
    for (std::size_t m = 0; m < h.size(); ++m) {
      const long i = static_cast<long>(t) + 20 - static_cast<long>(m);
      if (i >= 0 && i < static_cast<long>(x.size())) acc += h[m] * x[i];
    }
    EXPECT_NEAR(y[t], acc, 1e-12);
  }
}

TEST(EqTest, HalfBandAttenuation) {
  std::vector<double> fr(kEqBins, 0.0);
  std::fill(fr.begin(), fr.begin() + kEqBins / 2, 1.0);
  const auto white = white_noise({77, 1u << 18});
  const auto y = equalize(white, EqParams(fr));
  const Spectrogram s = stft_mag(y, 2048);
  // Guard band of 5% of Nyquist on each side of the cutoff.
  const std::size_t cut = s.bins / 2, guard = s.bins / 20;
  double pass = 0.0, stop = 0.0;
  std::size_t np = 0, ns = 0;
  for (std::size_t f = 4; f + 4 < s.frames; ++f) {
    for (std::size_t k = 1; k + 1 < s.bins; ++k) {
      const double p = s.at(f, k) * s.at(f, k);
      if (k + guard < cut) {
        pass += p;
        ++np;
      } else if (k > cut + guard) {
        stop += p;
        ++ns;
      }
    }
  }
  const double atten_db = 10.0 * std::log10((pass / np) / (stop / ns));
  EXPECT_GE(atten_db, 40.0);
}

TEST(NoiseTest, Deterministic) {
  const auto a = white_noise({5, 1000});
  const auto b = white_noise({5, 1000});
  const auto c = white_noise({6, 1000});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (double v : a) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(NoiseTest, MeanAndFlatness) {
  const auto n = white_noise({2024, 1000000});
  const double mean = std::accumulate(n.begin(), n.end(), 0.0) / n.size();
  EXPECT_NEAR(mean, 0.0, 0.01);
  const Spectrogram s = stft_mag(n, 2048);
  double low = 0.0, high = 0.0;
  for (std::size_t f = 0; f < s.frames; ++f) {
    for (std::size_t k = 1; k + 1 < s.bins; ++k) {
      const double p = s.at(f, k) * s.at(f, k);
      (k < s.bins / 2 ? low : high) += p;
    }
  }
  const std::size_t n_low = s.bins / 2 - 1, n_high = s.bins - 1 - s.bins / 2;
  EXPECT_NEAR((low / n_low) / (high / n_high), 1.0, 0.1);
}

DentParams test_params(double lambda) {
  DrcParams d;
  d.threshold_db = -25.0;
  d.ratio = 3.0;
  std::vector<double> fr(kEqBins);
  for (std::size_t j = 0; j < kEqBins; ++j) fr[j] = 1.0 / (1.0 + 0.003 * j);
  return DentParams(2.0, d, EqParams(fr), EqParams(), 0.05, lambda, 16);
}

TEST(ForwardTest, DeterministicAndSameLength) {
  const AudioBuffer clean(random_signal(16000, 40, 0.3), 16000);
  const DentParams p = test_params(1.0);
  const auto a = forward(clean, {9, clean.size()}, p);
  const auto b = forward(clean, {9, clean.size()}, p);
  EXPECT_EQ(a.size(), clean.size());
  EXPECT_EQ(a.sample_rate(), 16000);
  EXPECT_TRUE(std::equal(a.samples().begin(), a.samples().end(),
                         b.samples().begin()));
  EXPECT_THROW(forward(clean, {9, clean.size() - 1}, p), InvalidArgument);
  EXPECT_THROW(forward(AudioBuffer({}, 16000), {9, 0}, p), InvalidArgument);
}

TEST(ForwardTest, ZeroLambdaIsAudioChainOnly) {
  const auto x = random_signal(2000, 41, 0.01);
  const AudioBuffer clean(x, 16000);
  DrcParams d;
  d.ratio = 1.0;
  d.makeup_db = 0.0;
  const DentParams p(1.0, d, EqParams(), EqParams(), 0.5, 0.0, 16);
  const auto y = forward(clean, {3, x.size()}, p);
  const auto shaped = waveshape(x, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(shaped[i]) < 1e-5) {
      // Below the dB floor the magnitude is clamped, sign kept.
      EXPECT_NEAR(y.samples()[i], std::copysign(1e-5, shaped[i]), 1e-15);
      continue;
    }
    EXPECT_NEAR(y.samples()[i], shaped[i], 1e-12);
    EXPECT_NEAR(y.samples()[i], x[i], 0.01 * std::abs(x[i]) + 1e-12);
  }
}

TEST(ForwardTest, MixIsAudioPlusWeightedNoise) {
  const auto x = random_signal(4000, 42, 0.5);
  const auto white = white_noise({8, x.size()});
  const auto s = settings_of(test_params(1.26));
  ChainParts<double> parts;
  const auto mix = simulate<double>(x, white, s, {}, &parts);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_NEAR(mix[i], parts.audio[i] + 1.26 * parts.noise[i], 1e-15);
  // Noise energy ratio between lambda 1.26 and 1.0 is 20 log10(1.26).
  const auto s1 = settings_of(test_params(1.0));
  const auto mix1 = simulate<double>(x, white, s1);
  double e126 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e126 += std::pow(mix[i] - parts.audio[i], 2);
    e1 += std::pow(mix1[i] - parts.audio[i], 2);
  }
  EXPECT_NEAR(10.0 * std::log10(e126 / e1), 20.0 * std::log10(1.26), 1e-9);
  EXPECT_NEAR(10.0 * std::log10(e126 / e1), 2.007, 5e-4);
}

TEST(ForwardTest, VarPathMatchesDoublePath) {
  const auto x = random_signal(3000, 43, 0.5);
  const auto white = white_noise({8, x.size()});
  const auto s = settings_of(test_params(1.0));
  const auto y = simulate<double>(x, white, s);
  ChainSettings<Var> sv;
  sv.g_distort = s.g_distort;
  sv.drc = {s.drc.threshold_db, s.drc.ratio, s.drc.alpha_attack,
            s.drc.alpha_release, s.drc.makeup_db};
  sv.eq_audio.assign(s.eq_audio.begin(), s.eq_audio.end());
  sv.eq_noise.assign(s.eq_noise.begin(), s.eq_noise.end());
  sv.noise_amplitude = s.noise_amplitude;
  sv.lambda = s.lambda;
  sv.ds_factor = s.ds_factor;
  const auto yv = simulate<Var>(x, white, sv);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_DOUBLE_EQ(yv[i].value(), y[i]);
}

}  // namespace
}  // namespace dent
