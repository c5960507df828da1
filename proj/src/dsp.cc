// src/dsp.cc

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
#include <random>
#include <string>

#include "dent/fft.h"

namespace dent {

namespace {

using std::atan;
using std::exp;
using std::log10;

constexpr double kPi = std::numbers::pi;

// Design kernel shared by all scalar types; T is the transform precision.
template <class T>
std::vector<T> design_taps(std::span<const T> fr_mag) {
  const std::size_t n_fft = 2 * (kEqBins - 1);
  std::vector<std::complex<T>> spec(fr_mag.begin(), fr_mag.end());
  std::vector<T> zero_phase(n_fft);
  fft::irfft(std::span<const std::complex<T>>(spec), std::span<T>(zero_phase));
  const std::size_t center = kEqTaps / 2;
  std::vector<T> taps(kEqTaps);
  for (std::size_t m = 0; m < kEqTaps; ++m) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(m) /
                             static_cast<double>(kEqTaps - 1));
    const std::size_t lag = (m + n_fft - center) % n_fft;
    taps[m] = w * zero_phase[lag] / static_cast<T>(n_fft);
  }
  return taps;
}

// Adjoint of design_taps with respect to the magnitude bins.
std::vector<double> design_taps_adjoint(std::span<const double> taps_adj) {
  const std::size_t n_fft = 2 * (kEqBins - 1);
  const std::size_t center = kEqTaps / 2;
  std::vector<double> folded(n_fft, 0.0);
  for (std::size_t m = 0; m < kEqTaps; ++m) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(m) /
                             static_cast<double>(kEqTaps - 1));
    folded[(m + n_fft - center) % n_fft] += w * taps_adj[m];
  }
  std::vector<fft::Complex> spec(n_fft / 2 + 1);
  fft::rfft(folded, spec);
  std::vector<double> out(kEqBins);
  for (std::size_t j = 0; j < kEqBins; ++j) {
    const double c = (j == 0 || j == kEqBins - 1) ? 1.0 : 2.0;
    out[j] = c * spec[j].real() / static_cast<double>(n_fft);
  }
  return out;
}

template <class T>
std::vector<T> centered_filter(std::span<const T> x, std::span<const T> taps) {
  const std::vector<T> full = fft::convolve(x, taps);
  const std::size_t c = (taps.size() - 1) / 2;
  return std::vector<T>(full.begin() + c, full.begin() + c + x.size());
}

std::vector<double> reversed(std::span<const double> x) {
  return std::vector<double>(x.rbegin(), x.rend());
}

double hann_periodic(std::size_t j, std::size_t len) {
  return 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(j) /
                              static_cast<double>(len));
}

}  // namespace

ChainSettings<double> settings_of(const DentParams &params) {
  ChainSettings<double> s;
  s.g_distort = params.g_distort();
  const DrcParams &d = params.drc();
  s.drc = {d.threshold_db, d.ratio, d.alpha_attack, d.alpha_release,
           d.makeup_db};
  s.eq_audio.assign(params.eq_audio().fr_mag().begin(),
                    params.eq_audio().fr_mag().end());
  s.eq_noise.assign(params.eq_noise().fr_mag().begin(),
                    params.eq_noise().fr_mag().end());
  s.noise_amplitude = params.noise_amplitude();
  s.lambda = params.lambda();
  s.ds_factor = params.ds_factor();
  return s;
}

template <class S>
std::vector<S> waveshape(std::span<const S> x, const S &g_distort) {
  if (!(value_of(g_distort) > 0.0))
    throw InvalidArgument("waveshape: g_distort must be > 0");
  const S gain = g_distort * (kPi / 2.0);
  std::vector<S> y;
  y.reserve(x.size());
  for (const S &v : x) y.push_back((2.0 / kPi) * atan(gain * v));
  return y;
}

template <class S>
GainTrack<S> drc_static_gain(std::span<const S> x_db, const S &threshold_db,
                             const S &ratio, const DspOptions &opts) {
  if (!(value_of(ratio) >= 1.0))
    throw InvalidArgument("drc_static_gain: ratio must be >= 1");
  const bool literal = opts.convention == GainConvention::kPaperLiteral;
  const S slope = literal ? S(1.0) / ratio : S(1.0) / ratio - 1.0;
  GainTrack<S> g;
  g.values.reserve(x_db.size());
  for (const S &v : x_db) {
    if (decide(opts.trace, value_of(v) > value_of(threshold_db)))
      g.values.push_back(slope * (v - threshold_db));
    else
      g.values.push_back(S(0.0));
  }
  return g;
}

template <class S>
GainTrack<S> downsample_gain(const GainTrack<S> &g, int ds_factor) {
  if (ds_factor < 1)
    throw InvalidArgument("downsample_gain: ds_factor must be >= 1");
  const std::size_t len = g.values.size();
  if (len == 0) throw InvalidArgument("downsample_gain: empty gain track");
  const auto ds = static_cast<std::size_t>(ds_factor);
  const std::size_t m = (len + ds - 1) / ds;
  GainTrack<S> out;
  out.rate_divisor = g.rate_divisor * ds_factor;
  out.values.reserve(m);
  if (m == 1) {
    out.values.push_back(g.values[0]);
    return out;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double pos = static_cast<double>(k) * static_cast<double>(len - 1) /
                       static_cast<double>(m - 1);
    const auto i0 = std::min(static_cast<std::size_t>(pos), len - 1);
    const double frac = pos - static_cast<double>(i0);
    if (frac == 0.0 || i0 + 1 >= len) {
      out.values.push_back(g.values[i0]);
    } else {
      out.values.push_back(g.values[i0] * (1.0 - frac) +
                           g.values[i0 + 1] * frac);
    }
  }
  return out;
}

template <class S>
GainTrack<S> smooth_gain(const GainTrack<S> &g, const S &alpha_attack,
                         const S &alpha_release, const DspOptions &opts) {
  const double aa = value_of(alpha_attack);
  const double ar = value_of(alpha_release);
  if (!(aa >= 0.0 && aa < 1.0) || !(ar >= 0.0 && ar < 1.0))
    throw InvalidArgument("smooth_gain: coefficients must lie in [0, 1)");
  GainTrack<S> out;
  out.rate_divisor = g.rate_divisor;
  if (g.values.empty()) return out;
  const S keep_attack = 1.0 - alpha_attack;
  const S keep_release = 1.0 - alpha_release;
  out.values.reserve(g.values.size());
  out.values.push_back(g.values[0]);
  for (std::size_t t = 1; t < g.values.size(); ++t) {
    const S &prev = out.values[t - 1];
    const S &cur = g.values[t];
    if (decide(opts.trace, value_of(cur) > value_of(prev)))
      out.values.push_back(alpha_attack * prev + keep_attack * cur);
    else
      out.values.push_back(alpha_release * prev + keep_release * cur);
  }
  return out;
}

template <class S>
GainTrack<S> upsample_gain(const GainTrack<S> &g, int us_factor,
                           std::size_t target_len) {
  if (us_factor < 1)
    throw InvalidArgument("upsample_gain: us_factor must be >= 1");
  if (g.rate_divisor != us_factor)
    throw InvalidArgument("upsample_gain: us_factor " +
                          std::to_string(us_factor) +
                          " does not match track rate divisor " +
                          std::to_string(g.rate_divisor));
  const std::size_t m = g.values.size();
  const auto us = static_cast<std::size_t>(us_factor);
  if (m == 0 || target_len > m * us)
    throw InvalidArgument("upsample_gain: " + std::to_string(m) +
                          " points at factor " + std::to_string(us) +
                          " cannot cover " + std::to_string(target_len) +
                          " samples");
  // Between points q and q + 1 the normalized window pair reduces to
  // g[q] + c(r) * (g[q + 1] - g[q]) with c(r) = w(r) / (w(r) + w(r + us)).
  std::vector<double> blend(us);
  for (std::size_t r = 0; r < us; ++r) {
    const double lo = hann_periodic(r + us, 2 * us);
    const double hi = hann_periodic(r, 2 * us);
    blend[r] = hi / (lo + hi);
  }
  std::vector<S> step(m > 0 ? m - 1 : 0);
  const std::size_t last_q = (target_len - 1) / us;
  for (std::size_t q = 0; q + 1 < m && q <= last_q; ++q)
    step[q] = g.values[q + 1] - g.values[q];
  GainTrack<S> out;
  out.rate_divisor = 1;
  out.values.reserve(target_len);
  for (std::size_t t = 0; t < target_len; ++t) {
    const std::size_t q = t / us;
    const std::size_t r = t % us;
    if (r == 0 || q + 1 >= m)
      out.values.push_back(g.values[q]);
    else
      out.values.push_back(g.values[q] + blend[r] * step[q]);
  }
  return out;
}

template <class S>
std::vector<S> drc(std::span<const S> x, const DrcSettings<S> &p,
                   int ds_factor, const DspOptions &opts) {
  const std::size_t len = x.size();
  if (len == 0) return {};
  std::vector<S> x_db(len);
  std::vector<double> sign(len);
  for (std::size_t t = 0; t < len; ++t) {
    const double v = value_of(x[t]);
    // Both comparisons are always recorded so traces stay aligned.
    const bool positive = decide(opts.trace, v > 0.0);
    const bool negative = decide(opts.trace, v < 0.0);
    sign[t] = positive ? 1.0 : (negative ? -1.0 : 0.0);
    const S mag = sign[t] * x[t];
    const S floored =
        decide(opts.trace, value_of(mag) > kDbFloor) ? mag : S(kDbFloor);
    x_db[t] = 20.0 * log10(floored);
  }
  const GainTrack<S> g =
      drc_static_gain<S>(x_db, p.threshold_db, p.ratio, opts);
  const GainTrack<S> gd = downsample_gain(g, ds_factor);
  const GainTrack<S> gds = smooth_gain(gd, p.alpha_attack, p.alpha_release,
                                       opts);
  const GainTrack<S> ges = upsample_gain(gds, ds_factor, len);
  const double db_to_log = std::log(10.0) / 20.0;
  std::vector<S> y(len);
  for (std::size_t t = 0; t < len; ++t) {
    if (sign[t] == 0.0) {
      y[t] = S(0.0);
      continue;
    }
    const S y_db = x_db[t] + ges.values[t] + p.makeup_db;
    y[t] = sign[t] * exp(y_db * db_to_log);
  }
  return y;
}

namespace {

void check_bins(std::size_t n) {
  if (n != kEqBins)
    throw InvalidArgument("eq_impulse_response: expected " +
                          std::to_string(kEqBins) + " bins, got " +
                          std::to_string(n));
}

void check_taps(std::size_t n) {
  if (n % 2 == 0) throw InvalidArgument("fir_filter: tap count must be odd");
}

}  // namespace

template <>
std::vector<double> eq_impulse_response<double>(
    std::span<const double> fr_mag) {
  check_bins(fr_mag.size());
  return design_taps(fr_mag);
}

template <>
std::vector<long double> eq_impulse_response<long double>(
    std::span<const long double> fr_mag) {
  check_bins(fr_mag.size());
  return design_taps(fr_mag);
}

template <>
std::vector<Var> eq_impulse_response<Var>(std::span<const Var> fr_mag) {
  check_bins(fr_mag.size());
  const std::vector<double> mag = values_of(fr_mag);
  return vector_op("eq_design", fr_mag, design_taps<double>(mag),
                   [](std::span<const double> out_adj,
                      std::span<double> in_adj) {
                     const auto a = design_taps_adjoint(out_adj);
                     std::copy(a.begin(), a.end(), in_adj.begin());
                   });
}

template <>
std::vector<double> fir_filter<double>(std::span<const double> x,
                                       std::span<const double> taps) {
  check_taps(taps.size());
  if (x.empty()) return {};
  return centered_filter(x, taps);
}

template <>
std::vector<long double> fir_filter<long double>(
    std::span<const long double> x, std::span<const long double> taps) {
  check_taps(taps.size());
  if (x.empty()) return {};
  return centered_filter(x, taps);
}

template <>
std::vector<Var> fir_filter<Var>(std::span<const Var> x,
                                 std::span<const Var> taps) {
  check_taps(taps.size());
  if (x.empty()) return {};
  const std::vector<double> xv = values_of(x);
  const std::vector<double> hv = values_of(taps);
  const bool x_active =
      std::any_of(x.begin(), x.end(), [](const Var &v) { return v.active(); });
  const bool h_active = std::any_of(taps.begin(), taps.end(),
                                    [](const Var &v) { return v.active(); });
  std::vector<Var> inputs;
  inputs.reserve(x.size() + taps.size());
  inputs.insert(inputs.end(), x.begin(), x.end());
  inputs.insert(inputs.end(), taps.begin(), taps.end());
  auto vjp = [xv, hv, x_active, h_active](std::span<const double> out_adj,
                                          std::span<double> in_adj) {
    const std::size_t len = xv.size();
    const std::size_t n_taps = hv.size();
    const std::size_t c = (n_taps - 1) / 2;
    // Adjoint of the full convolution output; only the centered window is
    // observed.
    std::vector<double> z_adj(len + n_taps - 1, 0.0);
    std::copy(out_adj.begin(), out_adj.end(), z_adj.begin() + c);
    if (x_active) {
      const auto xa = fft::convolve(std::span<const double>(z_adj),
                                    reversed(hv));
      for (std::size_t i = 0; i < len; ++i) in_adj[i] = xa[i + n_taps - 1];
    }
    if (h_active) {
      const auto ha = fft::convolve(std::span<const double>(z_adj),
                                    reversed(xv));
      for (std::size_t m = 0; m < n_taps; ++m)
        in_adj[len + m] = ha[m + len - 1];
    }
  };
  return vector_op("fir_filter", inputs, centered_filter<double>(xv, hv),
                   std::move(vjp));
}

template <class S>
std::vector<S> equalize(std::span<const S> x, std::span<const S> fr_mag) {
  const std::vector<S> taps = eq_impulse_response<S>(fr_mag);
  return fir_filter<S>(x, taps);
}

std::vector<double> white_noise(const NoiseSource &src) {
  std::mt19937_64 rng(src.seed);
  std::vector<double> out(src.length);
  for (auto &v : out) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2.0 * u - 1.0;
  }
  return out;
}

template <class S>
std::vector<S> simulate(std::span<const double> clean,
                        std::span<const double> white,
                        const ChainSettings<S> &p, const DspOptions &opts,
                        ChainParts<S> *parts) {
  if (clean.empty()) throw InvalidArgument("simulate: empty input");
  if (white.size() != clean.size())
    throw InvalidArgument("simulate: noise length " +
                          std::to_string(white.size()) +
                          " differs from input length " +
                          std::to_string(clean.size()));
  const std::vector<S> x(clean.begin(), clean.end());
  const std::vector<S> shaped = waveshape<S>(x, p.g_distort);
  const std::vector<S> compressed = drc<S>(shaped, p.drc, p.ds_factor, opts);
  std::vector<S> audio = equalize<S>(compressed, p.eq_audio);

  const std::vector<S> n_in(white.begin(), white.end());
  const std::vector<S> filtered = equalize<S>(n_in, p.eq_noise);

  std::vector<S> mix(clean.size());
  if (parts != nullptr) {
    parts->noise.resize(clean.size());
    for (std::size_t t = 0; t < clean.size(); ++t) {
      parts->noise[t] = p.noise_amplitude * filtered[t];
      mix[t] = audio[t] + p.lambda * parts->noise[t];
    }
    parts->audio = audio;
  } else {
    const S scale = p.noise_amplitude * p.lambda;
    for (std::size_t t = 0; t < clean.size(); ++t)
      mix[t] = audio[t] + scale * filtered[t];
  }
  return mix;
}

AudioBuffer forward(const AudioBuffer &clean, const NoiseSource &noise,
                    const DentParams &params, const DspOptions &opts) {
  if (clean.empty()) throw InvalidArgument("forward: empty input");
  if (noise.length != clean.size())
    throw InvalidArgument("forward: noise length must equal input length");
  const std::vector<double> white = white_noise(noise);
  const ChainSettings<double> s = settings_of(params);
  std::vector<double> y = simulate<double>(clean.samples(), white, s, opts);
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (!std::isfinite(y[t]))
      throw NumericalError("forward: non-finite output at sample " +
                           std::to_string(t));
  }
  return AudioBuffer(std::move(y), clean.sample_rate());
}

#define DENT_INSTANTIATE(S)                                                   \
  template std::vector<S> waveshape<S>(std::span<const S>, const S &);       \
  template GainTrack<S> drc_static_gain<S>(std::span<const S>, const S &,    \
                                           const S &, const DspOptions &);   \
  template GainTrack<S> downsample_gain<S>(const GainTrack<S> &, int);       \
  template GainTrack<S> smooth_gain<S>(const GainTrack<S> &, const S &,      \
                                       const S &, const DspOptions &);       \
  template GainTrack<S> upsample_gain<S>(const GainTrack<S> &, int,          \
                                         std::size_t);                       \
  template std::vector<S> drc<S>(std::span<const S>, const DrcSettings<S> &, \
                                 int, const DspOptions &);                   \
  template std::vector<S> equalize<S>(std::span<const S>,                    \
                                      std::span<const S>);                   \
  template std::vector<S> simulate<S>(                                       \
      std::span<const double>, std::span<const double>,                      \
      const ChainSettings<S> &, const DspOptions &, ChainParts<S> *);

DENT_INSTANTIATE(double)
DENT_INSTANTIATE(long double)
DENT_INSTANTIATE(Var)

#undef DENT_INSTANTIATE

}  // namespace dent
