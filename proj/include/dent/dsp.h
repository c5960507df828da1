// dent/dsp.h

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

// The forward channel model. Audio chain: waveshaper -> companded DRC -> EQ.
// Noise chain: white noise -> EQ -> trainable amplitude. Output is
// audio + lambda * noise.
//
// Every stage is a template over the scalar type; instantiations exist for
// double and Var.

#ifndef DENT_DSP_H_
#define DENT_DSP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dent/autodiff.h"
#include "dent/signal.h"

namespace dent {

inline constexpr std::size_t kEqTaps = 2 * kEqBins - 1;

/// Gain in dB at audio rate (rate_divisor 1) or downsampled by rate_divisor.
template <class S>
struct GainTrack {
  std::vector<S> values;
  int rate_divisor = 1;
};

// kReduction: g = (1/R - 1)(x_dB - T), a gain reduction (<= 0) above T.
// kPaperLiteral: g = (x_dB - T)/R, the printed form, which is positive.
enum class GainConvention { kReduction, kPaperLiteral };

struct DspOptions {
  GainConvention convention = GainConvention::kReduction;
  BranchTrace *trace = nullptr;
};

template <class S>
struct DrcSettings {
  S threshold_db;
  S ratio;
  S alpha_attack;
  S alpha_release;
  S makeup_db;
};

template <class S>
struct ChainSettings {
  S g_distort;
  DrcSettings<S> drc;
  std::vector<S> eq_audio;
  std::vector<S> eq_noise;
  S noise_amplitude;
  double lambda = 1.0;
  int ds_factor = 1;
};

ChainSettings<double> settings_of(const DentParams &params);

// y = (2/pi) atan(g (pi/2) x). Throws on g_distort <= 0.
template <class S>
std::vector<S> waveshape(std::span<const S> x, const S &g_distort);

template <class S>
GainTrack<S> drc_static_gain(std::span<const S> x_db, const S &threshold_db,
                             const S &ratio, const DspOptions &opts = {});

// Linear interpolation onto ceil(L / ds_factor) points spanning the same
// first and last sample.
template <class S>
GainTrack<S> downsample_gain(const GainTrack<S> &g, int ds_factor);

// One-pole smoother with separate coefficients for rising (attack) and
// falling (release) input. Coefficients must lie in [0, 1).
template <class S>
GainTrack<S> smooth_gain(const GainTrack<S> &g, const S &alpha_attack,
                         const S &alpha_release, const DspOptions &opts = {});

// Overlap-add of periodic Hann windows (length 2 * us_factor, hop us_factor),
// normalized by the window sum. Sample k * us_factor equals track value k.
template <class S>
GainTrack<S> upsample_gain(const GainTrack<S> &g, int us_factor,
                           std::size_t target_len);

template <class S>
std::vector<S> drc(std::span<const S> x, const DrcSettings<S> &p,
                   int ds_factor, const DspOptions &opts = {});

// Linear-phase FIR taps (kEqTaps) for a kEqBins magnitude response.
template <class S>
std::vector<S> eq_impulse_response(std::span<const S> fr_mag);

// Same-length convolution, taps centered on the output sample.
template <class S>
std::vector<S> fir_filter(std::span<const S> x, std::span<const S> taps);

template <class S>
std::vector<S> equalize(std::span<const S> x, std::span<const S> fr_mag);

struct NoiseSource {
  std::uint64_t seed = 0;
  std::size_t length = 0;
};

// Uniform on [-1, 1], bit-identical for identical (seed, length).
std::vector<double> white_noise(const NoiseSource &src);

template <class S>
struct ChainParts {
  std::vector<S> audio;  // s_out
  std::vector<S> noise;  // n_out, before the lambda weight
};

// Full two-chain simulation for arbitrary scalar parameters. white must have
// the same length as clean.
template <class S>
std::vector<S> simulate(std::span<const double> clean,
                        std::span<const double> white,
                        const ChainSettings<S> &p, const DspOptions &opts = {},
                        ChainParts<S> *parts = nullptr);

AudioBuffer forward(const AudioBuffer &clean, const NoiseSource &noise,
                    const DentParams &params, const DspOptions &opts = {});

// Convenience overloads for plain signals.
inline std::vector<double> waveshape(std::span<const double> x, double g) {
  return waveshape<double>(x, g);
}
inline std::vector<double> equalize(std::span<const double> x,
                                    const EqParams &eq) {
  return equalize<double>(x, eq.fr_mag());
}
inline std::vector<double> drc(std::span<const double> x, const DrcParams &p,
                               int ds_factor, const DspOptions &opts = {}) {
  const DrcSettings<double> s{p.threshold_db, p.ratio, p.alpha_attack,
                              p.alpha_release, p.makeup_db};
  return drc<double>(x, s, ds_factor, opts);
}

}  // namespace dent

#endif  // DENT_DSP_H_
