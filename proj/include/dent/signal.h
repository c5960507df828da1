// dent/signal.h

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

#ifndef DENT_SIGNAL_H_
#define DENT_SIGNAL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dent/error.h"

namespace dent {

inline constexpr int kDefaultSampleRate = 16000;
inline constexpr std::size_t kEqBins = 1000;
// g_distort + 5 DRC values + noise amplitude + two equalizers.
inline constexpr std::size_t kTrainableCount = 1 + 5 + 1 + 2 * kEqBins;

// Amplitude floor for the dB domain: 1e-5, i.e. -100 dB.
inline constexpr double kDbFloor = 1e-5;

/// Mono audio with its sample rate. Samples are finite, nominally in [-1, 1].
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  // Copy of samples [begin, begin + count).
  AudioBuffer slice(std::size_t begin, std::size_t count) const;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kDefaultSampleRate;
};

struct DrcParams {
  double threshold_db = -20.0;
  double ratio = 4.0;
  double alpha_attack = 0.9;
  double alpha_release = 0.9;
  double makeup_db = 0.0;

  // Throws InvalidArgument unless ratio >= 1 and both alphas lie in (0, 1).
  void validate() const;
};

/// Magnitude response of an equalizer on kEqBins uniform bins from DC to
/// Nyquist (inclusive).
class EqParams {
 public:
  // All-ones response.
  EqParams();
  explicit EqParams(std::vector<double> fr_mag);

  std::span<const double> fr_mag() const { return fr_mag_; }

 private:
  std::vector<double> fr_mag_;
};

/// Complete parameter set of both chains, plus the two fixed
/// hyperparameters (noise weight and companding factor).
class DentParams {
 public:
  DentParams(double g_distort, DrcParams drc, EqParams eq_audio,
             EqParams eq_noise, double noise_amplitude, double lambda,
             int ds_factor, int sample_rate = kDefaultSampleRate);

  double g_distort() const { return g_distort_; }
  const DrcParams &drc() const { return drc_; }
  const EqParams &eq_audio() const { return eq_audio_; }
  const EqParams &eq_noise() const { return eq_noise_; }
  double noise_amplitude() const { return noise_amplitude_; }
  double lambda() const { return lambda_; }
  int ds_factor() const { return ds_factor_; }
  int sample_rate() const { return sample_rate_; }

  DentParams with_lambda(double lambda) const;
  DentParams with_ds_factor(int ds_factor) const;

 private:
  double g_distort_;
  DrcParams drc_;
  EqParams eq_audio_;
  EqParams eq_noise_;
  double noise_amplitude_;
  double lambda_;
  int ds_factor_;
  int sample_rate_;
};

// 20*log10(max(|x|, 1e-5)) per sample.
double to_db(double x);
std::vector<double> to_db(std::span<const double> x);

// sign * 10^(x_db / 20). sign is -1, 0 or +1.
double from_db(double x_db, double sign);
std::vector<double> from_db(std::span<const double> x_db,
                            std::span<const double> signs);

// -1, 0 or +1.
double sign_of(double x);
std::vector<double> signs_of(std::span<const double> x);

}  // namespace dent

#endif  // DENT_SIGNAL_H_
