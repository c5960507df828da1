// dent/free_params.h

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

// Unconstrained coordinates for the 2007 trainable values:
//   g_distort = exp(u), R = 1 + softplus(u), alpha = sigmoid(u),
//   EQ bins = softplus(u), noise_amplitude = exp(u), T and g_makeup as is.

#ifndef DENT_FREE_PARAMS_H_
#define DENT_FREE_PARAMS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dent/autodiff.h"
#include "dent/dsp.h"
#include "dent/signal.h"

namespace dent {

namespace free_index {
inline constexpr std::size_t kGDistort = 0;
inline constexpr std::size_t kThreshold = 1;
inline constexpr std::size_t kRatio = 2;
inline constexpr std::size_t kAlphaAttack = 3;
inline constexpr std::size_t kAlphaRelease = 4;
inline constexpr std::size_t kMakeup = 5;
inline constexpr std::size_t kNoiseAmplitude = 6;
inline constexpr std::size_t kEqAudio = 7;
inline constexpr std::size_t kEqNoise = kEqAudio + kEqBins;
}  // namespace free_index

using FreeParams = std::vector<double>;

// "g_distort", "drc.R", "eq_audio[17]", ...
std::string free_param_name(std::size_t index);

FreeParams to_free(const DentParams &params);
DentParams from_free(std::span<const double> u, double lambda, int ds_factor,
                     int sample_rate = kDefaultSampleRate);

double inverse_softplus(double y);
double logit(double p);

template <class S>
ChainSettings<S> map_free(std::span<const S> u, double lambda, int ds_factor) {
  using std::exp;
  if (u.size() != kTrainableCount)
    throw InvalidArgument("map_free: expected " +
                          std::to_string(kTrainableCount) + " values, got " +
                          std::to_string(u.size()));
  ChainSettings<S> s;
  s.g_distort = exp(u[free_index::kGDistort]);
  s.drc.threshold_db = u[free_index::kThreshold];
  s.drc.ratio = 1.0 + softplus(u[free_index::kRatio]);
  s.drc.alpha_attack = sigmoid(u[free_index::kAlphaAttack]);
  s.drc.alpha_release = sigmoid(u[free_index::kAlphaRelease]);
  s.drc.makeup_db = u[free_index::kMakeup];
  s.noise_amplitude = exp(u[free_index::kNoiseAmplitude]);
  s.eq_audio.reserve(kEqBins);
  s.eq_noise.reserve(kEqBins);
  for (std::size_t k = 0; k < kEqBins; ++k) {
    s.eq_audio.push_back(softplus(u[free_index::kEqAudio + k]));
    s.eq_noise.push_back(softplus(u[free_index::kEqNoise + k]));
  }
  s.lambda = lambda;
  s.ds_factor = ds_factor;
  return s;
}

}  // namespace dent

#endif  // DENT_FREE_PARAMS_H_
