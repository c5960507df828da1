// src/free_params.cc

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

#include "dent/free_params.h"

#include <algorithm>
#include <cmath>

namespace dent {

namespace {

// Interior clamp for values sitting on the boundary of their range.
constexpr double kBoundaryClamp = 1e-12;

}  // namespace

std::string free_param_name(std::size_t index) {
  using namespace free_index;
  switch (index) {
    case kGDistort: return "g_distort";
    case kThreshold: return "drc.T";
    case kRatio: return "drc.R";
    case kAlphaAttack: return "drc.alpha_A";
    case kAlphaRelease: return "drc.alpha_R";
    case kMakeup: return "drc.g_makeup";
    case kNoiseAmplitude: return "noise_amplitude";
    default: break;
  }
  if (index >= kEqAudio && index < kEqNoise)
    return "eq_audio[" + std::to_string(index - kEqAudio) + "]";
  if (index >= kEqNoise && index < kTrainableCount)
    return "eq_noise[" + std::to_string(index - kEqNoise) + "]";
  throw InvalidArgument("free_param_name: index out of range");
}

double inverse_softplus(double y) {
  y = std::max(y, kBoundaryClamp);
  // log(exp(y) - 1), written to stay finite for large y.
  return y + std::log(-std::expm1(-y));
}

double logit(double p) {
  p = std::clamp(p, kBoundaryClamp, 1.0 - kBoundaryClamp);
  return std::log(p) - std::log1p(-p);
}

FreeParams to_free(const DentParams &params) {
  using namespace free_index;
  FreeParams u(kTrainableCount);
  u[kGDistort] = std::log(params.g_distort());
  u[kThreshold] = params.drc().threshold_db;
  u[kRatio] = inverse_softplus(params.drc().ratio - 1.0);
  u[kAlphaAttack] = logit(params.drc().alpha_attack);
  u[kAlphaRelease] = logit(params.drc().alpha_release);
  u[kMakeup] = params.drc().makeup_db;
  u[kNoiseAmplitude] = std::log(params.noise_amplitude());
  for (std::size_t k = 0; k < kEqBins; ++k) {
    u[kEqAudio + k] = inverse_softplus(params.eq_audio().fr_mag()[k]);
    u[kEqNoise + k] = inverse_softplus(params.eq_noise().fr_mag()[k]);
  }
  return u;
}

DentParams from_free(std::span<const double> u, double lambda, int ds_factor,
                     int sample_rate) {
  const ChainSettings<double> s = map_free<double>(u, lambda, ds_factor);
  DrcParams drc{s.drc.threshold_db, s.drc.ratio, s.drc.alpha_attack,
                s.drc.alpha_release, s.drc.makeup_db};
  // sigmoid saturates to exactly 0 or 1 for |u| > ~37; keep the value valid.
  drc.alpha_attack = std::clamp(drc.alpha_attack, 1e-16, 1.0 - 1e-16);
  drc.alpha_release = std::clamp(drc.alpha_release, 1e-16, 1.0 - 1e-16);
  return DentParams(s.g_distort, drc, EqParams(s.eq_audio),
                    EqParams(s.eq_noise), s.noise_amplitude, lambda,
                    ds_factor, sample_rate);
}

}  // namespace dent
