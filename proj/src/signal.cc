// src/signal.cc

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

#include "dent/signal.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace dent {

namespace {

std::string join_violations(const std::vector<std::string> &v) {
  std::ostringstream os;
  os << "parameter schema violation";
  for (const auto &s : v) os << "; " << s;
  return os.str();
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> violations)
    : DataError(join_violations(violations)),
      violations_(std::move(violations)) {}

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0)
    throw InvalidArgument("AudioBuffer: sample_rate must be positive, got " +
                          std::to_string(sample_rate_));
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw InvalidArgument("AudioBuffer: non-finite sample at index " +
                            std::to_string(i));
  }
}

AudioBuffer AudioBuffer::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > samples_.size())
    throw InvalidArgument("AudioBuffer::slice: range out of bounds");
  return AudioBuffer(
      std::vector<double>(samples_.begin() + begin,
                          samples_.begin() + begin + count),
      sample_rate_);
}

void DrcParams::validate() const {
  if (!std::isfinite(threshold_db) || !std::isfinite(makeup_db))
    throw InvalidArgument("DrcParams: threshold and makeup must be finite");
  if (!(ratio >= 1.0) || !std::isfinite(ratio))
    throw InvalidArgument("DrcParams: ratio must be >= 1, got " +
                          std::to_string(ratio));
  if (!(alpha_attack > 0.0 && alpha_attack < 1.0))
    throw InvalidArgument("DrcParams: alpha_attack must lie in (0, 1), got " +
                          std::to_string(alpha_attack));
  if (!(alpha_release > 0.0 && alpha_release < 1.0))
    throw InvalidArgument("DrcParams: alpha_release must lie in (0, 1), got " +
                          std::to_string(alpha_release));
}

EqParams::EqParams() : fr_mag_(kEqBins, 1.0) {}

EqParams::EqParams(std::vector<double> fr_mag) : fr_mag_(std::move(fr_mag)) {
  if (fr_mag_.size() != kEqBins)
    throw InvalidArgument("EqParams: expected " + std::to_string(kEqBins) +
                          " bins, got " + std::to_string(fr_mag_.size()));
  for (std::size_t i = 0; i < fr_mag_.size(); ++i) {
    if (!(fr_mag_[i] >= 0.0) || !std::isfinite(fr_mag_[i]))
      throw InvalidArgument("EqParams: bin " + std::to_string(i) +
                            " must be finite and non-negative");
  }
}

DentParams::DentParams(double g_distort, DrcParams drc, EqParams eq_audio,
                       EqParams eq_noise, double noise_amplitude,
                       double lambda, int ds_factor, int sample_rate)
    : g_distort_(g_distort),
      drc_(drc),
      eq_audio_(std::move(eq_audio)),
      eq_noise_(std::move(eq_noise)),
      noise_amplitude_(noise_amplitude),
      lambda_(lambda),
      ds_factor_(ds_factor),
      sample_rate_(sample_rate) {
  if (!(g_distort_ > 0.0) || !std::isfinite(g_distort_))
    throw InvalidArgument("DentParams: g_distort must be > 0");
  drc_.validate();
  if (!(noise_amplitude_ > 0.0) || !std::isfinite(noise_amplitude_))
    throw InvalidArgument("DentParams: noise_amplitude must be > 0");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_))
    throw InvalidArgument("DentParams: lambda must be >= 0");
  if (ds_factor_ < 1)
    throw InvalidArgument("DentParams: ds_factor must be >= 1");
  if (sample_rate_ <= 0)
    throw InvalidArgument("DentParams: sample_rate must be positive");
}

DentParams DentParams::with_lambda(double lambda) const {
  DentParams p = *this;
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("DentParams: lambda must be >= 0");
  p.lambda_ = lambda;
  return p;
}

DentParams DentParams::with_ds_factor(int ds_factor) const {
  DentParams p = *this;
  if (ds_factor < 1) throw InvalidArgument("DentParams: ds_factor must be >= 1");
  p.ds_factor_ = ds_factor;
  return p;
}

double to_db(double x) {
  return 20.0 * std::log10(std::max(std::abs(x), kDbFloor));
}

std::vector<double> to_db(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = to_db(x[i]);
  return out;
}

double from_db(double x_db, double sign) {
  return sign * std::pow(10.0, x_db / 20.0);
}

std::vector<double> from_db(std::span<const double> x_db,
                            std::span<const double> signs) {
  if (x_db.size() != signs.size())
    throw InvalidArgument("from_db: length mismatch between levels and signs");
  std::vector<double> out(x_db.size());
  for (std::size_t i = 0; i < x_db.size(); ++i)
    out[i] = from_db(x_db[i], signs[i]);
  return out;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> signs_of(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sign_of(x[i]);
  return out;
}

}  // namespace dent
