// src/spectral_loss.cc

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

#include "dent/spectral_loss.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>
#include <string>

#include "dent/fft.h"

namespace dent {

namespace {

std::vector<double> hann(int n) {
  std::vector<double> w(n);
  for (int t = 0; t < n; ++t)
    w[t] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / n);
  return w;
}

template <class T>
struct ComplexStft {
  int fft_size;
  int hop;
  std::size_t frames;
  std::size_t bins;
  std::vector<std::complex<T>> spec;  // frames x bins
};

std::size_t frame_count(std::size_t len, int hop) {
  return 1 + len / static_cast<std::size_t>(hop);
}

template <class T>
ComplexStft<T> stft(std::span<const T> x, int fft_size) {
  if (!is_mssl_fft_size(fft_size))
    throw InvalidArgument("stft: unsupported fft size " +
                          std::to_string(fft_size));
  ComplexStft<T> s;
  s.fft_size = fft_size;
  s.hop = fft_size / 4;
  s.frames = frame_count(x.size(), s.hop);
  s.bins = static_cast<std::size_t>(fft_size) / 2 + 1;
  s.spec.resize(s.frames * s.bins);
  const std::vector<double> w = hann(fft_size);
  const auto half = static_cast<std::ptrdiff_t>(fft_size / 2);
  const auto len = static_cast<std::ptrdiff_t>(x.size());
  std::vector<T> frame(fft_size);
  for (std::size_t f = 0; f < s.frames; ++f) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(f) * s.hop - half;
    for (int t = 0; t < fft_size; ++t) {
      const std::ptrdiff_t i = start + t;
      frame[t] = (i >= 0 && i < len) ? w[t] * x[i] : T(0);
    }
    fft::rfft(std::span<const T>(frame),
              std::span<std::complex<T>>(s.spec.data() + f * s.bins, s.bins));
  }
  return s;
}

// Adds the adjoint of stft() for the given spectrum adjoint (d/dRe + i d/dIm)
// into x_adj.
void stft_adjoint(const std::vector<fft::Complex> &spec_adj, int fft_size,
                  std::size_t frames, std::span<double> x_adj) {
  const std::size_t bins = static_cast<std::size_t>(fft_size) / 2 + 1;
  const int hop = fft_size / 4;
  const std::vector<double> w = hann(fft_size);
  const auto half = static_cast<std::ptrdiff_t>(fft_size / 2);
  const auto len = static_cast<std::ptrdiff_t>(x_adj.size());
  std::vector<fft::Complex> y(bins);
  std::vector<double> frame(fft_size);
  for (std::size_t f = 0; f < frames; ++f) {
    // Re sum_{k <= n/2} Xbar_k e^{+i..}: halve interior bins so that the
    // Hermitian inverse counts each once.
    for (std::size_t k = 0; k < bins; ++k) {
      const fft::Complex v = spec_adj[f * bins + k];
      y[k] = (k == 0 || k == bins - 1) ? v : 0.5 * v;
    }
    fft::irfft(y, frame);
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(f) * hop - half;
    for (int t = 0; t < fft_size; ++t) {
      const std::ptrdiff_t i = start + t;
      if (i >= 0 && i < len) x_adj[i] += w[t] * frame[t];
    }
  }
}

// Loss and, optionally, its gradient with respect to a. T is the working
// precision; the gradient is only produced in double.
template <class T>
T mssl_kernel(std::span<const T> a, std::span<const double> b,
              BranchTrace *trace, std::vector<double> *grad_a) {
  if (a.size() != b.size())
    throw InvalidArgument("mssl: length mismatch " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
  if (a.empty()) throw InvalidArgument("mssl: empty signals");
  if (grad_a != nullptr) grad_a->assign(a.size(), 0.0);
  const std::vector<T> bt(b.begin(), b.end());
  const T offset = kLogMagOffset;
  T total = 0;
  for (int n : kMsslFftSizes) {
    const ComplexStft<T> sa = stft<T>(a, n);
    const ComplexStft<T> sb = stft<T>(bt, n);
    const std::size_t count = sa.spec.size();
    const T inv = T(1) / static_cast<T>(count);
    T lin = 0;
    T lg = 0;
    std::vector<fft::Complex> spec_adj;
    if (grad_a != nullptr) spec_adj.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const T ma = std::abs(sa.spec[i]);
      const T mb = std::abs(sb.spec[i]);
      if (trace != nullptr) trace->watch_zero(static_cast<double>(ma));
      const T d = ma - mb;
      const T s_lin = decide(trace, d >= 0) ? 1 : -1;
      const T dl = std::log(ma + offset) - std::log(mb + offset);
      const T s_log = decide(trace, dl >= 0) ? 1 : -1;
      lin += s_lin * d;
      lg += s_log * dl;
      if constexpr (std::is_same_v<T, double>) {
        if (grad_a != nullptr && ma > 0.0) {
          const double dmag = (s_lin + s_log / (ma + offset)) * inv;
          spec_adj[i] = sa.spec[i] * (dmag / ma);
        }
      }
    }
    total += (lin + lg) * inv;
    if (grad_a != nullptr) stft_adjoint(spec_adj, n, sa.frames, *grad_a);
  }
  return total;
}

}  // namespace

bool is_mssl_fft_size(int fft_size) {
  return std::find(kMsslFftSizes.begin(), kMsslFftSizes.end(), fft_size) !=
         kMsslFftSizes.end();
}

Spectrogram stft_mag(std::span<const double> x, int fft_size) {
  if (x.empty()) throw InvalidArgument("stft_mag: empty signal");
  const ComplexStft<double> s = stft<double>(x, fft_size);
  Spectrogram out;
  out.fft_size = s.fft_size;
  out.hop = s.hop;
  out.frames = s.frames;
  out.bins = s.bins;
  out.mag.resize(s.spec.size());
  for (std::size_t i = 0; i < s.spec.size(); ++i)
    out.mag[i] = std::abs(s.spec[i]);
  return out;
}

SpectrogramSet spectrogram_set(std::span<const double> x) {
  SpectrogramSet set;
  for (std::size_t k = 0; k < kMsslFftSizes.size(); ++k)
    set[k] = stft_mag(x, kMsslFftSizes[k]);
  return set;
}

double mssl(std::span<const double> a, std::span<const double> b,
            BranchTrace *trace) {
  return mssl_kernel<double>(a, b, trace, nullptr);
}

double mssl(const AudioBuffer &a, const AudioBuffer &b) {
  if (a.sample_rate() != b.sample_rate())
    throw InvalidArgument("mssl: sample rate mismatch");
  return mssl_kernel<double>(a.samples(), b.samples(), nullptr, nullptr);
}

long double mssl(std::span<const long double> a, std::span<const double> b,
                 BranchTrace *trace) {
  return mssl_kernel<long double>(a, b, trace, nullptr);
}

Var mssl(std::span<const Var> a, std::span<const double> b,
         BranchTrace *trace) {
  std::vector<double> grad;
  const std::vector<double> av = values_of(a);
  const double loss = mssl_kernel<double>(av, b, trace, &grad);
  auto vjp = [grad = std::move(grad)](std::span<const double> out_adj,
                                      std::span<double> in_adj) {
    for (std::size_t i = 0; i < grad.size(); ++i)
      in_adj[i] = out_adj[0] * grad[i];
  };
  return vector_op("mssl", a, {loss}, std::move(vjp))[0];
}

}  // namespace dent
