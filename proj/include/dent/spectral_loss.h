// dent/spectral_loss.h

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

#ifndef DENT_SPECTRAL_LOSS_H_
#define DENT_SPECTRAL_LOSS_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dent/autodiff.h"
#include "dent/signal.h"

namespace dent {

inline constexpr std::array<int, 6> kMsslFftSizes = {2048, 1024, 512,
                                                     256,  128,  64};
// Offset inside the log-magnitude term.
inline constexpr double kLogMagOffset = 1e-6;

/// |STFT| with a periodic Hann window of fft_size samples, hop fft_size / 4
/// and centered frames (fft_size / 2 zeros on each side).
struct Spectrogram {
  int fft_size = 0;
  int hop = 0;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> mag;  // row-major, frames x bins

  double at(std::size_t frame, std::size_t bin) const {
    return mag[frame * bins + bin];
  }
};

using SpectrogramSet = std::array<Spectrogram, kMsslFftSizes.size()>;

bool is_mssl_fft_size(int fft_size);

// Throws InvalidArgument for sizes outside kMsslFftSizes.
Spectrogram stft_mag(std::span<const double> x, int fft_size);
SpectrogramSet spectrogram_set(std::span<const double> x);

// Per-scale mean |A - B| + mean |log(A + d) - log(B + d)| summed over all
// scales.
double mssl(std::span<const double> a, std::span<const double> b,
            BranchTrace *trace = nullptr);
double mssl(const AudioBuffer &a, const AudioBuffer &b);

// Extended-precision evaluation, used by the finite-difference oracle.
long double mssl(std::span<const long double> a, std::span<const double> b,
                 BranchTrace *trace = nullptr);

// Differentiable in a; b is a fixed target.
Var mssl(std::span<const Var> a, std::span<const double> b,
         BranchTrace *trace = nullptr);

}  // namespace dent

#endif  // DENT_SPECTRAL_LOSS_H_
