// dent/fft.h

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

// Thin wrapper over FFTW real transforms in double and long double. Plans
// are created once per size and shared; execution is reentrant. The long
// double transforms back the extended-precision evaluation used by the
// finite-difference oracle.

#ifndef DENT_FFT_H_
#define DENT_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dent::fft {

using Complex = std::complex<double>;
using ComplexL = std::complex<long double>;

// Smallest size >= n whose only prime factors are 2, 3 and 5.
std::size_t good_size(std::size_t n);

// out[k] = sum_t in[t] exp(-2 pi i k t / n), k in [0, n/2]. n = in.size(),
// out.size() must be n/2 + 1.
void rfft(std::span<const double> in, std::span<Complex> out);
void rfft(std::span<const long double> in, std::span<ComplexL> out);

// Unnormalized inverse of rfft: out[t] = sum over the Hermitian extension of
// in. The imaginary parts of in[0] and (even n) in[n/2] are ignored.
// in.size() must be out.size()/2 + 1.
void irfft(std::span<const Complex> in, std::span<double> out);
void irfft(std::span<const ComplexL> in, std::span<long double> out);

// Full linear convolution, length a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b);
std::vector<long double> convolve(std::span<const long double> a,
                                  std::span<const long double> b);

}  // namespace dent::fft

#endif  // DENT_FFT_H_
