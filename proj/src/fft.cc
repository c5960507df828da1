// src/fft.cc

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

#include "dent/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "dent/error.h"

namespace dent::fft {

namespace {

enum class Kind { kR2C, kC2R };

template <class T>
struct Fftw;

template <>
struct Fftw<double> {
  using Plan = fftw_plan;
  using Cx = fftw_complex;
  static Plan r2c(int n, double *r, Cx *c, unsigned f) {
    return fftw_plan_dft_r2c_1d(n, r, c, f);
  }
  static Plan c2r(int n, Cx *c, double *r, unsigned f) {
    return fftw_plan_dft_c2r_1d(n, c, r, f);
  }
  static void exec_r2c(Plan p, double *r, Cx *c) { fftw_execute_dft_r2c(p, r, c); }
  static void exec_c2r(Plan p, Cx *c, double *r) { fftw_execute_dft_c2r(p, c, r); }
  static double *alloc_real(int n) { return fftw_alloc_real(n); }
  static Cx *alloc_complex(int n) { return fftw_alloc_complex(n); }
  static void free(void *p) { fftw_free(p); }
  static void destroy(Plan p) { fftw_destroy_plan(p); }
};

template <>
struct Fftw<long double> {
  using Plan = fftwl_plan;
  using Cx = fftwl_complex;
  static Plan r2c(int n, long double *r, Cx *c, unsigned f) {
    return fftwl_plan_dft_r2c_1d(n, r, c, f);
  }
  static Plan c2r(int n, Cx *c, long double *r, unsigned f) {
    return fftwl_plan_dft_c2r_1d(n, c, r, f);
  }
  static void exec_r2c(Plan p, long double *r, Cx *c) {
    fftwl_execute_dft_r2c(p, r, c);
  }
  static void exec_c2r(Plan p, Cx *c, long double *r) {
    fftwl_execute_dft_c2r(p, c, r);
  }
  static long double *alloc_real(int n) { return fftwl_alloc_real(n); }
  static Cx *alloc_complex(int n) { return fftwl_alloc_complex(n); }
  static void free(void *p) { fftwl_free(p); }
  static void destroy(Plan p) { fftwl_destroy_plan(p); }
};

// FFTW's planner is not thread safe, so one mutex guards both caches.
std::mutex &planner_mutex() {
  static std::mutex mu;
  return mu;
}

template <class T>
class PlanCache {
 public:
  using F = Fftw<T>;
  ~PlanCache() {
    for (auto &kv : plans_) F::destroy(kv.second);
  }

  typename F::Plan get(Kind kind, int n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = plans_.find({kind, n});
    if (it != plans_.end()) return it->second;
    T *r = F::alloc_real(n);
    typename F::Cx *c = F::alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    typename F::Plan p = kind == Kind::kR2C ? F::r2c(n, r, c, flags)
                                            : F::c2r(n, c, r, flags);
    F::free(r);
    F::free(c);
    plans_.emplace(std::make_pair(kind, n), p);
    return p;
  }

 private:
  std::map<std::pair<Kind, int>, typename F::Plan> plans_;
};

template <class T>
PlanCache<T> &cache() {
  static PlanCache<T> c;
  return c;
}

template <class T>
void rfft_impl(std::span<const T> in, std::span<std::complex<T>> out) {
  using F = Fftw<T>;
  const std::size_t n = in.size();
  if (n == 0 || out.size() != n / 2 + 1)
    throw InvalidArgument("fft::rfft: output must hold n/2 + 1 bins");
  auto p = cache<T>().get(Kind::kR2C, static_cast<int>(n));
  F::exec_r2c(p, const_cast<T *>(in.data()),
              reinterpret_cast<typename F::Cx *>(out.data()));
}

template <class T>
void irfft_impl(std::span<const std::complex<T>> in, std::span<T> out) {
  using F = Fftw<T>;
  const std::size_t n = out.size();
  if (n == 0 || in.size() != n / 2 + 1)
    throw InvalidArgument("fft::irfft: input must hold n/2 + 1 bins");
  // c2r overwrites its input.
  std::vector<std::complex<T>> scratch(in.begin(), in.end());
  auto p = cache<T>().get(Kind::kC2R, static_cast<int>(n));
  F::exec_c2r(p, reinterpret_cast<typename F::Cx *>(scratch.data()),
              out.data());
}

template <class T>
std::vector<T> convolve_impl(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  if (std::min(a.size(), b.size()) <= 32) {
    std::vector<T> out(len, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }
  const std::size_t n = good_size(len);
  std::vector<T> pa(n, T(0)), pb(n, T(0));
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<T>> fa(n / 2 + 1), fb(n / 2 + 1);
  rfft_impl<T>(pa, fa);
  rfft_impl<T>(pb, fb);
  const T scale = T(1) / static_cast<T>(n);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k] * scale;
  irfft_impl<T>(fa, pa);
  pa.resize(len);
  return pa;
}

}  // namespace

std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2, 3, 5})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

void rfft(std::span<const double> in, std::span<Complex> out) {
  rfft_impl<double>(in, out);
}
void rfft(std::span<const long double> in, std::span<ComplexL> out) {
  rfft_impl<long double>(in, out);
}

void irfft(std::span<const Complex> in, std::span<double> out) {
  irfft_impl<double>(in, out);
}
void irfft(std::span<const ComplexL> in, std::span<long double> out) {
  irfft_impl<long double>(in, out);
}

std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b) {
  return convolve_impl<double>(a, b);
}
std::vector<long double> convolve(std::span<const long double> a,
                                  std::span<const long double> b) {
  return convolve_impl<long double>(a, b);
}

}  // namespace dent::fft
