// dent/grad_check.h

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

// Gradients of objectives written once for both scalar types, and the
// central finite-difference oracle that checks them.
//
// An objective is any callable f(std::span<const S> u, BranchTrace *trace)
// returning S, for S = double and S = Var.

#ifndef DENT_GRAD_CHECK_H_
#define DENT_GRAD_CHECK_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dent/autodiff.h"
#include "dent/dsp.h"
#include "dent/free_params.h"
#include "dent/spectral_loss.h"

namespace dent {

struct GradOptions {
  // Called on the fresh tape before the objective runs (fault injection).
  std::function<void(Tape &)> configure_tape;
};

struct ValueAndGrad {
  double value = 0.0;
  std::vector<double> grad;
  std::size_t tape_size = 0;
};

template <class F>
ValueAndGrad value_and_grad(F &&f, std::span<const double> at,
                            const GradOptions &opts = {}) {
  Tape tape;
  if (opts.configure_tape) opts.configure_tape(tape);
  std::vector<Var> u;
  u.reserve(at.size());
  for (double v : at) u.push_back(Var::variable(tape, v));
  const Var out = f(std::span<const Var>(u), static_cast<BranchTrace *>(nullptr));
  ValueAndGrad r;
  r.value = out.value();
  r.grad.assign(at.size(), 0.0);
  r.tape_size = tape.size();
  if (!std::isfinite(r.value))
    throw NumericalError("objective value is not finite");
  if (!out.active()) return r;
  const std::vector<double> adj = tape.adjoints(out.index());
  for (std::size_t i = 0; i < u.size(); ++i) r.grad[i] = adj[u[i].index()];
  return r;
}

template <class F>
std::vector<double> grad(F &&f, std::span<const double> at,
                         const GradOptions &opts = {}) {
  return value_and_grad(std::forward<F>(f), at, opts).grad;
}

// kFreeze evaluates perturbed points with the branch pattern of the
// evaluation point, i.e. the exact function the tape differentiates.
// kExclude uses plain perturbed evaluations and skips any parameter whose
// +-step crosses a branch kink. Under both policies a parameter is skipped
// when its step comes within 2h of a zero spectral magnitude, the one kink a
// branch pattern cannot freeze.
enum class KinkPolicy { kFreeze, kExclude };

struct FdCheckOptions {
  double step = 1e-4;
  double tolerance = 1e-3;
  // Components with max(|analytic|, |numeric|) at or below this are not
  // judged.
  double gradient_floor = 1e-8;
  KinkPolicy kink_policy = KinkPolicy::kFreeze;
  // Neighbourhood of a zero magnitude, in steps (see BranchTrace::watch_zero).
  // Closer than this the third-order term of log(|X|) dominates the
  // central difference.
  double zero_radius = 10.0;
  GradOptions grad;
  // Optional subset of indices to check; empty means all.
  std::vector<std::size_t> indices;
};

struct FdCheckEntry {
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  std::size_t kink_crossings = 0;
  std::size_t near_kinks = 0;
  bool judged = false;
  bool pass = true;
};

struct FdCheckReport {
  std::vector<FdCheckEntry> entries;
  double value = 0.0;
  std::size_t judged = 0;
  std::size_t failed = 0;
  std::size_t kink_affected = 0;
  double max_rel_error = 0.0;
  bool passed() const { return failed == 0; }
  std::vector<std::size_t> failed_indices() const;
};

double relative_error(double a, double b);

// Central differences are evaluated in long double when the objective
// accepts it, which keeps their rounding noise far below the gradient floor.
template <class F>
FdCheckReport fd_check(F &&f, std::span<const double> at,
                       const FdCheckOptions &opts = {}) {
  if (!(opts.step > 0.0)) throw InvalidArgument("fd_check: step must be > 0");
  using Real = std::conditional_t<
      std::is_invocable_v<F &, std::span<const long double>, BranchTrace *>,
      long double, double>;
  FdCheckReport report;
  BranchTrace trace(BranchTrace::Mode::kRecord);
  trace.set_zero_radius(opts.zero_radius);
  std::vector<Real> u(at.begin(), at.end());
  report.value = static_cast<double>(f(std::span<const Real>(u), &trace));
  const std::vector<double> analytic = grad(f, at, opts.grad);
  std::vector<std::size_t> indices = opts.indices;
  if (indices.empty()) {
    indices.resize(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) indices[i] = i;
  }
  auto eval = [&](FdCheckEntry &e) {
    if (opts.kink_policy == KinkPolicy::kFreeze)
      trace.start_replay();
    else
      trace.start_compare();
    const Real v = f(std::span<const Real>(u), &trace);
    e.kink_crossings += trace.crossings();
    e.near_kinks += trace.near_kinks();
    return v;
  };
  for (std::size_t i : indices) {
    FdCheckEntry e;
    e.index = i;
    e.analytic = analytic.at(i);
    const Real base = u.at(i);
    u[i] = base + static_cast<Real>(opts.step);
    const Real fp = eval(e);
    u[i] = base - static_cast<Real>(opts.step);
    const Real fm = eval(e);
    u[i] = base;
    e.numeric =
        static_cast<double>((fp - fm) / (2 * static_cast<Real>(opts.step)));
    e.rel_error = relative_error(e.analytic, e.numeric);
    const bool excluded =
        e.near_kinks > 0 ||
        (opts.kink_policy == KinkPolicy::kExclude && e.kink_crossings > 0);
    if (e.kink_crossings > 0 || e.near_kinks > 0) ++report.kink_affected;
    e.judged = !excluded && std::max(std::abs(e.analytic),
                                     std::abs(e.numeric)) > opts.gradient_floor;
    if (e.judged) {
      ++report.judged;
      e.pass = e.rel_error < opts.tolerance;
      if (!e.pass) ++report.failed;
      report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
    }
    report.entries.push_back(e);
  }
  return report;
}

/// MSSL between the simulated chain output for the clean input (noise pinned
/// by a seed) and a fixed target, as a function of the free parameters.
struct ChainObjective {
  std::vector<double> clean;
  std::vector<double> target;
  std::vector<double> white;
  double lambda = 1.0;
  int ds_factor = 16;
  GainConvention convention = GainConvention::kReduction;

  ChainObjective(std::vector<double> clean_in, std::vector<double> target_in,
                 std::uint64_t noise_seed, double lambda_in, int ds);

  template <class S>
  S operator()(std::span<const S> u, BranchTrace *trace) const {
    const ChainSettings<S> s = map_free<S>(u, lambda, ds_factor);
    DspOptions opts;
    opts.convention = convention;
    opts.trace = trace;
    const std::vector<S> sim = simulate<S>(clean, white, s, opts);
    return mssl(std::span<const S>(sim), target, trace);
  }
};

}  // namespace dent

#endif  // DENT_GRAD_CHECK_H_
