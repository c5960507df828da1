// dent/autodiff.h

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

// Reverse-mode differentiation over a scalar tape. Scalar arithmetic records
// one node per operation with its local partials; whole-signal operations
// (FIR design, convolution, spectral loss) are recorded as vector blocks that
// carry their own vector-Jacobian product, so the tape stays linear in the
// signal length.
//
// The same DSP code runs on plain doubles and on Var; templates use
// value_of() for comparisons and decide() for every branch so that a
// BranchTrace can record and replay the branch pattern.

#ifndef DENT_AUTODIFF_H_
#define DENT_AUTODIFF_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dent/error.h"

namespace dent {

enum class Op : std::uint8_t {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kAtan,
  kLog,
  kExp,
  kSqrt,
  kSoftplus,
  kSigmoid,
  kBlock,
  kBlockOutput,
  kCount
};

const char *op_name(Op op);

class Tape {
 public:
  using Index = std::uint32_t;
  static constexpr Index kNone = std::numeric_limits<Index>::max();

  // Vector-Jacobian product of a block: given the adjoints of the block
  // outputs, return the adjoints of its inputs (same order as registered).
  using Vjp = std::function<void(std::span<const double> out_adjoint,
                                 std::span<double> in_adjoint)>;

  Tape() { fault_scale_.fill(1.0); }
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Index leaf() { return push(Op::kLeaf, kNone, 0.0, kNone, 0.0); }
  Index unary(Op op, Index a, double da) {
    return push(op, a, da * fault_scale_[static_cast<int>(op)], kNone, 0.0);
  }
  Index binary(Op op, Index a, double da, Index b, double db) {
    const double s = fault_scale_[static_cast<int>(op)];
    return push(op, a, da * s, b, db * s);
  }

  // Registers a block with `n_out` outputs reading the listed inputs
  // (kNone entries are constants). Returns the index of the first output.
  Index block(std::string name, std::vector<Index> inputs, std::size_t n_out,
              Vjp vjp);

  // Reverse sweep seeded with d(output)/d(output) = 1. Returns the adjoint of
  // every node. Throws NumericalError naming the first node (in sweep order)
  // whose partials push a non-finite value into an input's adjoint.
  std::vector<double> adjoints(Index output) const;

  std::size_t size() const { return nodes_.size(); }

  // Multiplies every partial recorded for `op` by `scale`. Test hook for the
  // gradient checker.
  void inject_fault(Op op, double scale) {
    fault_scale_[static_cast<int>(op)] = scale;
  }

 private:
  struct Node {
    Index a;
    Index b;
    double da;
    double db;
    Op op;
  };
  struct Block {
    std::string name;
    std::vector<Index> inputs;
    std::size_t n_out;
    Vjp vjp;
  };

  Index push(Op op, Index a, double da, Index b, double db) {
    nodes_.push_back(Node{a, b, da, db, op});
    return static_cast<Index>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  std::vector<Block> blocks_;
  std::array<double, static_cast<int>(Op::kCount)> fault_scale_;
};

/// Differentiable scalar. A Var without a tape is a constant.
class Var {
 public:
  Var() = default;
  Var(double v) : value_(v) {}  // NOLINT: constants convert implicitly
  Var(double v, Tape *tape, Tape::Index index)
      : value_(v), tape_(tape), index_(index) {}

  static Var variable(Tape &tape, double v) { return Var(v, &tape, tape.leaf()); }

  double value() const { return value_; }
  Tape *tape() const { return tape_; }
  Tape::Index index() const { return index_; }
  bool active() const { return tape_ != nullptr; }

 private:
  double value_ = 0.0;
  Tape *tape_ = nullptr;
  Tape::Index index_ = Tape::kNone;
};

inline double value_of(double x) { return x; }
inline long double value_of(long double x) { return x; }
inline double value_of(const Var &x) { return x.value(); }

namespace internal {

inline Var unary(Op op, const Var &a, double value, double da) {
  if (!a.active()) return Var(value);
  return Var(value, a.tape(), a.tape()->unary(op, a.index(), da));
}

inline Var binary(Op op, const Var &a, const Var &b, double value, double da,
                  double db) {
  if (!a.active() && !b.active()) return Var(value);
  if (!b.active()) return unary(op, a, value, da);
  if (!a.active()) return Var(value, b.tape(), b.tape()->unary(op, b.index(), db));
  return Var(value, a.tape(),
             a.tape()->binary(op, a.index(), da, b.index(), db));
}

}  // namespace internal

inline Var operator+(const Var &a, const Var &b) {
  return internal::binary(Op::kAdd, a, b, a.value() + b.value(), 1.0, 1.0);
}
inline Var operator-(const Var &a, const Var &b) {
  return internal::binary(Op::kSub, a, b, a.value() - b.value(), 1.0, -1.0);
}
inline Var operator*(const Var &a, const Var &b) {
  return internal::binary(Op::kMul, a, b, a.value() * b.value(), b.value(),
                          a.value());
}
inline Var operator/(const Var &a, const Var &b) {
  const double q = a.value() / b.value();
  return internal::binary(Op::kDiv, a, b, q, 1.0 / b.value(), -q / b.value());
}
inline Var operator-(const Var &a) {
  return internal::unary(Op::kNeg, a, -a.value(), -1.0);
}
inline Var &operator+=(Var &a, const Var &b) { return a = a + b; }
inline Var &operator-=(Var &a, const Var &b) { return a = a - b; }
inline Var &operator*=(Var &a, const Var &b) { return a = a * b; }

inline Var atan(const Var &a) {
  const double x = a.value();
  return internal::unary(Op::kAtan, a, std::atan(x), 1.0 / (1.0 + x * x));
}
inline Var log(const Var &a) {
  return internal::unary(Op::kLog, a, std::log(a.value()), 1.0 / a.value());
}
inline Var log10(const Var &a) {
  return internal::unary(Op::kLog, a, std::log10(a.value()),
                         1.0 / (a.value() * std::log(10.0)));
}
inline Var exp(const Var &a) {
  const double e = std::exp(a.value());
  return internal::unary(Op::kExp, a, e, e);
}
inline Var sqrt(const Var &a) {
  const double s = std::sqrt(a.value());
  return internal::unary(Op::kSqrt, a, s, 0.5 / s);
}

template <std::floating_point T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}
template <std::floating_point T>
T softplus(T x) {
  return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}
inline Var sigmoid(const Var &a) {
  const double s = sigmoid(a.value());
  return internal::unary(Op::kSigmoid, a, s, s * (1.0 - s));
}
inline Var softplus(const Var &a) {
  return internal::unary(Op::kSoftplus, a, softplus(a.value()),
                         sigmoid(a.value()));
}

// Registers a vector operation on the tape of the first active input. If no
// input is active the outputs are returned as constants.
std::vector<Var> vector_op(std::string name, std::span<const Var> inputs,
                           std::vector<double> outputs, Tape::Vjp vjp);

std::vector<double> values_of(std::span<const Var> x);
inline std::vector<double> values_of(std::span<const double> x) {
  return {x.begin(), x.end()};
}

/// Records the outcome of every data-dependent branch in a forward pass and
/// replays it. Replaying evaluates the same piecewise-smooth function the
/// tape differentiates, even when a perturbation would cross a kink; crossed
/// kinks are counted.
class BranchTrace {
 public:
  // kRecord stores natural decisions. kReplay returns the stored ones.
  // kCompare returns natural decisions but counts disagreements.
  enum class Mode { kRecord, kReplay, kCompare };

  explicit BranchTrace(Mode mode = Mode::kRecord) : mode_(mode) {}

  bool decide(bool natural) {
    if (mode_ == Mode::kRecord) {
      decisions_.push_back(natural);
      return natural;
    }
    if (cursor_ >= decisions_.size())
      throw InvalidArgument("BranchTrace: ran past recorded decisions");
    const bool recorded = decisions_[cursor_++];
    if (recorded != natural) ++crossings_;
    return mode_ == Mode::kReplay ? recorded : natural;
  }

  // Watches a quantity whose kink sits at zero (a spectral magnitude). On a
  // replayed or compared pass, counts a near-kink hit when the straight line
  // through the recorded and current values reaches zero within
  // zero_radius() perturbations, i.e. recorded < radius |current - recorded|.
  void watch_zero(double level) {
    if (mode_ == Mode::kRecord) {
      levels_.push_back(level);
      return;
    }
    if (level_cursor_ >= levels_.size())
      throw InvalidArgument("BranchTrace: ran past recorded levels");
    const double recorded = levels_[level_cursor_++];
    if (recorded < zero_radius_ * std::abs(level - recorded)) ++near_kinks_;
  }

  double zero_radius() const { return zero_radius_; }
  void set_zero_radius(double r) { zero_radius_ = r; }

  // Switches to replay from the first decision and clears the counters.
  void start_replay() { restart(Mode::kReplay); }
  void start_compare() { restart(Mode::kCompare); }

  Mode mode() const { return mode_; }
  std::size_t size() const { return decisions_.size(); }
  std::size_t crossings() const { return crossings_; }
  std::size_t near_kinks() const { return near_kinks_; }

 private:
  void restart(Mode mode) {
    mode_ = mode;
    cursor_ = 0;
    level_cursor_ = 0;
    crossings_ = 0;
    near_kinks_ = 0;
  }

  Mode mode_;
  std::vector<bool> decisions_;
  std::vector<double> levels_;
  std::size_t cursor_ = 0;
  std::size_t level_cursor_ = 0;
  std::size_t crossings_ = 0;
  std::size_t near_kinks_ = 0;
  double zero_radius_ = 2.0;
};

inline bool decide(BranchTrace *trace, bool natural) {
  return trace != nullptr ? trace->decide(natural) : natural;
}

}  // namespace dent

#endif  // DENT_AUTODIFF_H_
