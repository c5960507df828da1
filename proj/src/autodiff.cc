// src/autodiff.cc

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

#include "dent/autodiff.h"

#include <sstream>
#include <utility>

namespace dent {

const char *op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kDiv: return "div";
    case Op::kNeg: return "neg";
    case Op::kAtan: return "atan";
    case Op::kLog: return "log";
    case Op::kExp: return "exp";
    case Op::kSqrt: return "sqrt";
    case Op::kSoftplus: return "softplus";
    case Op::kSigmoid: return "sigmoid";
    case Op::kBlock: return "block";
    case Op::kBlockOutput: return "block-output";
    case Op::kCount: break;
  }
  return "unknown";
}

Tape::Index Tape::block(std::string name, std::vector<Index> inputs,
                        std::size_t n_out, Vjp vjp) {
  if (n_out == 0) throw InvalidArgument("Tape::block: block without outputs");
  const auto id = static_cast<Index>(blocks_.size());
  blocks_.push_back(Block{std::move(name), std::move(inputs), n_out,
                          std::move(vjp)});
  const Index first = push(Op::kBlock, id, 0.0, kNone, 0.0);
  for (std::size_t k = 1; k < n_out; ++k)
    push(Op::kBlockOutput, kNone, 0.0, kNone, 0.0);
  return first;
}

std::vector<double> Tape::adjoints(Index output) const {
  if (output >= nodes_.size())
    throw InvalidArgument("Tape::adjoints: output index out of range");
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[output] = 1.0;
  // Names the node whose local partials produced a non-finite adjoint.
  auto fail = [&](std::size_t j) {
    const Node &n = nodes_[j];
    std::ostringstream os;
    os << "non-finite adjoint from tape node " << j << " (" << op_name(n.op);
    if (n.op == Op::kBlock) os << " '" << blocks_[n.a].name << "'";
    os << ")";
    throw NumericalError(os.str());
  };
  if (!std::isfinite(adj[output])) fail(output);
  std::vector<double> in_adj;
  for (std::size_t j = output + 1; j-- > 0;) {
    const Node &n = nodes_[j];
    const double g = adj[j];
    switch (n.op) {
      case Op::kLeaf:
      case Op::kBlockOutput:
        break;
      case Op::kBlock: {
        const Block &b = blocks_[n.a];
        // Block outputs occupy [j, j + n_out); all of them are already final.
        std::span<const double> out_adj(adj.data() + j, b.n_out);
        bool any = false;
        for (double v : out_adj) any = any || v != 0.0;
        if (!any) break;
        in_adj.assign(b.inputs.size(), 0.0);
        b.vjp(out_adj, in_adj);
        for (std::size_t k = 0; k < b.inputs.size(); ++k) {
          if (b.inputs[k] == kNone) continue;
          if (!std::isfinite(in_adj[k])) fail(j);
          adj[b.inputs[k]] += in_adj[k];
        }
        break;
      }
      default:
        if (g == 0.0) break;
        if (n.a != kNone) {
          const double d = g * n.da;
          if (!std::isfinite(d)) fail(j);
          adj[n.a] += d;
        }
        if (n.b != kNone) {
          const double d = g * n.db;
          if (!std::isfinite(d)) fail(j);
          adj[n.b] += d;
        }
        break;
    }
  }
  return adj;
}

std::vector<Var> vector_op(std::string name, std::span<const Var> inputs,
                           std::vector<double> outputs, Tape::Vjp vjp) {
  Tape *tape = nullptr;
  std::vector<Tape::Index> idx(inputs.size(), Tape::kNone);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!inputs[k].active()) continue;
    if (tape == nullptr) tape = inputs[k].tape();
    if (inputs[k].tape() != tape)
      throw InvalidArgument("vector_op: inputs recorded on different tapes");
    idx[k] = inputs[k].index();
  }
  std::vector<Var> out(outputs.size());
  if (tape == nullptr || outputs.empty()) {
    for (std::size_t k = 0; k < outputs.size(); ++k) out[k] = Var(outputs[k]);
    return out;
  }
  const Tape::Index first =
      tape->block(std::move(name), std::move(idx), outputs.size(),
                  std::move(vjp));
  for (std::size_t k = 0; k < outputs.size(); ++k)
    out[k] = Var(outputs[k], tape, first + static_cast<Tape::Index>(k));
  return out;
}

std::vector<double> values_of(std::span<const Var> x) {
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k].value();
  return out;
}

}  // namespace dent
