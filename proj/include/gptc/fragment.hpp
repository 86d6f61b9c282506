// Copyright 2026 The gptc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gptc/errors.hpp"
#include "gptc/system_type.hpp"

namespace gptc {

/// One use of an apparatus: a named box with typed, positional ports.
/// Distinct settings or outcome sets make distinct operations even under the
/// same name; instance identity within a fragment is positional.
struct OperationInstance {
  std::string name;
  std::vector<std::string> inputs;   // type labels, one per input port
  std::vector<std::string> outputs;  // type labels, one per output port
  std::string setting;
  std::string outcome_set;

  friend bool operator==(const OperationInstance& a, const OperationInstance& b) {
    return a.name == b.name && a.inputs == b.inputs && a.outputs == b.outputs &&
           a.setting == b.setting && a.outcome_set == b.outcome_set;
  }
};

struct PortRef {
  int op = -1;
  int port = -1;
  friend bool operator==(const PortRef& a, const PortRef& b) {
    return a.op == b.op && a.port == b.port;
  }
};

/// Directed wire: producer output port -> consumer input port.
struct Wire {
  PortRef from;
  PortRef to;
  friend bool operator==(const Wire& a, const Wire& b) {
    return a.from == b.from && a.to == b.to;
  }
};

enum class Classification { Preparation, Result, TransformationMode, Circuit, General };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Preparation: return "preparation";
    case Classification::Result: return "result";
    case Classification::TransformationMode: return "transformation";
    case Classification::Circuit: return "circuit";
    case Classification::General: return "general";
  }
  return "?";
}

/// A wired collection of operations. Immutable: `connect` and `compose`
/// return new fragments. Wiring rules enforced throughout: at most one wire
/// per port, matching type labels, and no directed cycles.
class Fragment {
 public:
  Fragment() = default;

  static Fragment single(OperationInstance op) {
    Fragment f;
    f.ops_.push_back(std::move(op));
    f.rebuild_indices();
    return f;
  }

  Fragment with_op(OperationInstance op) const {
    Fragment f = *this;
    f.ops_.push_back(std::move(op));
    f.rebuild_indices();
    return f;
  }

  /// New fragment with the wire producer.out -> consumer.in added.
  Fragment connect(PortRef producer_out, PortRef consumer_in) const {
    check_port(producer_out, /*is_output=*/true);
    check_port(consumer_in, /*is_output=*/false);
    if (out_wire_of(producer_out) >= 0)
      throw PortOccupied("output port already wired: op " +
                         std::to_string(producer_out.op) + " port " +
                         std::to_string(producer_out.port));
    if (in_wire_of(consumer_in) >= 0)
      throw PortOccupied("input port already wired: op " +
                         std::to_string(consumer_in.op) + " port " +
                         std::to_string(consumer_in.port));
    const std::string& from_label = ops_[producer_out.op].outputs[producer_out.port];
    const std::string& to_label = ops_[consumer_in.op].inputs[consumer_in.port];
    if (from_label != to_label)
      throw TypeMismatch("cannot wire '" + from_label + "' output into '" +
                         to_label + "' input");
    if (reaches(consumer_in.op, producer_out.op))
      throw WouldCreateCycle("wiring op " + std::to_string(producer_out.op) +
                             " -> op " + std::to_string(consumer_in.op) +
                             " would close a loop");
    Fragment f = *this;
    f.wires_.push_back(Wire{producer_out, consumer_in});
    f.rebuild_indices();
    return f;
  }

  /// Disjoint union of f1 and f2 plus the requested wires. Port references in
  /// `wiring` use combined op indices: f2's ops start at f1.op_count().
  static Fragment compose(const Fragment& f1, const Fragment& f2,
                          const std::vector<std::pair<PortRef, PortRef>>& wiring = {}) {
    Fragment f;
    f.ops_ = f1.ops_;
    f.ops_.insert(f.ops_.end(), f2.ops_.begin(), f2.ops_.end());
    f.wires_ = f1.wires_;
    const int off = f1.op_count();
    for (const Wire& w : f2.wires_)
      f.wires_.push_back(Wire{{w.from.op + off, w.from.port}, {w.to.op + off, w.to.port}});
    f.declared_N_ = f1.declared_N_;
    for (const auto& [label, n] : f2.declared_N_) {
      auto it = f.declared_N_.find(label);
      if (it != f.declared_N_.end() && it->second != n)
        throw TypeMismatch("conflicting N declarations for type '" + label + "'");
      f.declared_N_[label] = n;
    }
    f.rebuild_indices();
    for (const auto& [out, in] : wiring) f = f.connect(out, in);
    return f;
  }

  int op_count() const { return static_cast<int>(ops_.size()); }
  const OperationInstance& op(int i) const { return ops_.at(i); }
  const std::vector<OperationInstance>& ops() const { return ops_; }
  const std::vector<Wire>& wires() const { return wires_; }

  /// -1 if the port is open, else index into wires().
  int out_wire_of(PortRef p) const { return out_wired_.at(p.op).at(p.port); }
  int in_wire_of(PortRef p) const { return in_wired_.at(p.op).at(p.port); }

  /// Open ports in (op index, port index) order.
  std::vector<PortRef> open_outputs() const {
    std::vector<PortRef> res;
    for (int i = 0; i < op_count(); ++i)
      for (int p = 0; p < static_cast<int>(ops_[i].outputs.size()); ++p)
        if (out_wired_[i][p] < 0) res.push_back({i, p});
    return res;
  }
  std::vector<PortRef> open_inputs() const {
    std::vector<PortRef> res;
    for (int i = 0; i < op_count(); ++i)
      for (int p = 0; p < static_cast<int>(ops_[i].inputs.size()); ++p)
        if (in_wired_[i][p] < 0) res.push_back({i, p});
    return res;
  }

  const std::string& output_label(PortRef p) const { return ops_.at(p.op).outputs.at(p.port); }
  const std::string& input_label(PortRef p) const { return ops_.at(p.op).inputs.at(p.port); }

  /// Type declarations attached by the parser (label -> N); informational.
  const std::map<std::string, int>& declared_N() const { return declared_N_; }
  void declare_N(const std::string& label, int n) {
    auto it = declared_N_.find(label);
    if (it != declared_N_.end() && it->second != n)
      throw TypeMismatch("conflicting N declarations for type '" + label + "'");
    declared_N_[label] = n;
  }

  /// Re-checks all wiring invariants. Construction keeps them established,
  /// so this is idempotent on any fragment this class hands out.
  void validate() const {
    std::vector<std::vector<int>> out_seen(op_count()), in_seen(op_count());
    for (int i = 0; i < op_count(); ++i) {
      out_seen[i].assign(ops_[i].outputs.size(), 0);
      in_seen[i].assign(ops_[i].inputs.size(), 0);
    }
    for (const Wire& w : wires_) {
      if (w.from.op < 0 || w.from.op >= op_count() || w.to.op < 0 || w.to.op >= op_count())
        throw InvalidFragment("wire references unknown operation");
      if (w.from.port < 0 || w.from.port >= static_cast<int>(ops_[w.from.op].outputs.size()))
        throw InvalidFragment("wire references unknown output port");
      if (w.to.port < 0 || w.to.port >= static_cast<int>(ops_[w.to.op].inputs.size()))
        throw InvalidFragment("wire references unknown input port");
      if (++out_seen[w.from.op][w.from.port] > 1)
        throw InvalidFragment("output port carries two wires");
      if (++in_seen[w.to.op][w.to.port] > 1)
        throw InvalidFragment("input port carries two wires");
      if (output_label(w.from) != input_label(w.to))
        throw InvalidFragment("wire joins mismatched types");
    }
    if (topological_order().empty() && op_count() > 0)
      throw InvalidFragment("wiring contains a cycle");
  }

  /// Kahn order over the wire-induced DAG; empty if cyclic and non-empty.
  std::vector<int> topological_order() const {
    std::vector<int> indeg(op_count(), 0);
    for (const Wire& w : wires_) ++indeg[w.to.op];
    std::vector<int> queue, order;
    for (int i = 0; i < op_count(); ++i)
      if (indeg[i] == 0) queue.push_back(i);
    while (!queue.empty()) {
      int v = queue.front();
      queue.erase(queue.begin());
      order.push_back(v);
      for (const Wire& w : wires_)
        if (w.from.op == v && --indeg[w.to.op] == 0) queue.push_back(w.to.op);
    }
    if (static_cast<int>(order.size()) != op_count()) return {};
    return order;
  }

  Classification classify() const {
    validate();
    if (op_count() == 0) return Classification::General;
    const bool has_in = !open_inputs().empty();
    const bool has_out = !open_outputs().empty();
    if (!has_in && !has_out) return Classification::Circuit;
    if (!has_in) return Classification::Preparation;
    if (!has_out) return Classification::Result;
    // Open inputs cannot be reached from open outputs inside a valid
    // (acyclic) fragment, so internal feedback never disqualifies the
    // fragment; whole-circuit validation covers the external context.
    return Classification::TransformationMode;
  }

  /// Canonical ordering of the ops: topological, with ties broken by a
  /// refinement coloring and, where structurally identical choices remain,
  /// by the lexicographically least resulting encoding. Two fragments are
  /// isomorphic iff their canonical encodings are byte-equal.
  std::vector<int> canonical_order() const { return canonicalize().second; }
  std::string canonical_encoding() const { return canonicalize().first; }

  bool isomorphic(const Fragment& other) const {
    return canonical_encoding() == other.canonical_encoding();
  }
  friend bool operator==(const Fragment& a, const Fragment& b) { return a.isomorphic(b); }

 private:
  std::vector<OperationInstance> ops_;
  std::vector<Wire> wires_;
  std::map<std::string, int> declared_N_;
  // port -> wire index, -1 when open; rebuilt whenever ops_/wires_ change
  std::vector<std::vector<int>> out_wired_, in_wired_;

  void rebuild_indices() {
    out_wired_.assign(ops_.size(), {});
    in_wired_.assign(ops_.size(), {});
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      out_wired_[i].assign(ops_[i].outputs.size(), -1);
      in_wired_[i].assign(ops_[i].inputs.size(), -1);
    }
    for (std::size_t w = 0; w < wires_.size(); ++w) {
      const Wire& wire = wires_[w];
      if (wire.from.op >= op_count() || wire.to.op >= op_count() ||
          wire.from.port >= static_cast<int>(ops_[wire.from.op].outputs.size()) ||
          wire.to.port >= static_cast<int>(ops_[wire.to.op].inputs.size()))
        throw InvalidFragment("wire references unknown port");
      out_wired_[wire.from.op][wire.from.port] = static_cast<int>(w);
      in_wired_[wire.to.op][wire.to.port] = static_cast<int>(w);
    }
  }

  void check_port(PortRef p, bool is_output) const {
    if (p.op < 0 || p.op >= op_count()) throw InvalidFragment("no such operation");
    const auto& list = is_output ? ops_[p.op].outputs : ops_[p.op].inputs;
    if (p.port < 0 || p.port >= static_cast<int>(list.size()))
      throw InvalidFragment("no such port");
  }

  // true if there is a directed path src ->* dst
  bool reaches(int src, int dst) const {
    if (src == dst) return true;
    std::vector<int> stack{src};
    std::vector<bool> seen(op_count(), false);
    seen[src] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Wire& w : wires_) {
        if (w.from.op != v || seen[w.to.op]) continue;
        if (w.to.op == dst) return true;
        seen[w.to.op] = true;
        stack.push_back(w.to.op);
      }
    }
    return false;
  }

  std::string structural_key(int i) const {
    const OperationInstance& o = ops_[i];
    std::string k = o.name;
    k += '\x1e';
    k += o.setting;
    k += '\x1e';
    k += o.outcome_set;
    k += '\x1e';
    for (const auto& t : o.inputs) { k += t; k += ','; }
    k += '\x1e';
    for (const auto& t : o.outputs) { k += t; k += ','; }
    return k;
  }

  // Directional 1-WL color refinement; colors are ranks of signature strings
  // so they are invariant under op reordering.
  std::vector<int> refined_colors() const {
    const int n = op_count();
    std::vector<std::string> sig(n);
    for (int i = 0; i < n; ++i) sig[i] = structural_key(i);
    std::vector<int> color = rank_strings(sig);
    for (int round = 0; round < n; ++round) {
      std::vector<std::string> next(n);
      for (int i = 0; i < n; ++i) {
        std::vector<std::string> nbr;
        for (const Wire& w : wires_) {
          if (w.from.op == i)
            nbr.push_back("o" + std::to_string(w.from.port) + ":" +
                          std::to_string(color[w.to.op]) + ":" + std::to_string(w.to.port));
          if (w.to.op == i)
            nbr.push_back("i" + std::to_string(w.to.port) + ":" +
                          std::to_string(color[w.from.op]) + ":" + std::to_string(w.from.port));
        }
        std::sort(nbr.begin(), nbr.end());
        next[i] = std::to_string(color[i]);
        for (const auto& s : nbr) { next[i] += '|'; next[i] += s; }
      }
      std::vector<int> next_color = rank_strings(next);
      if (next_color == color) break;
      color = std::move(next_color);
    }
    return color;
  }

  static std::vector<int> rank_strings(const std::vector<std::string>& v) {
    std::vector<std::string> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v[i]) -
                                sorted.begin());
    return out;
  }

  std::pair<std::string, std::vector<int>> canonicalize() const {
    const int n = op_count();
    if (n == 0) return {"", {}};
    const std::vector<int> color = refined_colors();

    std::vector<int> pending_in(n, 0);
    for (const Wire& w : wires_) ++pending_in[w.to.op];

    std::string best;
    std::vector<int> best_order;
    bool have_best = false;

    std::vector<int> pos(n, -1);  // emitted position per op
    std::vector<int> order;
    std::string enc;

    // fingerprint of op i relative to already-emitted producers
    auto fingerprint = [&](int i) {
      std::vector<std::string> parts;
      for (const Wire& w : wires_)
        if (w.to.op == i)
          parts.push_back(std::to_string(pos[w.from.op]) + "." +
                          std::to_string(w.from.port) + ">" + std::to_string(w.to.port));
      std::sort(parts.begin(), parts.end());
      std::string fp;
      for (const auto& p : parts) { fp += p; fp += ' '; }
      return fp;
    };

    std::vector<int> remaining_in = pending_in;

    // Depth-first over minimal-key candidates; ties (true structural twins)
    // are branched and the least encoding wins.
    auto emit = [&](auto&& self) -> void {
      if (static_cast<int>(order.size()) == n) {
        if (!have_best || enc < best) {
          best = enc;
          best_order = order;
          have_best = true;
        }
        return;
      }
      if (have_best && enc.compare(0, enc.size(), best, 0, std::min(best.size(), enc.size())) > 0)
        return;
      // candidates: all producers emitted
      std::pair<int, std::string> min_key;
      std::vector<int> cands;
      for (int i = 0; i < n; ++i) {
        if (pos[i] >= 0 || remaining_in[i] > 0) continue;
        std::pair<int, std::string> key{color[i], fingerprint(i)};
        if (cands.empty() || key < min_key) {
          min_key = key;
          cands = {i};
        } else if (key == min_key) {
          cands.push_back(i);
        }
      }
      for (int i : cands) {
        const std::size_t enc_len = enc.size();
        pos[i] = static_cast<int>(order.size());
        order.push_back(i);
        for (const Wire& w : wires_)
          if (w.from.op == i) --remaining_in[w.to.op];
        enc += structural_key(i);
        enc += '#';
        enc += min_key.second;
        enc += ';';
        self(self);
        enc.resize(enc_len);
        for (const Wire& w : wires_)
          if (w.from.op == i) ++remaining_in[w.to.op];
        order.pop_back();
        pos[i] = -1;
      }
    };
    emit(emit);
    return {best, best_order};
  }
};

}  // namespace gptc
