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

#include <Eigen/Dense>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gptc/errors.hpp"
#include "gptc/fragment.hpp"
#include "gptc/tensor.hpp"

namespace gptc {

/// Operation name -> tensor. Every instance of a name uses the same tensor.
using Binding = std::map<std::string, GptTensor>;

namespace detail {

struct AxisTag {
  int op;
  int port;
  bool is_output;
  SystemType type;
};

/// Contraction intermediate: flat row-major data with tagged axes.
struct WorkTensor {
  std::vector<AxisTag> axes;
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
  int rank() const { return static_cast<int>(axes.size()); }
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(axes.size(), 1);
    for (int i = rank() - 2; i >= 0; --i) s[i] = s[i + 1] * axes[i + 1].type.K;
    return s;
  }
  int find_axis(int op, int port, bool is_output) const {
    for (int i = 0; i < rank(); ++i)
      if (axes[i].op == op && axes[i].port == port && axes[i].is_output == is_output) return i;
    throw GptError("internal: contraction axis not found");
  }
};

inline WorkTensor from_gpt(const GptTensor& t, int op_index) {
  WorkTensor w;
  for (int i = 0; i < t.out_rank(); ++i) w.axes.push_back({op_index, i, true, t.out_type(i)});
  for (int i = 0; i < t.in_rank(); ++i) w.axes.push_back({op_index, i, false, t.in_type(i)});
  w.data = t.data();
  return w;
}

/// New tensor whose axis i is the old axis order[i].
inline WorkTensor permute(const WorkTensor& t, const std::vector<int>& order) {
  WorkTensor out;
  out.axes.reserve(order.size());
  for (int o : order) out.axes.push_back(t.axes[o]);
  out.data.resize(t.data.size());
  if (t.data.empty()) return out;
  const auto old_strides = t.strides();
  std::vector<std::size_t> map_strides(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) map_strides[i] = old_strides[order[i]];
  const int r = out.rank();
  std::vector<int> idx(r, 0);
  std::size_t old_flat = 0;
  for (std::size_t flat = 0; flat < out.data.size(); ++flat) {
    out.data[flat] = t.data[old_flat];
    for (int ax = r - 1; ax >= 0; --ax) {
      old_flat += map_strides[ax];
      if (++idx[ax] < out.axes[ax].type.K) break;
      old_flat -= map_strides[ax] * out.axes[ax].type.K;
      idx[ax] = 0;
    }
  }
  return out;
}

/// Contract one axis of a against one axis of b (a GEMM after permuting the
/// contracted axes to the boundary). Result axes: a's rest, then b's rest.
inline WorkTensor contract_two(const WorkTensor& a, int ax_a, const WorkTensor& b, int ax_b) {
  const int k = a.axes[ax_a].type.K;
  if (k != b.axes[ax_b].type.K) throw ShapeMismatch("wire joins axes of different K");
  std::vector<int> order_a;
  for (int i = 0; i < a.rank(); ++i)
    if (i != ax_a) order_a.push_back(i);
  order_a.push_back(ax_a);
  std::vector<int> order_b{ax_b};
  for (int i = 0; i < b.rank(); ++i)
    if (i != ax_b) order_b.push_back(i);
  WorkTensor pa = permute(a, order_a);
  WorkTensor pb = permute(b, order_b);
  const std::size_t rows = pa.size() / k, cols = pb.size() / k;
  WorkTensor out;
  out.axes.assign(pa.axes.begin(), pa.axes.end() - 1);
  out.axes.insert(out.axes.end(), pb.axes.begin() + 1, pb.axes.end());
  out.data.resize(rows * cols);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<RowMat>(out.data.data(), rows, cols) =
      Eigen::Map<const RowMat>(pa.data.data(), rows, k) *
      Eigen::Map<const RowMat>(pb.data.data(), k, cols);
  return out;
}

/// Sum over the diagonal of two equal-size axes of one tensor.
inline WorkTensor self_trace(const WorkTensor& t, int ax1, int ax2) {
  const int k = t.axes[ax1].type.K;
  if (k != t.axes[ax2].type.K) throw ShapeMismatch("wire joins axes of different K");
  std::vector<int> order;
  for (int i = 0; i < t.rank(); ++i)
    if (i != ax1 && i != ax2) order.push_back(i);
  order.push_back(ax1);
  order.push_back(ax2);
  WorkTensor p = permute(t, order);
  WorkTensor out;
  out.axes.assign(p.axes.begin(), p.axes.end() - 2);
  const std::size_t rest = p.size() / (static_cast<std::size_t>(k) * k);
  out.data.assign(rest, 0.0);
  for (std::size_t r = 0; r < rest; ++r)
    for (int i = 0; i < k; ++i) out.data[r] += p.data[(r * k + i) * k + i];
  return out;
}

inline WorkTensor outer(const WorkTensor& a, const WorkTensor& b) {
  WorkTensor out;
  out.axes = a.axes;
  out.axes.insert(out.axes.end(), b.axes.begin(), b.axes.end());
  out.data.resize(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out.data[i * b.size() + j] = a.data[i] * b.data[j];
  return out;
}

}  // namespace detail

/// Checks that every operation is bound to a tensor matching its port
/// signature and that K is consistent per type label across the fragment.
inline void validate_binding(const Fragment& f, const Binding& binding) {
  std::string missing;
  std::map<std::string, int> label_K;
  for (int i = 0; i < f.op_count(); ++i) {
    const OperationInstance& op = f.op(i);
    auto it = binding.find(op.name);
    if (it == binding.end()) {
      if (missing.find("'" + op.name + "'") == std::string::npos)
        missing += (missing.empty() ? "" : ", ") + ("'" + op.name + "'");
      continue;
    }
    const GptTensor& t = it->second;
    if (t.in_rank() != static_cast<int>(op.inputs.size()) ||
        t.out_rank() != static_cast<int>(op.outputs.size()))
      throw ShapeMismatch("operation '" + op.name + "' bound to tensor of different arity");
    for (int p = 0; p < t.in_rank(); ++p) {
      if (t.in_type(p).label != op.inputs[p])
        throw ShapeMismatch("operation '" + op.name + "' input " + std::to_string(p) +
                            " expects type '" + op.inputs[p] + "'");
      auto [pos, inserted] = label_K.emplace(op.inputs[p], t.in_type(p).K);
      if (!inserted && pos->second != t.in_type(p).K)
        throw ShapeMismatch("type '" + op.inputs[p] + "' bound with two different K");
    }
    for (int p = 0; p < t.out_rank(); ++p) {
      if (t.out_type(p).label != op.outputs[p])
        throw ShapeMismatch("operation '" + op.name + "' output " + std::to_string(p) +
                            " expects type '" + op.outputs[p] + "'");
      auto [pos, inserted] = label_K.emplace(op.outputs[p], t.out_type(p).K);
      if (!inserted && pos->second != t.out_type(p).K)
        throw ShapeMismatch("type '" + op.outputs[p] + "' bound with two different K");
    }
  }
  if (!missing.empty()) throw UnboundOperation("no tensor bound for " + missing);
}

/// Left-to-right schedule: wires ordered by the later op they touch. This is
/// the baseline the optimized schedule must not exceed in peak size.
inline std::vector<int> naive_schedule(const Fragment& f) {
  std::vector<int> order(f.wires().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Wire& wa = f.wires()[a];
    const Wire& wb = f.wires()[b];
    return std::max(wa.from.op, wa.to.op) < std::max(wb.from.op, wb.to.op);
  });
  return order;
}

namespace detail {

// size bookkeeping shared by the scheduler and peak reporting
struct SizeSim {
  std::vector<int> comp;             // op -> component representative
  std::vector<std::size_t> size;     // representative -> open-entry count
  explicit SizeSim(const Fragment& f, const std::vector<std::size_t>& op_sizes) {
    comp.resize(f.op_count());
    std::iota(comp.begin(), comp.end(), 0);
    size = op_sizes;
  }
  int find(int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  }
  // returns resulting component size after contracting a wire of size k
  std::size_t apply(const Wire& w, std::size_t k) {
    int a = find(w.from.op), b = find(w.to.op);
    std::size_t result;
    if (a == b) {
      result = size[a] / (k * k);
      size[a] = result;
    } else {
      result = size[a] / k * (size[b] / k);
      comp[b] = a;
      size[a] = result;
    }
    return result;
  }
  std::size_t peek(const Wire& w, std::size_t k) {
    int a = find(w.from.op), b = find(w.to.op);
    if (a == b) return size[a] / (k * k);
    return size[a] / k * (size[b] / k);
  }
};

inline std::vector<std::size_t> op_sizes(const Fragment& f,
                                         const std::map<std::string, int>& label_K) {
  std::vector<std::size_t> sizes(f.op_count(), 1);
  auto k_of = [&](const std::string& label) -> std::size_t {
    auto it = label_K.find(label);
    return it == label_K.end() ? 2 : static_cast<std::size_t>(it->second);
  };
  for (int i = 0; i < f.op_count(); ++i) {
    for (const auto& l : f.op(i).inputs) sizes[i] *= k_of(l);
    for (const auto& l : f.op(i).outputs) sizes[i] *= k_of(l);
  }
  return sizes;
}

inline std::map<std::string, int> label_K_of_binding(const Fragment& f, const Binding& b) {
  std::map<std::string, int> label_K;
  for (int i = 0; i < f.op_count(); ++i) {
    auto it = b.find(f.op(i).name);
    if (it == b.end()) continue;
    for (int p = 0; p < it->second.in_rank(); ++p)
      label_K[it->second.in_type(p).label] = it->second.in_type(p).K;
    for (int p = 0; p < it->second.out_rank(); ++p)
      label_K[it->second.out_type(p).label] = it->second.out_type(p).K;
  }
  return label_K;
}

inline std::size_t simulate_peak(const Fragment& f, const std::map<std::string, int>& label_K,
                                 const std::vector<int>& schedule) {
  SizeSim sim(f, op_sizes(f, label_K));
  auto k_of = [&](const std::string& label) -> std::size_t {
    auto it = label_K.find(label);
    return it == label_K.end() ? 2 : static_cast<std::size_t>(it->second);
  };
  std::size_t peak = 1;
  for (int w : schedule)
    peak = std::max(peak, sim.apply(f.wires()[w], k_of(f.output_label(f.wires()[w].from))));
  return peak;
}

inline std::vector<int> greedy_schedule(const Fragment& f,
                                        const std::map<std::string, int>& label_K) {
  auto k_of = [&](const std::string& label) -> std::size_t {
    auto it = label_K.find(label);
    return it == label_K.end() ? 2 : static_cast<std::size_t>(it->second);
  };
  SizeSim sim(f, op_sizes(f, label_K));
  std::vector<int> schedule;
  std::vector<bool> used(f.wires().size(), false);
  for (std::size_t step = 0; step < f.wires().size(); ++step) {
    int best = -1;
    std::size_t best_size = 0;
    for (std::size_t w = 0; w < f.wires().size(); ++w) {
      if (used[w]) continue;
      std::size_t s = sim.peek(f.wires()[w], k_of(f.output_label(f.wires()[w].from)));
      if (best < 0 || s < best_size) {
        best = static_cast<int>(w);
        best_size = s;
      }
    }
    used[best] = true;
    schedule.push_back(best);
    sim.apply(f.wires()[best], k_of(f.output_label(f.wires()[best].from)));
  }
  return schedule;
}

}  // namespace detail

/// Peak intermediate size (entry count over contraction step results) of a
/// schedule, using the axis sizes the binding supplies.
inline std::size_t schedule_peak(const Fragment& f, const Binding& b,
                                 const std::vector<int>& schedule) {
  return detail::simulate_peak(f, detail::label_K_of_binding(f, b), schedule);
}

/// Wire contraction order whose peak intermediate never exceeds the naive
/// left-to-right schedule's (greedy size-descent, with the naive order as a
/// fallback when greed loses). The contraction value is schedule-independent.
inline std::vector<int> contraction_schedule(const Fragment& f, const Binding& b) {
  auto label_K = detail::label_K_of_binding(f, b);
  std::vector<int> greedy = detail::greedy_schedule(f, label_K);
  std::vector<int> naive = naive_schedule(f);
  if (detail::simulate_peak(f, label_K, greedy) <= detail::simulate_peak(f, label_K, naive))
    return greedy;
  return naive;
}

/// Structure-only variant: all axis sizes treated as equal.
inline std::vector<int> contraction_schedule(const Fragment& f) {
  std::map<std::string, int> uniform;
  std::vector<int> greedy = detail::greedy_schedule(f, uniform);
  std::vector<int> naive = naive_schedule(f);
  if (detail::simulate_peak(f, uniform, greedy) <= detail::simulate_peak(f, uniform, naive))
    return greedy;
  return naive;
}

/// Contracts all internal wires of the fragment; open ports become axes of
/// the result, ordered as open outputs then open inputs, each in (op, port)
/// order.
inline GptTensor fragment_tensor(const Fragment& f, const Binding& binding,
                                 const std::vector<int>& schedule) {
  f.validate();
  validate_binding(f, binding);
  if (schedule.size() != f.wires().size())
    throw GptError("schedule must mention every wire exactly once");
  if (f.op_count() == 0) return GptTensor::scalar(1.0);

  std::vector<int> comp(f.op_count());
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&comp](int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  std::map<int, detail::WorkTensor> tensors;
  for (int i = 0; i < f.op_count(); ++i)
    tensors.emplace(i, detail::from_gpt(binding.at(f.op(i).name), i));

  std::vector<bool> seen(f.wires().size(), false);
  for (int w_idx : schedule) {
    if (w_idx < 0 || w_idx >= static_cast<int>(f.wires().size()) || seen[w_idx])
      throw GptError("schedule must mention every wire exactly once");
    seen[w_idx] = true;
    const Wire& w = f.wires()[w_idx];
    int ca = find(w.from.op), cb = find(w.to.op);
    if (ca == cb) {
      detail::WorkTensor& t = tensors.at(ca);
      int a1 = t.find_axis(w.from.op, w.from.port, true);
      int a2 = t.find_axis(w.to.op, w.to.port, false);
      t = detail::self_trace(t, a1, a2);
    } else {
      detail::WorkTensor& ta = tensors.at(ca);
      detail::WorkTensor& tb = tensors.at(cb);
      int a1 = ta.find_axis(w.from.op, w.from.port, true);
      int a2 = tb.find_axis(w.to.op, w.to.port, false);
      detail::WorkTensor merged = detail::contract_two(ta, a1, tb, a2);
      tensors.erase(cb);
      comp[cb] = ca;
      tensors.at(ca) = std::move(merged);
    }
  }

  // outer-product the disconnected components, in representative order
  detail::WorkTensor result;
  bool first = true;
  for (auto& [rep, t] : tensors) {
    if (first) {
      result = std::move(t);
      first = false;
    } else {
      result = detail::outer(result, t);
    }
  }

  // arrange axes to the documented open-port order
  std::vector<int> order;
  std::vector<SystemType> out_types, in_types;
  for (PortRef p : f.open_outputs()) {
    int ax = result.find_axis(p.op, p.port, true);
    order.push_back(ax);
    out_types.push_back(result.axes[ax].type);
  }
  for (PortRef p : f.open_inputs()) {
    int ax = result.find_axis(p.op, p.port, false);
    order.push_back(ax);
    in_types.push_back(result.axes[ax].type);
  }
  if (order.size() != result.axes.size()) throw GptError("internal: dangling contraction axis");
  detail::WorkTensor arranged = detail::permute(result, order);
  return GptTensor(std::move(out_types), std::move(in_types), std::move(arranged.data));
}

inline GptTensor fragment_tensor(const Fragment& f, const Binding& binding) {
  return fragment_tensor(f, binding, contraction_schedule(f, binding));
}

/// Full contraction of a closed circuit: the probability that the circuit
/// happens, a pure function of the circuit and its binding.
inline double circuit_probability(const Fragment& circuit, const Binding& binding,
                                  const std::vector<int>& schedule) {
  if (circuit.classify() != Classification::Circuit)
    throw InvalidFragment("probability is defined for circuits (no open ports)");
  return fragment_tensor(circuit, binding, schedule).scalar_value();
}

inline double circuit_probability(const Fragment& circuit, const Binding& binding) {
  return circuit_probability(circuit, binding, contraction_schedule(circuit, binding));
}

}  // namespace gptc
