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

#include <string>
#include <vector>

#include "gptc/contraction.hpp"
#include "gptc/quantum.hpp"

namespace gptc::testsupport {

struct RandomQuantumCircuit {
  Fragment circuit;
  Binding tensors;          // fiducial-space binding for the contraction engine
  OperatorBinding operators;  // operator-space binding for the oracle
};

/// Random closed circuit over one system letter: pure preparations (possibly
/// entangled across two wires), a few Haar-random unitary layers, and basis
/// measurements closing every wire.
inline RandomQuantumCircuit random_quantum_circuit(const QuantumTheory& th, Rng& rng,
                                                   int max_depth = 4) {
  const SystemType a = th.type("a");
  const int d = th.hilbert_dim(a);
  RandomQuantumCircuit rc;
  Fragment f;
  std::vector<PortRef> frontier;
  int serial = 0;

  const int n_wires = rng.uniform_int(1, 3);
  int w = 0;
  while (w < n_wires) {
    const int span = (n_wires - w >= 2 && rng.uniform() < 0.4) ? 2 : 1;
    const std::string name = "P" + std::to_string(serial++);
    OperationInstance op;
    op.name = name;
    op.outputs.assign(span, a.label);
    f = f.with_op(op);
    const int op_idx = f.op_count() - 1;
    int dim_total = 1;
    for (int i = 0; i < span; ++i) dim_total *= d;
    CMat rho = detail::projector(QuantumTheory::gaussian_ket(dim_total, rng));
    rc.tensors.emplace(name, th.embed_state(std::vector<SystemType>(span, a), rho));
    rc.operators.emplace(name, QuantumOp::state(rho));
    for (int i = 0; i < span; ++i) frontier.push_back({op_idx, i});
    w += span;
  }

  const int depth = rng.uniform_int(0, max_depth);
  for (int layer = 0; layer < depth; ++layer) {
    const int arity = (n_wires >= 2 && rng.uniform() < 0.5) ? 2 : 1;
    const int w1 = rng.uniform_int(0, n_wires - 1);
    const int w2 = arity == 2 ? (w1 + 1 + rng.uniform_int(0, n_wires - 2)) % n_wires : -1;
    const std::string name = "U" + std::to_string(serial++);
    OperationInstance op;
    op.name = name;
    op.inputs.assign(arity, a.label);
    op.outputs.assign(arity, a.label);
    f = f.with_op(op);
    const int op_idx = f.op_count() - 1;
    f = f.connect(frontier[w1], {op_idx, 0});
    if (arity == 2) f = f.connect(frontier[w2], {op_idx, 1});
    const int dim_total = arity == 2 ? d * d : d;
    CMat u = QuantumTheory::haar_unitary(dim_total, rng);
    std::vector<SystemType> ports(arity, a);
    rc.tensors.emplace(name, th.embed_channel(ports, ports, {u}));
    rc.operators.emplace(name, QuantumOp::unitary(u));
    frontier[w1] = {op_idx, 0};
    if (arity == 2) frontier[w2] = {op_idx, 1};
  }

  std::vector<int> open(n_wires);
  for (int i = 0; i < n_wires; ++i) open[i] = i;
  while (!open.empty()) {
    const int span = (open.size() >= 2 && rng.uniform() < 0.4) ? 2 : 1;
    const std::string name = "M" + std::to_string(serial++);
    OperationInstance op;
    op.name = name;
    op.inputs.assign(span, a.label);
    f = f.with_op(op);
    const int op_idx = f.op_count() - 1;
    int dim_total = 1;
    for (int i = 0; i < span; ++i) dim_total *= d;
    CMat basis = QuantumTheory::haar_unitary(dim_total, rng);
    CVec col = basis.col(rng.uniform_int(0, dim_total - 1));
    CMat e = col * col.adjoint();
    for (int i = 0; i < span; ++i) {
      f = f.connect(frontier[open.back()], {op_idx, i});
      open.pop_back();
    }
    rc.tensors.emplace(name, th.embed_effect(std::vector<SystemType>(span, a), e));
    rc.operators.emplace(name, QuantumOp::effect(e));
  }

  rc.circuit = f;
  return rc;
}

}  // namespace gptc::testsupport
