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
#include <utility>
#include <vector>

#include "gptc/check_report.hpp"
#include "gptc/contraction.hpp"
#include "gptc/faces.hpp"
#include "gptc/quantum.hpp"
#include "gptc/theory.hpp"

// Executable forms of the reconstruction's circuit constructions. Each
// builder assembles the actual wiring diagram as a fragment, contracts it
// with the engine, and verifies the claimed behaviour, so these double as
// end-to-end exercises of the IR and the contraction core.

namespace gptc {

namespace detail {

/// Ancilla type: a different letter with the same N (and K).
inline SystemType find_ancilla(const Theory& th, const SystemType& t) {
  for (char c = 'a'; c <= 'z'; ++c) {
    std::string label(1, c);
    if (label == t.label) continue;
    try {
      SystemType anc = th.type(label);
      if (anc.N == t.N && anc.K == t.K) return anc;
    } catch (const UnknownType&) {
    }
  }
  throw AncillaUnavailable("no second type with N=" + std::to_string(t.N) + " available");
}

/// Product maximal set of two single-system sets, row-major (n, m) order.
inline MaximalSet product_maximal_set(const Theory& th, const MaximalSet& a,
                                      const MaximalSet& b) {
  MaximalSet ms;
  ms.type = th.composite(a.type, b.type);
  for (const auto& sa : a.states)
    for (const auto& sb : b.states) ms.states.push_back(product_state(th, sa, sb));
  for (const auto& ea : a.effects)
    for (const auto& eb : b.effects) ms.effects.push_back(product_effect(th, ea, eb));
  return ms;
}

/// (n, m) -> (m, n) on row-major product indices; defined for N_a = N_b.
inline Permutation swap_product_permutation(int n) {
  std::vector<int> img(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) img[i * n + j] = j * n + i;
  return Permutation(std::move(img));
}

/// Swap only when both indices lie in the outcome subset, identity otherwise.
inline Permutation partial_swap_permutation(int n, const std::vector<int>& outcomes) {
  std::vector<bool> in_set(n, false);
  for (int o : outcomes) in_set.at(o) = true;
  std::vector<int> img(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      img[i * n + j] = (in_set[i] && in_set[j]) ? j * n + i : i * n + j;
  return Permutation(std::move(img));
}

inline GptTensor two_port_transform(const GptTensor& composite_transform, const SystemType& a,
                                    const SystemType& b) {
  return reshaped(composite_transform, {a, b}, {a, b});
}

inline OperationInstance mkop(std::string name, std::vector<std::string> ins,
                              std::vector<std::string> outs) {
  OperationInstance op;
  op.name = std::move(name);
  op.inputs = std::move(ins);
  op.outputs = std::move(outs);
  return op;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reversible transformation between pure states (two swaps via an ancilla)

struct TransformationResult {
  GptTensor transform;
  CheckReport report;
};

/// Builds the two-stage ancilla diagram taking U[n] to V[n] for all n:
/// swap the U x W product set, read off U[1] and re-prepare V[1], swap the
/// V x W product set, close the ancilla with W[1].
inline TransformationResult build_reversible_between_pure(const Theory& th, const SystemType& t,
                                                          const MaximalSet& u_set,
                                                          const MaximalSet& v_set) {
  SystemType anc = detail::find_ancilla(th, t);
  MaximalSet w_set = th.maximal_set(anc);
  Permutation swap = detail::swap_product_permutation(t.N);

  auto stage = [&](const MaximalSet& system_set) {
    MaximalSet prod = detail::product_maximal_set(th, system_set, w_set);
    SystemType ab = th.composite(t, anc);
    return detail::two_port_transform(th.permutation_transform(ab, prod, swap), t, anc);
  };
  GptTensor p = stage(u_set);
  GptTensor q = stage(v_set);

  auto assemble = [&](const GptTensor& first, const GptTensor& second, const MaximalSet& from,
                      const MaximalSet& to) {
    Fragment f;
    f = f.with_op(detail::mkop("P", {t.label, anc.label}, {t.label, anc.label}));   // 0
    f = f.with_op(detail::mkop("Q", {t.label, anc.label}, {t.label, anc.label}));   // 1
    f = f.with_op(detail::mkop("Wprep", {}, {anc.label}));                          // 2
    f = f.with_op(detail::mkop("Ueff", {t.label}, {}));                             // 3
    f = f.with_op(detail::mkop("Vprep", {}, {t.label}));                            // 4
    f = f.with_op(detail::mkop("Weff", {anc.label}, {}));                           // 5
    f = f.connect({2, 0}, {0, 1});  // W[1] into P's ancilla input
    f = f.connect({0, 0}, {3, 0});  // P's system output measured with U[1]
    f = f.connect({0, 1}, {1, 1});  // ancilla carries on into Q
    f = f.connect({4, 0}, {1, 0});  // fresh V[1] into Q's system input
    f = f.connect({1, 1}, {5, 0});  // ancilla closed with W[1]
    Binding b;
    b.emplace("P", first);
    b.emplace("Q", second);
    b.emplace("Wprep", w_set.states[0]);
    b.emplace("Ueff", from.effects[0]);
    b.emplace("Vprep", to.states[0]);
    b.emplace("Weff", w_set.effects[0]);
    return fragment_tensor(f, b);
  };

  GptTensor forward = assemble(p, q, u_set, v_set);
  GptTensor backward = assemble(q, p, v_set, u_set);

  CheckReport rep;
  rep.id = "constructions.reversible";
  rep.tolerances = {{"action", 1e-9}, {"inverse", 1e-10}};
  for (int n = 0; n < t.N; ++n) {
    double d = (forward.matrix() * u_set.states[n].vector() - v_set.states[n].vector())
                   .cwiseAbs()
                   .maxCoeff();
    rep.require(d <= 1e-9, "built transformation misses V[n]", d, "n=" + std::to_string(n));
  }
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(t.K, t.K);
  double inv = std::max((backward.matrix() * forward.matrix() - eye).cwiseAbs().maxCoeff(),
                        (forward.matrix() * backward.matrix() - eye).cwiseAbs().maxCoeff());
  rep.require(inv <= 1e-10, "built transformation is not reversible", inv);
  return {forward, rep};
}

// ---------------------------------------------------------------------------
// Arbitrary filter from permutations and post-selection

/// Builds the filter diagram for the face: ancilla prepared in V[n1],
/// partial-swap P, post-selection on U[n1], fresh U[n1], the reverse of P,
/// deterministic effect on the ancilla.
inline TransformationResult build_filter(const Theory& th, const InformationalFace& face,
                                         int n1 = -1) {
  const SystemType& t = face.type;
  if (n1 < 0) n1 = face.outcomes.front();
  if (std::find(face.outcomes.begin(), face.outcomes.end(), n1) == face.outcomes.end())
    throw BadOutcomeIndex("n1 must be one of the face's outcomes");

  SystemType anc = detail::find_ancilla(th, t);
  MaximalSet v_set = th.maximal_set(anc);
  MaximalSet u_set = face.parent;
  Permutation pi = detail::partial_swap_permutation(t.N, face.outcomes);
  MaximalSet prod = detail::product_maximal_set(th, u_set, v_set);
  SystemType ab = th.composite(t, anc);
  GptTensor p = detail::two_port_transform(th.permutation_transform(ab, prod, pi), t, anc);
  GptTensor p_rev =
      detail::two_port_transform(th.permutation_transform(ab, prod, pi.inverse()), t, anc);

  Fragment f;
  f = f.with_op(detail::mkop("P", {t.label, anc.label}, {t.label, anc.label}));    // 0
  f = f.with_op(detail::mkop("Pt", {t.label, anc.label}, {t.label, anc.label}));   // 1
  f = f.with_op(detail::mkop("Vprep", {}, {anc.label}));                           // 2
  f = f.with_op(detail::mkop("Ueff", {t.label}, {}));                              // 3
  f = f.with_op(detail::mkop("Uprep", {}, {t.label}));                             // 4
  f = f.with_op(detail::mkop("Teff", {anc.label}, {}));                            // 5
  f = f.connect({2, 0}, {0, 1});  // V[n1] into P
  f = f.connect({0, 0}, {3, 0});  // post-select U[n1] on the system slot
  f = f.connect({0, 1}, {1, 1});  // ancilla, now carrying the payload, into the reverse
  f = f.connect({4, 0}, {1, 0});  // fresh U[n1]
  f = f.connect({1, 1}, {5, 0});  // deterministic effect closes the ancilla
  Binding b;
  b.emplace("P", p);
  b.emplace("Pt", p_rev);
  b.emplace("Vprep", v_set.states[n1]);
  b.emplace("Ueff", u_set.effects[n1]);
  b.emplace("Uprep", u_set.states[n1]);
  b.emplace("Teff", th.unit_effect(anc));
  GptTensor filter = fragment_tensor(f, b);

  CheckReport rep;
  rep.id = "constructions.filter";
  rep.tolerances = {{"pass", 1e-9}, {"block", 1e-9}, {"idempotent", 1e-9}};
  for (const auto& s : face.span_basis) {
    double d = (filter.matrix() * s.vector() - s.vector()).cwiseAbs().maxCoeff();
    rep.require(d <= 1e-9, "face state not passed unchanged", d, witness_vector(s));
  }
  if (!face.complement.empty()) {
    for (const auto& s : th.face_span(t, face.parent, face.complement)) {
      double d = (filter.matrix() * s.vector()).cwiseAbs().maxCoeff();
      rep.require(d <= 1e-9, "complement face state not blocked", d, witness_vector(s));
    }
  }
  for (const auto& s : face.span_basis) {
    Eigen::VectorXd once = filter.matrix() * s.vector();
    double d = (filter.matrix() * once - once).cwiseAbs().maxCoeff();
    rep.require(d <= 1e-9, "filter is not idempotent on the face", d);
  }
  try {
    GptTensor direct = th.direct_filter(t, face.parent, face.outcomes);
    double d = (filter.matrix() - direct.matrix()).cwiseAbs().maxCoeff();
    rep.require(d <= 1e-9, "built filter differs from the theory's direct filter", d);
    rep.note("direct-filter distance " + nlohmann::json(d).dump());
  } catch (const UnsupportedTheory&) {
    rep.note("theory provides no direct filter to compare against");
  }
  return {filter, rep};
}

// ---------------------------------------------------------------------------
// Wire substitution between equal-N types

struct SubstitutionResult {
  Fragment circuit;
  Binding gadget_binding;  // tensors for the spliced ops, names prefixed "_subs"
  CheckReport report;
};

/// Splices the type-substitution gadget onto a wire: the payload crosses a
/// target-type wire between the two partial swaps, leaving every circuit
/// probability unchanged.
inline SubstitutionResult substitute_system(const Theory& th, const Fragment& circuit,
                                            int wire_index, const SystemType& target,
                                            const std::vector<Binding>& bindings) {
  circuit.validate();
  if (wire_index < 0 || wire_index >= static_cast<int>(circuit.wires().size()))
    throw GptError("no such wire");
  const Wire w = circuit.wires()[wire_index];
  SystemType wire_type = th.type(circuit.output_label(w.from));
  if (wire_type.N != target.N)
    throw NMismatch("wire type has N=" + std::to_string(wire_type.N) + ", target has N=" +
                    std::to_string(target.N));

  MaximalSet u_set = th.maximal_set(wire_type);
  MaximalSet v_set = th.maximal_set(target);
  Permutation swap = detail::swap_product_permutation(wire_type.N);
  MaximalSet prod = detail::product_maximal_set(th, u_set, v_set);
  SystemType ab = th.composite(wire_type, target);
  GptTensor p =
      detail::two_port_transform(th.permutation_transform(ab, prod, swap), wire_type, target);
  GptTensor p_rev = detail::two_port_transform(
      th.permutation_transform(ab, prod, swap.inverse()), wire_type, target);

  // rebuild without the chosen wire
  Fragment base;
  for (int i = 0; i < circuit.op_count(); ++i) base = base.with_op(circuit.op(i));
  for (int i = 0; i < static_cast<int>(circuit.wires().size()); ++i)
    if (i != wire_index) base = base.connect(circuit.wires()[i].from, circuit.wires()[i].to);

  const std::string& a = wire_type.label;
  const std::string& b = target.label;
  Fragment gadget;
  gadget = gadget.with_op(detail::mkop("_subsP", {a, b}, {a, b}));    // +0
  gadget = gadget.with_op(detail::mkop("_subsPt", {a, b}, {a, b}));   // +1
  gadget = gadget.with_op(detail::mkop("_subsV", {}, {b}));           // +2
  gadget = gadget.with_op(detail::mkop("_subsUeff", {a}, {}));        // +3
  gadget = gadget.with_op(detail::mkop("_subsU", {}, {a}));           // +4
  gadget = gadget.with_op(detail::mkop("_subsT", {b}, {}));           // +5
  const int off = base.op_count();
  Fragment spliced = Fragment::compose(base, gadget,
                                       {{{off + 2, 0}, {off + 0, 1}},    // V[1] -> P.b
                                        {{off + 0, 0}, {off + 3, 0}},    // P.a -> U[1] effect
                                        {{off + 0, 1}, {off + 1, 1}},    // payload over b
                                        {{off + 4, 0}, {off + 1, 0}},    // U[1] -> reverse.a
                                        {w.from, {off + 0, 0}},          // cut producer -> P.a
                                        {{off + 1, 0}, w.to}});          // reverse.a -> consumer
  Fragment spliced_closed = spliced.connect({off + 1, 1}, {off + 5, 0});  // T on the ancilla

  Binding gadget_binding;
  gadget_binding.emplace("_subsP", p);
  gadget_binding.emplace("_subsPt", p_rev);
  gadget_binding.emplace("_subsV", v_set.states[0]);
  gadget_binding.emplace("_subsUeff", u_set.effects[0]);
  gadget_binding.emplace("_subsU", u_set.states[0]);
  gadget_binding.emplace("_subsT", th.unit_effect(target));

  CheckReport rep;
  rep.id = "constructions.substitute";
  rep.tolerances = {{"probability", 1e-9}};
  int i = 0;
  for (const Binding& binding : bindings) {
    Binding full = binding;
    for (const auto& [k, v] : gadget_binding) full.emplace(k, v);
    double before = circuit_probability(circuit, binding);
    double after = circuit_probability(spliced_closed, full);
    rep.require(std::abs(before - after) <= 1e-9, "probability changed by the substitution",
                std::abs(before - after), "binding " + std::to_string(i));
    ++i;
  }
  rep.note("bindings=" + std::to_string(i));
  return {spliced_closed, gadget_binding, rep};
}

// ---------------------------------------------------------------------------
// The teleportation suite (gebit K <= 4 argument)

struct TeleportationReport {
  double factor = 0;                   // c with N.M = c I
  double identity_residual = 0;        // max |N.M - c I|
  double trace_value = 0;              // N_{a1 a2} M^{a2 a1}
  double closed_loop_probability = 0;  // full circuit contraction
  double implied_k_bound = 0;          // (1/2) / c
  CheckReport report;
};

/// Assembles the N-tensor (inverse-CNOT, Bell effect, equatorial |+>, first
/// basis result), contracts it against the Bell state, and verifies the
/// 1/8 identity, the trace value c K, and the closed-loop bound <= 1/2.
inline TeleportationReport run_teleportation_suite(const Theory& th) {
  const auto* qt = dynamic_cast<const QuantumTheory*>(&th);
  if (!qt)
    throw ConstructionUnavailable(
        "teleportation ingredients (entangled state and effect) do not exist in this theory");
  SystemType a = th.type("a");
  if (a.N != 2)
    throw ConstructionUnavailable("the teleportation suite runs on the gebit (N=2)");

  // the fixed ingredients
  CVec phi(4);
  phi << 1, 0, 0, 1;
  phi /= std::sqrt(2.0);
  CMat bell = phi * phi.adjoint();
  CVec plus(2);
  plus << 1, 1;
  plus /= std::sqrt(2.0);
  CVec z0(2);
  z0 << 1, 0;

  GptTensor e_state = qt->embed_state({a, a}, bell);
  GptTensor m_effect = qt->embed_effect({a, a}, bell);
  GptTensor b_prep = qt->embed_state({a}, detail::projector(plus));
  GptTensor first_result = qt->embed_effect({a}, detail::projector(z0));

  SystemType aa = th.composite(a, a);
  MaximalSet basis_aa = th.maximal_set(aa);
  Permutation cnot(std::vector<int>{0, 1, 3, 2});
  GptTensor pt = detail::two_port_transform(
      th.permutation_transform(aa, basis_aa, cnot.inverse()), a, a);

  // N-tensor fragment: open inputs are the two P-tilde inputs
  Fragment nfrag;
  nfrag = nfrag.with_op(detail::mkop("Pt", {a.label, a.label}, {a.label, a.label}));  // 0
  nfrag = nfrag.with_op(detail::mkop("B", {}, {a.label}));                            // 1
  nfrag = nfrag.with_op(detail::mkop("M", {a.label, a.label}, {}));                   // 2
  nfrag = nfrag.with_op(detail::mkop("Z", {a.label}, {}));                            // 3
  nfrag = nfrag.connect({1, 0}, {2, 0});  // B into the Bell effect
  nfrag = nfrag.connect({0, 0}, {2, 1});  // P-tilde's first output into the Bell effect
  nfrag = nfrag.connect({0, 1}, {3, 0});  // second output read in the computational basis
  Binding nb;
  nb.emplace("Pt", pt);
  nb.emplace("B", b_prep);
  nb.emplace("M", m_effect);
  nb.emplace("Z", first_result);
  GptTensor n_tensor = fragment_tensor(nfrag, nb);

  TeleportationReport out;
  CheckReport& rep = out.report;
  rep.id = "teleport";
  rep.tolerances = {{"factor", 1e-9}, {"identity", 1e-9}, {"trace", 1e-9}, {"bound", 1e-9}};

  const int k = a.K;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      nmat(n_tensor.data().data(), k, k);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      mmat(e_state.data().data(), k, k);
  Eigen::MatrixXd nm = nmat * mmat;

  out.factor = nm.trace() / k;
  out.identity_residual = (nm - out.factor * Eigen::MatrixXd::Identity(k, k))
                              .cwiseAbs()
                              .maxCoeff();
  rep.require(std::abs(out.factor - 0.125) <= 1e-9, "contraction factor is not 1/8",
              std::abs(out.factor - 0.125));
  rep.require(out.identity_residual <= 1e-9, "N.M is not proportional to the identity",
              out.identity_residual);

  out.trace_value = (nmat * mmat).trace();
  rep.require(std::abs(out.trace_value - out.factor * k) <= 1e-9,
              "trace differs from factor times K", std::abs(out.trace_value - out.factor * k));

  // the closed loop as an actual circuit (crossed wires, as in the diagram)
  Fragment loop;
  loop = loop.with_op(detail::mkop("Pt", {a.label, a.label}, {a.label, a.label}));  // 0
  loop = loop.with_op(detail::mkop("B", {}, {a.label}));                            // 1
  loop = loop.with_op(detail::mkop("M", {a.label, a.label}, {}));                   // 2
  loop = loop.with_op(detail::mkop("Z", {a.label}, {}));                            // 3
  loop = loop.with_op(detail::mkop("E", {}, {a.label, a.label}));                   // 4
  loop = loop.connect({1, 0}, {2, 0});
  loop = loop.connect({0, 0}, {2, 1});
  loop = loop.connect({0, 1}, {3, 0});
  loop = loop.connect({4, 0}, {0, 1});  // E's first leg into P-tilde's second input
  loop = loop.connect({4, 1}, {0, 0});  // E's second leg into P-tilde's first input
  Binding lb = nb;
  lb.emplace("E", e_state);
  out.closed_loop_probability = circuit_probability(loop, lb);
  rep.require(out.closed_loop_probability <= 0.5 + 1e-9,
              "closed-loop probability exceeds 1/2",
              std::max(0.0, out.closed_loop_probability - 0.5));
  rep.require(std::abs(out.closed_loop_probability - 0.5) <= 1e-9,
              "closed loop does not saturate 1/2",
              std::abs(out.closed_loop_probability - 0.5));
  rep.require(std::abs(out.closed_loop_probability - out.trace_value) <= 1e-12,
              "closed loop differs from the trace contraction",
              std::abs(out.closed_loop_probability - out.trace_value));

  out.implied_k_bound = 0.5 / out.factor;
  rep.require(k <= out.implied_k_bound + 1e-6, "K exceeds the implied bound",
              std::max(0.0, k - out.implied_k_bound));
  rep.note("factor=" + nlohmann::json(out.factor).dump());
  rep.note("trace=" + nlohmann::json(out.trace_value).dump());
  rep.note("K<=" + std::to_string(static_cast<int>(out.implied_k_bound + 0.5)));

  // supplementary: the one-shot diagram prepares a state proportional to a
  // pure state (B itself, for these canonical ingredients)
  Fragment prep;
  prep = prep.with_op(detail::mkop("B", {}, {a.label}));                 // 0
  prep = prep.with_op(detail::mkop("E", {}, {a.label, a.label}));        // 1
  prep = prep.with_op(detail::mkop("M", {a.label, a.label}, {}));        // 2
  prep = prep.connect({0, 0}, {2, 0});
  prep = prep.connect({1, 0}, {2, 1});
  Binding pb;
  pb.emplace("B", b_prep);
  pb.emplace("E", e_state);
  pb.emplace("M", m_effect);
  GptTensor teleported = fragment_tensor(prep, pb);
  double lambda = b_prep.vector().dot(teleported.vector()) / b_prep.vector().squaredNorm();
  double prop = (teleported.vector() - lambda * b_prep.vector()).cwiseAbs().maxCoeff();
  rep.require(prop <= 1e-9, "one-shot diagram does not prepare a state proportional to B", prop);
  rep.require(th.is_pure(a, teleported), "teleported state is not proportional to a pure state");
  return out;
}

}  // namespace gptc
