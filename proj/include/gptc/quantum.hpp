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
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gptc/contraction.hpp"
#include "gptc/fragment.hpp"
#include "gptc/theory.hpp"

namespace gptc {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace detail {

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXd kron_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat projector(const CVec& v) {
  CVec u = v.normalized();
  return u * u.adjoint();
}

inline void ensure_hermitian(const CMat& m, const char* what) {
  if (m.rows() != m.cols() || (m - m.adjoint()).cwiseAbs().maxCoeff() >
                                  1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw NonPhysicalOperator(std::string(what) + " is not Hermitian");
}

}  // namespace detail

/// Informationally complete set of K = N^2 fiducial result operators for an
/// N-dimensional system, with the Gram data mapping density matrices to
/// fiducial probability vectors and result operators to effect covectors.
///
/// The qubit frame is the (x+, y+, z+, z-) projector quadruple, in that
/// order, so a state's fiducial vector reads (p_x+, p_y+, p_z+, p_z-).
/// For N > 2 the frame lists the basis projectors |i><i| first, then for
/// each pair i < j the projectors onto (|i>+|j>)/sqrt2 and (|i>+i|j>)/sqrt2.
/// Frames compose by Kronecker product with row-major index flattening.
class QuantumFrame {
 public:
  static QuantumFrame dimension(int n) {
    if (n < 1) throw SpecInvalid("Hilbert dimension must be positive");
    std::vector<CMat> ops;
    CMat id = CMat::Identity(n, n);
    if (n == 1) {
      ops.push_back(id);
      return QuantumFrame(std::move(ops));
    }
    if (n == 2) {
      CVec xp(2), yp(2), z0(2), z1(2);
      xp << 1, 1;
      yp << 1, Cplx(0, 1);
      z0 << 1, 0;
      z1 << 0, 1;
      ops = {detail::projector(xp), detail::projector(yp), detail::projector(z0),
             detail::projector(z1)};
      return QuantumFrame(std::move(ops));
    }
    for (int i = 0; i < n; ++i) ops.push_back(id.col(i) * id.col(i).adjoint());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        ops.push_back(detail::projector(id.col(i) + id.col(j)));
        ops.push_back(detail::projector(id.col(i) + Cplx(0, 1) * id.col(j)));
      }
    return QuantumFrame(std::move(ops));
  }

  static QuantumFrame product(const QuantumFrame& a, const QuantumFrame& b) {
    std::vector<CMat> ops;
    ops.reserve(a.K() * b.K());
    for (const auto& fa : a.ops_)
      for (const auto& fb : b.ops_) ops.push_back(detail::kron(fa, fb));
    QuantumFrame f(std::move(ops), detail::kron_real(a.gram_, b.gram_));
    return f;
  }

  int dim() const { return dim_; }
  int K() const { return static_cast<int>(ops_.size()); }
  const std::vector<CMat>& ops() const { return ops_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  /// Fiducial probabilities of a density matrix.
  Eigen::VectorXd state_of(const CMat& rho) const {
    Eigen::VectorXd v(K());
    for (int k = 0; k < K(); ++k) v(k) = (ops_[k] * rho).trace().real();
    return v;
  }

  /// Effect covector of a result operator: the coefficients expanding it
  /// over the frame.
  Eigen::VectorXd effect_of(const CMat& e) const {
    Eigen::VectorXd t(K());
    for (int k = 0; k < K(); ++k) t(k) = (ops_[k] * e).trace().real();
    return solver_.solve(t);
  }

  /// K_out x K_in matrix of a channel given in Kraus form.
  Eigen::MatrixXd channel_matrix(const QuantumFrame& out_frame,
                                 const std::vector<CMat>& kraus) const {
    Eigen::MatrixXd a(out_frame.K(), K());
    for (int l = 0; l < K(); ++l) {
      CMat img = CMat::Zero(out_frame.dim(), out_frame.dim());
      for (const CMat& k : kraus) img += k * ops_[l] * k.adjoint();
      for (int m = 0; m < out_frame.K(); ++m) a(m, l) = (out_frame.ops_[m] * img).trace().real();
    }
    return solver_.solve(a.transpose()).transpose();
  }

  /// Frame inversion: the density matrix with the given fiducial vector.
  CMat reconstruct(const Eigen::VectorXd& state) const {
    Eigen::VectorXd coeff = solver_.solve(state);
    CMat rho = CMat::Zero(dim_, dim_);
    for (int k = 0; k < K(); ++k) rho += coeff(k) * ops_[k];
    return (rho + rho.adjoint()) / 2.0;
  }

 private:
  explicit QuantumFrame(std::vector<CMat> ops) : QuantumFrame(std::move(ops), {}) {}
  QuantumFrame(std::vector<CMat> ops, Eigen::MatrixXd gram) : ops_(std::move(ops)) {
    dim_ = static_cast<int>(ops_.front().rows());
    const int k = K();
    if (gram.size() == 0) {
      gram_.resize(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gram_(i, j) = (ops_[i] * ops_[j]).trace().real();
    } else {
      gram_ = std::move(gram);
    }
    solver_.compute(gram_);
    if (solver_.rank() < k)
      throw SpecInvalid("fiducial frame does not span the operator space");
  }

  int dim_;
  std::vector<CMat> ops_;
  Eigen::MatrixXd gram_;
  Eigen::FullPivLU<Eigen::MatrixXd> solver_;
};

/// Operator-form data for the density-matrix oracle.
struct QuantumOp {
  enum class Kind { State, Effect, Channel };
  Kind kind = Kind::Channel;
  CMat op;                  // State: rho; Effect: the result operator
  std::vector<CMat> kraus;  // Channel

  static QuantumOp state(CMat rho) { return {Kind::State, std::move(rho), {}}; }
  static QuantumOp effect(CMat e) { return {Kind::Effect, std::move(e), {}}; }
  static QuantumOp channel(std::vector<CMat> ks) { return {Kind::Channel, {}, std::move(ks)}; }
  static QuantumOp unitary(const CMat& u) { return channel({u}); }
};

using OperatorBinding = std::map<std::string, QuantumOp>;

/// Finite-dimensional quantum theory over fiducial frames, K = N^2. Also
/// hosts the independent density-matrix oracle used to cross-check the
/// contraction engine: the oracle works entirely in operator space.
class QuantumTheory final : public Theory {
 public:
  explicit QuantumTheory(int default_dim)
      : name_("quantum:" + std::to_string(default_dim)), default_dim_(default_dim) {
    if (default_dim < 1) throw SpecInvalid("quantum theory needs N >= 1");
  }
  QuantumTheory(std::map<std::string, int> letter_dims, int default_dim = 0)
      : name_("quantum"), letter_dims_(std::move(letter_dims)), default_dim_(default_dim) {
    for (const auto& [l, n] : letter_dims_)
      if (n < 1) throw SpecInvalid("quantum theory needs N >= 1 for type " + l);
  }

  Kind kind() const override { return Kind::Quantum; }
  const std::string& name() const override { return name_; }

  int hilbert_dim(const SystemType& t) const {
    int n = 1;
    for (char c : t.label) n *= letter_dim(c);
    return n;
  }

  SystemType type(const std::string& label) const override {
    int n = 1;
    for (char c : label) n *= letter_dim(c);
    return SystemType{label, n, n * n};
  }

  SystemType composite(const SystemType& a, const SystemType& b) const override {
    return SystemType{a.label + b.label, a.N * b.N, a.K * b.K};
  }

  /// The fiducial frame of a type: per-letter frames composed by product.
  QuantumFrame frame(const SystemType& t) const {
    if (t.label.empty()) throw UnknownType("type with empty label");
    QuantumFrame f = QuantumFrame::dimension(letter_dim(t.label[0]));
    for (std::size_t i = 1; i < t.label.size(); ++i)
      f = QuantumFrame::product(f, QuantumFrame::dimension(letter_dim(t.label[i])));
    return f;
  }

  // -- embeddings: operator data to fiducial tensors

  GptTensor embed_state(const std::vector<SystemType>& ports, const CMat& rho) const {
    QuantumFrame f = ports_frame(ports);
    detail::ensure_hermitian(rho, "state");
    if (rho.rows() != f.dim()) throw ShapeMismatch("state dimension mismatch");
    Eigen::SelfAdjointEigenSolver<CMat> eig(rho);
    if (eig.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, eig.eigenvalues().maxCoeff()))
      throw NonPhysicalOperator("state is not positive semidefinite");
    if (rho.trace().real() > 1.0 + 1e-9) throw NonPhysicalOperator("state has trace > 1");
    Eigen::VectorXd v = f.state_of(rho);
    return GptTensor::state(ports, std::vector<double>(v.data(), v.data() + v.size()));
  }

  GptTensor embed_effect(const std::vector<SystemType>& ports, const CMat& e) const {
    QuantumFrame f = ports_frame(ports);
    detail::ensure_hermitian(e, "effect");
    if (e.rows() != f.dim()) throw ShapeMismatch("effect dimension mismatch");
    Eigen::SelfAdjointEigenSolver<CMat> eig(e);
    if (eig.eigenvalues().minCoeff() < -1e-9 || eig.eigenvalues().maxCoeff() > 1.0 + 1e-9)
      throw NonPhysicalOperator("effect is not between 0 and the unit");
    Eigen::VectorXd v = f.effect_of(e);
    return GptTensor::effect(ports, std::vector<double>(v.data(), v.data() + v.size()));
  }

  GptTensor embed_channel(const std::vector<SystemType>& in_ports,
                          const std::vector<SystemType>& out_ports,
                          const std::vector<CMat>& kraus) const {
    QuantumFrame fin = ports_frame(in_ports);
    QuantumFrame fout = ports_frame(out_ports);
    validate_kraus(kraus, fin.dim(), fout.dim());
    Eigen::MatrixXd m = fin.channel_matrix(fout, kraus);
    return GptTensor(out_ports, in_ports, matrix_data(m));
  }

  // -- the density-matrix oracle (never touches GptTensors)

  double oracle_probability(const Fragment& circuit, const OperatorBinding& binding) const {
    if (circuit.classify() != Classification::Circuit)
      throw InvalidFragment("oracle probability is defined for circuits");
    std::vector<int> order = circuit.topological_order();

    std::vector<int> live_wire;  // wire indices, joint state factor order
    std::vector<int> live_dim;
    CMat joint = CMat::Constant(1, 1, 1.0);

    for (int op_idx : order) {
      const OperationInstance& op = circuit.op(op_idx);
      auto it = binding.find(op.name);
      if (it == binding.end()) throw UnboundOperation("no operator bound for '" + op.name + "'");

      int din = 1, dout = 1;
      for (const auto& l : op.inputs) din *= letter_dims_label(l);
      for (const auto& l : op.outputs) dout *= letter_dims_label(l);
      std::vector<CMat> kraus = as_kraus(it->second, din, dout, op.name);

      // gather the live positions of this op's input wires, in port order
      std::vector<int> targets;
      for (int p = 0; p < static_cast<int>(op.inputs.size()); ++p) {
        int w = circuit.in_wire_of({op_idx, p});
        for (std::size_t pos = 0; pos < live_wire.size(); ++pos)
          if (live_wire[pos] == w) targets.push_back(static_cast<int>(pos));
      }
      if (targets.size() != op.inputs.size())
        throw InvalidFragment("oracle: op consumes a wire that is not live");

      // permute targets to the back, keeping the rest in order
      std::vector<int> new_order;
      for (int i = 0; i < static_cast<int>(live_wire.size()); ++i)
        if (std::find(targets.begin(), targets.end(), i) == targets.end())
          new_order.push_back(i);
      int rest_dim = 1;
      for (int i : new_order) rest_dim *= live_dim[i];
      new_order.insert(new_order.end(), targets.begin(), targets.end());
      CMat perm = factor_permutation(live_dim, new_order);
      joint = perm * joint * perm.adjoint();

      // apply sum_i (I x K_i) joint (I x K_i)^dag
      CMat next = CMat::Zero(rest_dim * dout, rest_dim * dout);
      CMat id_rest = CMat::Identity(rest_dim, rest_dim);
      for (const CMat& k : kraus) {
        CMat lifted = detail::kron(id_rest, k);
        next += lifted * joint * lifted.adjoint();
      }
      joint = std::move(next);

      // update the live factor lists
      const std::size_t n_rest = new_order.size() - targets.size();
      std::vector<int> new_live, new_dims;
      for (std::size_t i = 0; i < n_rest; ++i) {
        new_live.push_back(live_wire[new_order[i]]);
        new_dims.push_back(live_dim[new_order[i]]);
      }
      for (int p = 0; p < static_cast<int>(op.outputs.size()); ++p) {
        int w = circuit.out_wire_of({op_idx, p});
        new_live.push_back(w);
        new_dims.push_back(letter_dims_label(op.outputs[p]));
      }
      live_wire = std::move(new_live);
      live_dim = std::move(new_dims);
    }
    if (!live_wire.empty()) throw InvalidFragment("oracle: circuit left live wires");
    return joint(0, 0).real();
  }

  // -- Theory interface

  MaximalSet maximal_set(const SystemType& t) const override {
    CMat id = CMat::Identity(hilbert_dim(t), hilbert_dim(t));
    return set_from_kets(t, id);
  }

  MaximalSet random_maximal_set(const SystemType& t, Rng& rng) const override {
    return set_from_kets(t, haar_unitary(hilbert_dim(t), rng));
  }

  GptTensor unit_effect(const SystemType& t) const override {
    int d = hilbert_dim(t);
    return embed_effect({t}, CMat::Identity(d, d));
  }

  GptTensor sample_pure(const SystemType& t, Rng& rng) const override {
    return embed_state({t}, detail::projector(gaussian_ket(hilbert_dim(t), rng)));
  }

  bool is_pure(const SystemType& t, const GptTensor& state) const override {
    CMat rho = frame(t).reconstruct(state.vector());
    Eigen::SelfAdjointEigenSolver<CMat> eig(rho);
    double top = eig.eigenvalues().maxCoeff();
    double tr = rho.trace().real();
    if (eig.eigenvalues().minCoeff() < -1e-7 * std::max(1.0, top))
      throw NotAState("fiducial vector reconstructs to a non-PSD matrix");
    if (tr <= 1e-12) return false;
    return std::abs(top - tr) <= 1e-8 * std::max(1.0, tr);
  }

  std::vector<GptTensor> state_span(const SystemType& t) const override {
    QuantumFrame f = frame(t);
    std::vector<GptTensor> v;
    for (const CMat& op : f.ops()) v.push_back(embed_state({t}, op));
    return v;
  }
  std::vector<GptTensor> effect_span(const SystemType& t) const override {
    QuantumFrame f = frame(t);
    std::vector<GptTensor> v;
    for (const CMat& op : f.ops()) v.push_back(embed_effect({t}, op));
    return v;
  }

  GptTensor permutation_transform(const SystemType& t, const MaximalSet& mset,
                                  const Permutation& pi) const override {
    std::vector<CVec> kets = kets_of(t, mset);
    if (pi.size() != static_cast<int>(kets.size()))
      throw ShapeMismatch("permutation size differs from N");
    int d = hilbert_dim(t);
    CMat u = CMat::Zero(d, d);
    for (int n = 0; n < pi.size(); ++n) u += kets[pi(n)] * kets[n].adjoint();
    return embed_channel({t}, {t}, {u});
  }

  GptTensor direct_filter(const SystemType& t, const MaximalSet& mset,
                          const std::vector<int>& outcomes) const override {
    std::vector<CVec> kets = kets_of(t, mset);
    int d = hilbert_dim(t);
    CMat p = CMat::Zero(d, d);
    for (int n : outcomes) p += kets.at(n) * kets.at(n).adjoint();
    return embed_channel({t}, {t}, {p});
  }

  std::vector<GptTensor> face_span(const SystemType& t, const MaximalSet& mset,
                                   const std::vector<int>& outcomes) const override {
    std::vector<CVec> kets = kets_of(t, mset);
    std::vector<GptTensor> span;
    for (std::size_t a = 0; a < outcomes.size(); ++a) {
      const CVec& ka = kets.at(outcomes[a]);
      span.push_back(embed_state({t}, detail::projector(ka)));
      for (std::size_t b = a + 1; b < outcomes.size(); ++b) {
        const CVec& kb = kets.at(outcomes[b]);
        span.push_back(embed_state({t}, detail::projector(ka + kb)));
        span.push_back(embed_state({t}, detail::projector(ka + Cplx(0, 1) * kb)));
      }
    }
    return span;
  }

  GptTensor distinguishing_effect(const SystemType& t, const GptTensor& pure) const override {
    return embed_effect({t}, detail::projector(ket_of(t, pure)));
  }

  std::vector<GptTensor> near_maximal_effects(const SystemType& t, const GptTensor& pure,
                                              double eps, int count, Rng& rng) const override {
    CVec psi = ket_of(t, pure);
    std::vector<GptTensor> probes;
    for (int i = 0; i < count; ++i)
      probes.push_back(embed_effect({t}, detail::projector(perturbed_ket(psi, eps, rng))));
    return probes;
  }

  std::vector<GptTensor> near_pure_states(const SystemType& t, const GptTensor& max_effect,
                                          double eps, int count, Rng& rng) const override {
    CMat e = frame(t).reconstruct(Eigen::VectorXd(frame(t).gram() * max_effect.vector()));
    Eigen::SelfAdjointEigenSolver<CMat> eig(e);
    Eigen::Index top;
    eig.eigenvalues().maxCoeff(&top);
    CVec psi = eig.eigenvectors().col(top);
    std::vector<GptTensor> probes;
    for (int i = 0; i < count; ++i)
      probes.push_back(embed_state({t}, detail::projector(perturbed_ket(psi, eps, rng))));
    return probes;
  }

  double effect_distance(const SystemType& t, const GptTensor& e1,
                         const GptTensor& e2) const override {
    QuantumFrame f = frame(t);
    CMat a = operator_of_effect(f, e1), b = operator_of_effect(f, e2);
    return (a - b).norm();
  }
  double state_distance(const SystemType& t, const GptTensor& s1,
                        const GptTensor& s2) const override {
    QuantumFrame f = frame(t);
    return (f.reconstruct(s1.vector()) - f.reconstruct(s2.vector())).norm();
  }

  std::optional<std::pair<GptTensor, GptTensor>> compound_permutation_witness(
      const SystemType& t, const MaximalSet& mset, const Permutation& pi) const override {
    std::vector<CVec> kets = kets_of(t, mset);
    int d = hilbert_dim(t);
    CMat u = CMat::Zero(d, d);
    for (int n = 0; n < pi.size(); ++n) u += kets[pi(n)] * kets[n].adjoint();
    if ((u - CMat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12) {
      if (d < 2) return std::nullopt;  // one-dimensional: only the identity exists
      CMat swap01 = CMat::Identity(d, d);
      swap01(0, 0) = swap01(1, 1) = 0;
      swap01(0, 1) = swap01(1, 0) = 1;
      CMat w = unitary_from_basis(kets, swap01);
      GptTensor tw = embed_channel({t}, {t}, {w});
      return std::make_pair(tw, tw);
    }
    CMat r = principal_sqrt_unitary(u);
    GptTensor tr = embed_channel({t}, {t}, {r});
    return std::make_pair(tr, tr);
  }

  GptTensor named_tensor(const std::string& ref, const std::vector<SystemType>& in_types,
                         const std::vector<SystemType>& out_types) const override;

  /// Canonical-phase ket of a pure fiducial state (top eigenvector of the
  /// reconstruction, largest component made real positive).
  CVec ket_of(const SystemType& t, const GptTensor& pure) const {
    CMat rho = frame(t).reconstruct(pure.vector());
    Eigen::SelfAdjointEigenSolver<CMat> eig(rho);
    Eigen::Index top;
    double lambda = eig.eigenvalues().maxCoeff(&top);
    double tr = rho.trace().real();
    if (tr <= 1e-12 || std::abs(lambda - tr) > 1e-6 * std::max(1.0, tr))
      throw NotAState("fiducial vector is not a pure state");
    CVec v = eig.eigenvectors().col(top);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v(big)) / std::abs(v(big));
    return v;
  }

  std::vector<CVec> kets_of(const SystemType& t, const MaximalSet& mset) const {
    std::vector<CVec> kets;
    for (const auto& s : mset.states) kets.push_back(ket_of(t, s));
    return kets;
  }

  static CVec gaussian_ket(int dim, Rng& rng) {
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Cplx(rng.gaussian(), rng.gaussian());
    return v.normalized();
  }

  static CMat haar_unitary(int dim, Rng& rng) {
    CMat g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = Cplx(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
      Cplx d = r(j, j);
      q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
    }
    return q;
  }

 private:
  std::string name_;
  std::map<std::string, int> letter_dims_;
  int default_dim_ = 0;

  int letter_dim(char c) const {
    auto it = letter_dims_.find(std::string(1, c));
    if (it != letter_dims_.end()) return it->second;
    if (default_dim_ > 0) return default_dim_;
    throw UnknownType("quantum theory has no type '" + std::string(1, c) + "'");
  }
  int letter_dims_label(const std::string& label) const {
    int n = 1;
    for (char c : label) n *= letter_dim(c);
    return n;
  }

  QuantumFrame ports_frame(const std::vector<SystemType>& ports) const {
    if (ports.empty()) throw ShapeMismatch("embedding needs at least one port");
    QuantumFrame f = frame(ports[0]);
    for (std::size_t i = 1; i < ports.size(); ++i)
      f = QuantumFrame::product(f, frame(ports[i]));
    return f;
  }

  static std::vector<double> matrix_data(const Eigen::MatrixXd& m) {
    std::vector<double> data(m.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data.data(), m.rows(), m.cols()) = m;
    return data;
  }

  MaximalSet set_from_kets(const SystemType& t, const CMat& basis) const {
    MaximalSet ms;
    ms.type = type(t.label);
    for (int n = 0; n < basis.cols(); ++n) {
      CMat p = basis.col(n) * basis.col(n).adjoint();
      ms.states.push_back(embed_state({t}, p));
      ms.effects.push_back(embed_effect({t}, p));
    }
    return ms;
  }

  static CVec perturbed_ket(const CVec& psi, double eps, Rng& rng) {
    const int d = static_cast<int>(psi.size());
    if (d < 2) return psi;
    CVec g = gaussian_ket(d, rng);
    CVec orth = g - psi * (psi.adjoint() * g)(0);
    if (orth.norm() < 1e-12) return psi;
    orth.normalize();
    double u = rng.uniform(0.0, 1.0) * eps;
    return std::sqrt(1.0 - u) * psi + std::sqrt(u) * orth;
  }

  CMat operator_of_effect(const QuantumFrame& f, const GptTensor& e) const {
    // effect covector holds frame-expansion coefficients
    CMat op = CMat::Zero(f.dim(), f.dim());
    for (int k = 0; k < f.K(); ++k) op += e.vector()(k) * f.ops()[k];
    return op;
  }

  static CMat unitary_from_basis(const std::vector<CVec>& kets, const CMat& m) {
    // conjugate a matrix written in the mset basis into the computational one
    int d = static_cast<int>(kets.size());
    CMat v(d, d);
    for (int i = 0; i < d; ++i) v.col(i) = kets[i];
    return v * m * v.adjoint();
  }

  static CMat principal_sqrt_unitary(const CMat& u) {
    Eigen::ComplexSchur<CMat> schur(u);
    CMat q = schur.matrixU();
    CVec diag = schur.matrixT().diagonal();
    CMat s = CMat::Zero(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      double theta = std::atan2(diag(i).imag(), diag(i).real());
      s(i, i) = std::polar(1.0, theta / 2.0);
    }
    return q * s * q.adjoint();
  }

  static std::vector<CMat> as_kraus(const QuantumOp& qop, int din, int dout,
                                    const std::string& name) {
    switch (qop.kind) {
      case QuantumOp::Kind::State: {
        if (din != 1) throw ShapeMismatch("'" + name + "': state ops take no inputs");
        detail::ensure_hermitian(qop.op, "state");
        if (qop.op.rows() != dout) throw ShapeMismatch("'" + name + "': state dimension");
        if (qop.op.trace().real() > 1.0 + 1e-9)
          throw NonPhysicalOperator("'" + name + "': state trace > 1");
        Eigen::SelfAdjointEigenSolver<CMat> eig(qop.op);
        std::vector<CMat> ks;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
          double lambda = eig.eigenvalues()(i);
          if (lambda < -1e-9) throw NonPhysicalOperator("'" + name + "': state not PSD");
          if (lambda <= 0) continue;
          ks.push_back(std::sqrt(lambda) * eig.eigenvectors().col(i));
        }
        if (ks.empty()) ks.push_back(CMat::Zero(dout, 1));
        return ks;
      }
      case QuantumOp::Kind::Effect: {
        if (dout != 1) throw ShapeMismatch("'" + name + "': effect ops yield no outputs");
        detail::ensure_hermitian(qop.op, "effect");
        if (qop.op.rows() != din) throw ShapeMismatch("'" + name + "': effect dimension");
        Eigen::SelfAdjointEigenSolver<CMat> eig(qop.op);
        if (eig.eigenvalues().minCoeff() < -1e-9 ||
            eig.eigenvalues().maxCoeff() > 1.0 + 1e-9)
          throw NonPhysicalOperator("'" + name + "': effect outside [0, I]");
        std::vector<CMat> ks;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
          double mu = std::max(0.0, eig.eigenvalues()(i));
          if (mu <= 0) continue;
          ks.push_back(std::sqrt(mu) * eig.eigenvectors().col(i).adjoint());
        }
        if (ks.empty()) ks.push_back(CMat::Zero(1, din));
        return ks;
      }
      case QuantumOp::Kind::Channel: {
        validate_kraus(qop.kraus, din, dout);
        return qop.kraus;
      }
    }
    throw GptError("unreachable");
  }

  static void validate_kraus(const std::vector<CMat>& kraus, int din, int dout) {
    if (kraus.empty()) throw NonPhysicalOperator("channel needs Kraus operators");
    CMat acc = CMat::Zero(din, din);
    for (const CMat& k : kraus) {
      if (k.rows() != dout || k.cols() != din)
        throw ShapeMismatch("Kraus operator has wrong shape");
      acc += k.adjoint() * k;
    }
    Eigen::SelfAdjointEigenSolver<CMat> eig(acc);
    if (eig.eigenvalues().maxCoeff() > 1.0 + 1e-9)
      throw NonPhysicalOperator("channel is trace increasing");
  }

  static CMat factor_permutation(const std::vector<int>& dims, const std::vector<int>& order) {
    int total = 1;
    for (int d : dims) total *= d;
    CMat p = CMat::Zero(total, total);
    std::vector<int> new_dims(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) new_dims[i] = dims[order[i]];
    for (int old_flat = 0; old_flat < total; ++old_flat) {
      // decompose in the old factor order
      std::vector<int> idx(dims.size());
      int rem = old_flat;
      for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        idx[i] = rem % dims[i];
        rem /= dims[i];
      }
      int new_flat = 0;
      for (std::size_t i = 0; i < order.size(); ++i) new_flat = new_flat * new_dims[i] + idx[order[i]];
      p(new_flat, old_flat) = 1.0;
    }
    return p;
  }
};

inline QuantumTheory quantum_theory(int N) { return QuantumTheory(N); }

namespace detail {

inline CVec qubit_ket(const std::string& name) {
  CVec v(2);
  if (name == "z+") v << 1, 0;
  else if (name == "z-") v << 0, 1;
  else if (name == "x+" || name == "plus") v << 1, 1;
  else if (name == "x-") v << 1, -1;
  else if (name == "y+") v << 1, Cplx(0, 1);
  else if (name == "y-") v << 1, Cplx(0, -1);
  else throw UnknownObject("unknown qubit state '" + name + "'");
  return v.normalized();
}

inline CMat named_unitary(const std::string& g, int total_dim) {
  const double s = 1.0 / std::sqrt(2.0);
  auto need = [&](int d) {
    if (total_dim != d)
      throw ShapeMismatch("gate '" + g + "' needs total dimension " + std::to_string(d));
  };
  CMat m;
  if (g == "I") return CMat::Identity(total_dim, total_dim);
  if (g == "H") {
    need(2);
    m.resize(2, 2);
    m << s, s, s, -s;
  } else if (g == "X") {
    need(2);
    m.resize(2, 2);
    m << 0, 1, 1, 0;
  } else if (g == "Y") {
    need(2);
    m.resize(2, 2);
    m << 0, Cplx(0, -1), Cplx(0, 1), 0;
  } else if (g == "Z") {
    need(2);
    m.resize(2, 2);
    m << 1, 0, 0, -1;
  } else if (g == "S") {
    need(2);
    m.resize(2, 2);
    m << 1, 0, 0, Cplx(0, 1);
  } else if (g == "T") {
    need(2);
    m.resize(2, 2);
    m << 1, 0, 0, std::polar(1.0, M_PI / 4);
  } else if (g == "CNOT") {
    need(4);
    m = CMat::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  } else if (g == "SWAP") {
    need(4);
    m = CMat::Zero(4, 4);
    m(0, 0) = m(3, 3) = m(1, 2) = m(2, 1) = 1;
  } else {
    throw UnknownObject("unknown gate '" + g + "'");
  }
  return m;
}

/// Heisenberg-Weyl shift/clock unitaries; the uniform mixture over all of
/// them sends every state to the maximally mixed one.
inline std::vector<CMat> depolarize_kraus(int d, double p) {
  if (p < 0 || p > 1) throw NonPhysicalOperator("depolarize needs p in [0,1]");
  CMat shift = CMat::Zero(d, d), clock = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    shift((i + 1) % d, i) = 1;
    clock(i, i) = std::polar(1.0, 2 * M_PI * i / d);
  }
  std::vector<CMat> ks;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      CMat w = CMat::Identity(d, d);
      for (int i = 0; i < a; ++i) w = shift * w;
      for (int i = 0; i < b; ++i) w = clock * w;
      double weight = (a == 0 && b == 0) ? (1.0 - p + p / (d * d)) : p / (d * d);
      ks.push_back(std::sqrt(weight) * w);
    }
  return ks;
}

}  // namespace detail

inline GptTensor QuantumTheory::named_tensor(const std::string& ref,
                                             const std::vector<SystemType>& in_types,
                                             const std::vector<SystemType>& out_types) const {
  int din = 1, dout = 1;
  for (const auto& t : in_types) din *= hilbert_dim(t);
  for (const auto& t : out_types) dout *= hilbert_dim(t);

  auto basis_ket = [](int d, int i) {
    if (i < 0 || i >= d) throw UnknownObject("basis index out of range");
    CVec v = CVec::Zero(d);
    v(i) = 1;
    return v;
  };
  auto rotated_basis_ket = [&](char axis, int d, int i) {
    if (axis == 'z') return basis_ket(d, i);
    if (d != 2) throw ShapeMismatch("x/y bases are qubit notation");
    return detail::qubit_ket(std::string(1, axis) + (i == 0 ? "+" : "-"));
  };

  if (ref.rfind("prep:", 0) == 0) {
    if (!in_types.empty() || out_types.empty())
      throw ShapeMismatch("'" + ref + "' binds a preparation");
    std::string what = ref.substr(5);
    CMat rho;
    if (what == "bell") {
      if (out_types.size() != 2 || hilbert_dim(out_types[0]) != hilbert_dim(out_types[1]))
        throw ShapeMismatch("prep:bell needs two equal ports");
      int d = hilbert_dim(out_types[0]);
      CVec phi = CVec::Zero(d * d);
      for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
      rho = phi * phi.adjoint();
    } else if (what == "mixed") {
      rho = CMat::Identity(dout, dout) / static_cast<double>(dout);
    } else if (what.rfind("basis:", 0) == 0) {
      rho = detail::projector(basis_ket(dout, std::stoi(what.substr(6))));
    } else {
      if (dout != 2) throw ShapeMismatch("'" + ref + "' is qubit notation");
      rho = detail::projector(detail::qubit_ket(what));
    }
    return embed_state(out_types, rho);
  }
  if (ref.rfind("effect:", 0) == 0) {
    if (!out_types.empty() || in_types.empty())
      throw ShapeMismatch("'" + ref + "' binds a result");
    std::string what = ref.substr(7);
    CMat e;
    if (what == "unit") {
      e = CMat::Identity(din, din);
    } else if (what == "bell") {
      if (in_types.size() != 2 || hilbert_dim(in_types[0]) != hilbert_dim(in_types[1]))
        throw ShapeMismatch("effect:bell needs two equal ports");
      int d = hilbert_dim(in_types[0]);
      CVec phi = CVec::Zero(d * d);
      for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
      e = phi * phi.adjoint();
    } else if (what.rfind("basis[", 0) == 0 && what.size() > 8 && what[7] == ']' &&
               what[8] == ':') {
      e = detail::projector(rotated_basis_ket(what[6], din, std::stoi(what.substr(9))));
    } else if (what.rfind("basis:", 0) == 0) {
      e = detail::projector(basis_ket(din, std::stoi(what.substr(6))));
    } else {
      if (din != 2) throw ShapeMismatch("'" + ref + "' is qubit notation");
      e = detail::projector(detail::qubit_ket(what));
    }
    return embed_effect(in_types, e);
  }
  if (ref.rfind("channel:", 0) == 0) {
    std::string what = ref.substr(8);
    if (what == "identity") {
      if (din != dout) throw ShapeMismatch("identity channel needs equal extents");
      return embed_channel(in_types, out_types, {CMat::Identity(din, din)});
    }
    if (what.rfind("unitary:", 0) == 0) {
      if (din != dout) throw ShapeMismatch("unitary channel needs equal extents");
      return embed_channel(in_types, out_types, {detail::named_unitary(what.substr(8), din)});
    }
    if (what.rfind("depolarize:", 0) == 0) {
      if (din != dout) throw ShapeMismatch("depolarize needs equal extents");
      return embed_channel(in_types, out_types,
                           detail::depolarize_kraus(din, std::stod(what.substr(11))));
    }
    throw UnknownObject("unknown quantum channel '" + ref + "'");
  }
  throw UnknownObject("unknown object reference '" + ref + "'");
}

}  // namespace gptc
