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
#include <algorithm>
#include <span>
#include <vector>

#include "gptc/theory.hpp"

namespace gptc {

/// All states supported on the outcome subset O_S of a maximal measurement.
/// The supporting hyperplane covector is the sum of the complement-outcome
/// effects; every face member annihilates it.
struct InformationalFace {
  SystemType type;
  MaximalSet parent;
  std::vector<int> outcomes;    // O_S, sorted
  std::vector<int> complement;  // the other outcomes
  std::vector<GptTensor> span_basis;
  GptTensor hyperplane;
  int dimension = 0;  // rank of the face's linear span
};

/// Rank with a relative singular-value threshold.
inline int numerical_rank(std::span<const GptTensor> states, double rel_tol = 1e-8) {
  if (states.empty()) return 0;
  Eigen::MatrixXd m(states.size(), states[0].data().size());
  for (std::size_t i = 0; i < states.size(); ++i) m.row(i) = states[i].vector();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (top <= 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * top) ++rank;
  return rank;
}

inline int numerical_rank(const std::vector<GptTensor>& states, double rel_tol = 1e-8) {
  return numerical_rank(std::span<const GptTensor>(states), rel_tol);
}

inline InformationalFace build_face(const Theory& th, const SystemType& t,
                                    const MaximalSet& mset, std::vector<int> outcomes) {
  if (outcomes.empty()) throw EmptyOutcomeSet("face needs a nonempty outcome subset");
  std::sort(outcomes.begin(), outcomes.end());
  outcomes.erase(std::unique(outcomes.begin(), outcomes.end()), outcomes.end());
  const int n = static_cast<int>(mset.states.size());
  for (int o : outcomes)
    if (o < 0 || o >= n) throw EmptyOutcomeSet("outcome index out of range");

  InformationalFace face;
  face.type = t;
  face.parent = mset;
  face.outcomes = outcomes;
  for (int m = 0; m < n; ++m)
    if (!std::binary_search(outcomes.begin(), outcomes.end(), m)) face.complement.push_back(m);

  Eigen::VectorXd hyper = Eigen::VectorXd::Zero(t.K);
  for (int m : face.complement) hyper += mset.effects.at(m).vector();
  face.hyperplane =
      GptTensor::effect(t, std::vector<double>(hyper.data(), hyper.data() + hyper.size()));

  face.span_basis = th.face_span(t, mset, outcomes);
  face.dimension = numerical_rank(face.span_basis);

  for (const auto& s : face.span_basis)
    if (std::abs(hyper.dot(s.vector())) > 1e-9)
      throw GptError("face basis violates its supporting hyperplane");
  return face;
}

/// A set of states is non-flat relative to the face when it lies inside it
/// and spans it. Pre: every state satisfies the hyperplane to 1e-9.
inline bool is_non_flat(std::span<const GptTensor> states, const InformationalFace& face) {
  for (const auto& s : states)
    if (std::abs(face.hyperplane.vector().dot(s.vector())) > 1e-9)
      throw NotInFace("state violates the face's supporting hyperplane");
  return numerical_rank(states) == face.dimension;
}

inline bool is_non_flat(const std::vector<GptTensor>& states, const InformationalFace& face) {
  return is_non_flat(std::span<const GptTensor>(states), face);
}

}  // namespace gptc
