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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gptc/errors.hpp"
#include "gptc/rng.hpp"
#include "gptc/system_type.hpp"
#include "gptc/tensor.hpp"

namespace gptc {

/// N perfectly distinguishable states together with the effects of the
/// maximal measurement that tells them apart: states[n] . effects[m] = d_nm.
struct MaximalSet {
  SystemType type;
  std::vector<GptTensor> states;
  std::vector<GptTensor> effects;
};

/// A model theory: binds abstract system types to concrete fiducial-space
/// objects. Composite types use concatenated labels, so every method also
/// accepts the composites this theory can build. Theories are immutable
/// after construction; samplers draw from a caller-owned generator.
class Theory {
 public:
  virtual ~Theory() = default;

  enum class Kind { Classical, Quantum, Tabular };
  virtual Kind kind() const = 0;
  virtual const std::string& name() const = 0;

  virtual SystemType type(const std::string& label) const = 0;
  virtual SystemType composite(const SystemType& a, const SystemType& b) const = 0;

  /// Canonical maximal set of the type (classical: the unique one).
  virtual MaximalSet maximal_set(const SystemType& t) const = 0;
  virtual MaximalSet random_maximal_set(const SystemType& t, Rng& rng) const = 0;

  /// The deterministic effect: unit probability on every normalized state.
  virtual GptTensor unit_effect(const SystemType& t) const = 0;

  virtual GptTensor sample_pure(const SystemType& t, Rng& rng) const = 0;
  virtual bool is_pure(const SystemType& t, const GptTensor& state) const = 0;

  /// Physical states / effects spanning the K-dimensional space of the type.
  virtual std::vector<GptTensor> state_span(const SystemType& t) const = 0;
  virtual std::vector<GptTensor> effect_span(const SystemType& t) const = 0;

  /// Reversible transformation sending mset.states[n] to mset.states[pi(n)].
  virtual GptTensor permutation_transform(const SystemType& t, const MaximalSet& mset,
                                          const Permutation& pi) const = 0;

  /// The theory's own filter for the face of `outcomes` within `mset`
  /// (quantum: the projector sandwich; classical: a 0/1 diagonal).
  virtual GptTensor direct_filter(const SystemType& t, const MaximalSet& mset,
                                  const std::vector<int>& outcomes) const = 0;

  /// Physical states spanning the informational face of `outcomes`.
  virtual std::vector<GptTensor> face_span(const SystemType& t, const MaximalSet& mset,
                                           const std::vector<int>& outcomes) const = 0;

  /// The maximal effect giving unit probability on the given pure state.
  virtual GptTensor distinguishing_effect(const SystemType& t,
                                          const GptTensor& pure_state) const = 0;

  /// Finite theories list their maximal effects / pure states outright.
  virtual std::optional<std::vector<GptTensor>> enumerable_maximal_effects(
      const SystemType& t) const {
    return std::nullopt;
  }
  virtual std::optional<std::vector<GptTensor>> enumerable_pure_states(
      const SystemType& t) const {
    return std::nullopt;
  }

  /// Maximal effects e with e.s >= 1-eps on the given pure state, used as
  /// rigidity probes. Default: filter the enumerable effects.
  virtual std::vector<GptTensor> near_maximal_effects(const SystemType& t,
                                                      const GptTensor& pure_state, double eps,
                                                      int count, Rng& rng) const {
    (void)count;
    (void)rng;
    auto all = enumerable_maximal_effects(t);
    if (!all) throw UnsupportedTheory("theory cannot enumerate maximal effects");
    std::vector<GptTensor> near;
    for (const auto& e : *all)
      if (e.vector().dot(pure_state.vector()) >= 1.0 - eps) near.push_back(e);
    return near;
  }

  /// Pure states s with e.s >= 1-eps on the given maximal effect.
  virtual std::vector<GptTensor> near_pure_states(const SystemType& t,
                                                  const GptTensor& max_effect, double eps,
                                                  int count, Rng& rng) const {
    (void)count;
    (void)rng;
    auto all = enumerable_pure_states(t);
    if (!all) throw UnsupportedTheory("theory cannot enumerate pure states");
    std::vector<GptTensor> near;
    for (const auto& s : *all)
      if (max_effect.vector().dot(s.vector()) >= 1.0 - eps) near.push_back(s);
    return near;
  }

  /// Distances used by the P1 rigidity clauses. Defaults compare fiducial
  /// components; the quantum theory overrides with operator-space distance.
  virtual double effect_distance(const SystemType& t, const GptTensor& e1,
                                 const GptTensor& e2) const {
    (void)t;
    return (e1.vector() - e2.vector()).cwiseAbs().maxCoeff();
  }
  virtual double state_distance(const SystemType& t, const GptTensor& s1,
                                const GptTensor& s2) const {
    (void)t;
    return (s1.vector() - s2.vector()).cwiseAbs().maxCoeff();
  }

  /// Two reversible transformations, neither the identity, composing to the
  /// permutation action on mset; nullopt when no such pair exists.
  virtual std::optional<std::pair<GptTensor, GptTensor>> compound_permutation_witness(
      const SystemType& t, const MaximalSet& mset, const Permutation& pi) const = 0;

  /// Resolves a named object reference ("prep:...", "effect:...",
  /// "channel:...") against the port types of the operation being bound.
  virtual GptTensor named_tensor(const std::string& ref,
                                 const std::vector<SystemType>& in_types,
                                 const std::vector<SystemType>& out_types) const = 0;

  // -- concrete helpers shared by all theories

  GptTensor null_state(const SystemType& t) const {
    return GptTensor::state(t, std::vector<double>(t.K, 0.0));
  }

  GptTensor identity_transform(const SystemType& t) const {
    return GptTensor::transformation({t}, {t}, Eigen::MatrixXd::Identity(t.K, t.K));
  }
};

/// Kronecker product of fiducial vectors; the composite flattening is
/// row-major, (i, j) -> i*K_b + j.
inline std::vector<double> kron_values(const GptTensor& a, const GptTensor& b) {
  std::vector<double> v(a.data().size() * b.data().size());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    for (std::size_t j = 0; j < b.data().size(); ++j)
      v[i * b.data().size() + j] = a.data()[i] * b.data()[j];
  return v;
}

inline GptTensor product_state(const Theory& th, const GptTensor& a, const GptTensor& b) {
  SystemType ab = th.composite(a.out_type(0), b.out_type(0));
  return GptTensor::state(ab, kron_values(a, b));
}

inline GptTensor product_effect(const Theory& th, const GptTensor& a, const GptTensor& b) {
  SystemType ab = th.composite(a.in_type(0), b.in_type(0));
  return GptTensor::effect(ab, kron_values(a, b));
}

/// Same data viewed with different axes (sizes must multiply out equally);
/// used to move between one composite axis and per-port axes.
inline GptTensor reshaped(const GptTensor& t, std::vector<SystemType> out_types,
                          std::vector<SystemType> in_types) {
  GptTensor r(std::move(out_types), std::move(in_types), t.data());
  if (r.out_size() != t.out_size() || r.in_size() != t.in_size())
    throw ShapeMismatch("reshape changes flattened extents");
  return r;
}

}  // namespace gptc
