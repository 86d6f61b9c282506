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
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gptc/theory.hpp"

namespace gptc {

/// Finite classical probability theory: K = N, states are probability
/// vectors, pure states the basis vectors, reversible transformations the
/// permutation matrices. There is a unique maximal set up to relabeling.
class ClassicalTheory final : public Theory {
 public:
  explicit ClassicalTheory(int default_N)
      : name_("classical:" + std::to_string(default_N)), default_N_(default_N) {
    if (default_N < 1) throw SpecInvalid("classical theory needs N >= 1");
  }
  ClassicalTheory(std::map<std::string, int> letter_N, int default_N = 0)
      : name_("classical"), letter_N_(std::move(letter_N)), default_N_(default_N) {
    for (const auto& [l, n] : letter_N_)
      if (n < 1) throw SpecInvalid("classical theory needs N >= 1 for type " + l);
  }

  Kind kind() const override { return Kind::Classical; }
  const std::string& name() const override { return name_; }

  SystemType type(const std::string& label) const override {
    int n = 1;
    for (char c : label) n *= letter_dim(c);
    return SystemType{label, n, n};
  }

  SystemType composite(const SystemType& a, const SystemType& b) const override {
    return SystemType{a.label + b.label, a.N * b.N, a.K * b.K};
  }

  MaximalSet maximal_set(const SystemType& t) const override {
    return relabeled_set(t, Permutation::identity(t.N));
  }

  MaximalSet random_maximal_set(const SystemType& t, Rng& rng) const override {
    std::vector<int> img(t.N);
    std::iota(img.begin(), img.end(), 0);
    std::shuffle(img.begin(), img.end(), rng.engine());
    return relabeled_set(t, Permutation(img));
  }

  GptTensor unit_effect(const SystemType& t) const override {
    return GptTensor::effect(t, std::vector<double>(t.K, 1.0));
  }

  GptTensor sample_pure(const SystemType& t, Rng& rng) const override {
    return basis_state(t, rng.uniform_int(0, t.N - 1));
  }

  bool is_pure(const SystemType& t, const GptTensor& state) const override {
    double sum = 0, mx = 0;
    for (double v : state.data()) {
      if (v < -1e-8) throw NotAState("negative probability component");
      sum += v;
      mx = std::max(mx, v);
    }
    if (sum <= 1e-12) return false;  // the null state is not pure
    return std::abs(sum - mx) <= 1e-8 * std::max(1.0, sum);
  }

  std::vector<GptTensor> state_span(const SystemType& t) const override {
    std::vector<GptTensor> v;
    for (int i = 0; i < t.N; ++i) v.push_back(basis_state(t, i));
    return v;
  }
  std::vector<GptTensor> effect_span(const SystemType& t) const override {
    std::vector<GptTensor> v;
    for (int i = 0; i < t.N; ++i) v.push_back(basis_effect(t, i));
    return v;
  }

  GptTensor permutation_transform(const SystemType& t, const MaximalSet& mset,
                                  const Permutation& pi) const override {
    if (pi.size() != t.N) throw ShapeMismatch("permutation size differs from N");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t.K, t.K);
    for (int n = 0; n < t.N; ++n)
      m(basis_index(mset.states.at(pi(n))), basis_index(mset.states.at(n))) = 1.0;
    return GptTensor::transformation({t}, {t}, m);
  }

  GptTensor direct_filter(const SystemType& t, const MaximalSet& mset,
                          const std::vector<int>& outcomes) const override {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t.K, t.K);
    for (int n : outcomes) {
      int b = basis_index(mset.states.at(n));
      m(b, b) = 1.0;
    }
    return GptTensor::transformation({t}, {t}, m);
  }

  std::vector<GptTensor> face_span(const SystemType& t, const MaximalSet& mset,
                                   const std::vector<int>& outcomes) const override {
    std::vector<GptTensor> v;
    for (int n : outcomes) v.push_back(mset.states.at(n));
    return v;
  }

  GptTensor distinguishing_effect(const SystemType& t, const GptTensor& pure) const override {
    int best = 0;
    for (int i = 1; i < t.K; ++i)
      if (pure.data()[i] > pure.data()[best]) best = i;
    return basis_effect(t, best);
  }

  std::optional<std::vector<GptTensor>> enumerable_maximal_effects(
      const SystemType& t) const override {
    return effect_span(t);
  }
  std::optional<std::vector<GptTensor>> enumerable_pure_states(
      const SystemType& t) const override {
    return state_span(t);
  }

  std::optional<std::pair<GptTensor, GptTensor>> compound_permutation_witness(
      const SystemType& t, const MaximalSet& mset, const Permutation& pi) const override {
    // Exhaustive over S_N x S_N for small N (the honest finite search);
    // beyond that a direct factorization.
    if (t.N <= 5) {
      std::vector<int> first(t.N), second(t.N);
      std::iota(first.begin(), first.end(), 0);
      do {
        Permutation p1(first);
        if (p1.is_identity()) continue;
        std::iota(second.begin(), second.end(), 0);
        do {
          Permutation p2(second);
          if (p2.is_identity()) continue;
          if (p1.then(p2) == pi)
            return std::make_pair(permutation_transform(t, mset, p1),
                                  permutation_transform(t, mset, p2));
        } while (std::next_permutation(second.begin(), second.end()));
      } while (std::next_permutation(first.begin(), first.end()));
      return std::nullopt;
    }
    // sigma = a transposition different from pi; then pi o sigma^-1 != id
    for (int a = 0; a + 1 < t.N; ++a) {
      std::vector<int> img(t.N);
      std::iota(img.begin(), img.end(), 0);
      std::swap(img[a], img[a + 1]);
      Permutation sigma(img);
      if (sigma == pi) continue;
      Permutation tau = sigma.inverse().then(pi);
      if (tau.is_identity()) continue;
      return std::make_pair(permutation_transform(t, mset, sigma),
                            permutation_transform(t, mset, tau));
    }
    return std::nullopt;
  }

  GptTensor named_tensor(const std::string& ref, const std::vector<SystemType>& in_types,
                         const std::vector<SystemType>& out_types) const override {
    std::size_t k_in = 1, k_out = 1;
    for (const auto& t : in_types) k_in *= t.K;
    for (const auto& t : out_types) k_out *= t.K;

    if (ref.rfind("prep:", 0) == 0) {
      if (!in_types.empty() || out_types.empty())
        throw ShapeMismatch("'" + ref + "' binds a preparation");
      std::string what = ref.substr(5);
      std::vector<double> v(k_out, 0.0);
      if (what == "uniform") {
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(k_out));
      } else if (what.rfind("basis:", 0) == 0) {
        std::size_t i = std::stoul(what.substr(6));
        if (i >= k_out) throw UnknownObject("basis index out of range in '" + ref + "'");
        v[i] = 1.0;
      } else {
        throw UnknownObject("unknown classical preparation '" + ref + "'");
      }
      return GptTensor::state(out_types, std::move(v));
    }
    if (ref.rfind("effect:", 0) == 0) {
      if (!out_types.empty() || in_types.empty())
        throw ShapeMismatch("'" + ref + "' binds a result");
      std::string what = ref.substr(7);
      std::vector<double> v(k_in, 0.0);
      if (what == "unit") {
        std::fill(v.begin(), v.end(), 1.0);
      } else if (what.rfind("basis:", 0) == 0) {
        std::size_t i = std::stoul(what.substr(6));
        if (i >= k_in) throw UnknownObject("basis index out of range in '" + ref + "'");
        v[i] = 1.0;
      } else {
        throw UnknownObject("unknown classical effect '" + ref + "'");
      }
      return GptTensor::effect(in_types, std::move(v));
    }
    if (ref.rfind("channel:", 0) == 0) {
      std::string what = ref.substr(8);
      if (what == "identity") {
        if (k_in != k_out) throw ShapeMismatch("identity channel needs equal extents");
        return reshaped(GptTensor::transformation(out_types, in_types,
                                                  Eigen::MatrixXd::Identity(k_out, k_in)),
                        out_types, in_types);
      }
      if (what.rfind("permutation:", 0) == 0) {
        std::vector<int> img;
        std::stringstream ss(what.substr(12));
        std::string tok;
        while (std::getline(ss, tok, ',')) img.push_back(std::stoi(tok));
        if (img.size() != k_in || k_in != k_out)
          throw ShapeMismatch("permutation image size must equal the extent");
        Permutation pi(img);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k_out, k_in);
        for (std::size_t i = 0; i < k_in; ++i) m(pi(static_cast<int>(i)), i) = 1.0;
        return GptTensor::transformation(out_types, in_types, m);
      }
      throw UnknownObject("unknown classical channel '" + ref + "'");
    }
    throw UnknownObject("unknown object reference '" + ref + "'");
  }

 private:
  std::string name_;
  std::map<std::string, int> letter_N_;
  int default_N_ = 0;

  int letter_dim(char c) const {
    auto it = letter_N_.find(std::string(1, c));
    if (it != letter_N_.end()) return it->second;
    if (default_N_ > 0) return default_N_;
    throw UnknownType("classical theory has no type '" + std::string(1, c) + "'");
  }

  GptTensor basis_state(const SystemType& t, int i) const {
    std::vector<double> v(t.K, 0.0);
    v.at(i) = 1.0;
    return GptTensor::state(t, std::move(v));
  }
  GptTensor basis_effect(const SystemType& t, int i) const {
    std::vector<double> v(t.K, 0.0);
    v.at(i) = 1.0;
    return GptTensor::effect(t, std::move(v));
  }

  static int basis_index(const GptTensor& state) {
    int best = 0;
    for (std::size_t i = 1; i < state.data().size(); ++i)
      if (state.data()[i] > state.data()[best]) best = static_cast<int>(i);
    return best;
  }

  MaximalSet relabeled_set(const SystemType& t, const Permutation& sigma) const {
    MaximalSet ms;
    ms.type = t;
    for (int n = 0; n < t.N; ++n) {
      ms.states.push_back(basis_state(t, sigma(n)));
      ms.effects.push_back(basis_effect(t, sigma(n)));
    }
    return ms;
  }
};

inline ClassicalTheory classical_theory(int N) { return ClassicalTheory(N); }

}  // namespace gptc
