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
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gptc/check_report.hpp"
#include "gptc/faces.hpp"
#include "gptc/theory.hpp"

namespace gptc {

// Tolerances shared by the checks: theory-level identities at 1e-9, pure
// arithmetic identities at 1e-12/1e-10; P1 rigidity probed at (eps, delta).
inline constexpr double kUnitTol = 1e-9;
inline constexpr double kRigidityEps = 1e-6;
inline constexpr double kRigidityDelta = 1e-2;

/// P1, logical sharpness: one-to-one map between pure states and maximal
/// effects reaching unit probability. Existence is checked constructively,
/// uniqueness (rigidity) by probing maximal effects within eps of unity.
inline CheckReport check_p1(const Theory& th, const SystemType& t, int n_samples,
                            std::uint64_t seed) {
  CheckReport rep;
  rep.id = "p1";
  rep.seed = seed;
  rep.tolerances = {{"unit", kUnitTol}, {"eps", kRigidityEps}, {"delta", kRigidityDelta}};
  Rng rng(seed);
  constexpr int kProbes = 8;

  // pure states -> maximal effects
  auto enum_pure = th.enumerable_pure_states(t);
  const int rounds = enum_pure ? static_cast<int>(enum_pure->size()) : n_samples;
  if (enum_pure && enum_pure->empty()) throw UnsupportedTheory("theory lists no pure states");
  for (int i = 0; i < rounds; ++i) {
    GptTensor s = enum_pure ? (*enum_pure)[i] : th.sample_pure(t, rng);
    GptTensor e = th.distinguishing_effect(t, s);
    double p = e.vector().dot(s.vector());
    rep.require(p >= 1.0 - kUnitTol, "no maximal effect reaches unit probability",
                std::abs(1.0 - p), witness_vector(s));
    if (!rep.pass) break;
    for (const GptTensor& probe : th.near_maximal_effects(t, s, kRigidityEps, kProbes, rng)) {
      if (probe.vector().dot(s.vector()) < 1.0 - kRigidityEps) continue;
      double d = th.effect_distance(t, probe, e);
      if (d > kRigidityDelta) {
        rep.fail("two distant maximal effects reach unit probability on one pure state", d,
                 "state=" + witness_vector(s) + " effects=" + witness_vector(e) + "," +
                     witness_vector(probe));
        break;
      }
    }
    if (!rep.pass) break;
  }

  // maximal effects -> pure states (mirror direction)
  if (rep.pass) {
    auto enum_eff = th.enumerable_maximal_effects(t);
    const int mrounds = enum_eff ? static_cast<int>(enum_eff->size()) : n_samples;
    for (int i = 0; i < mrounds && rep.pass; ++i) {
      GptTensor e = [&] {
        if (enum_eff) return (*enum_eff)[i];
        MaximalSet ms = th.random_maximal_set(t, rng);
        return ms.effects[rng.uniform_int(0, static_cast<int>(ms.effects.size()) - 1)];
      }();
      std::vector<GptTensor> close = th.near_pure_states(t, e, kRigidityEps, kProbes, rng);
      const GptTensor* witness_state = nullptr;
      for (const GptTensor& s : close) {
        if (e.vector().dot(s.vector()) < 1.0 - kRigidityEps) continue;
        if (!witness_state) {
          witness_state = &s;
          continue;
        }
        double d = th.state_distance(t, *witness_state, s);
        if (d > kRigidityDelta) {
          rep.fail("two distant pure states reach unit probability on one maximal effect", d,
                   "effect=" + witness_vector(e) + " states=" + witness_vector(*witness_state) +
                       "," + witness_vector(s));
          break;
        }
      }
    }
  }
  rep.note("samples=" + std::to_string(rounds));
  return rep;
}

/// P2, information locality: N_ab = N_a N_b, witnessed by the product of
/// maximal sets being a maximal set of the composite.
inline CheckReport check_p2(const Theory& th, const SystemType& a, const SystemType& b) {
  CheckReport rep;
  rep.id = "p2";
  rep.tolerances = {{"duality", kUnitTol}};
  SystemType ab = th.composite(a, b);
  rep.require(ab.N == a.N * b.N, "N_ab differs from N_a*N_b",
              std::abs(static_cast<double>(ab.N) - static_cast<double>(a.N) * b.N));
  MaximalSet msa = th.maximal_set(a);
  MaximalSet msb = th.maximal_set(b);
  std::vector<GptTensor> states, effects;
  for (const auto& sa : msa.states)
    for (const auto& sb : msb.states) states.push_back(product_state(th, sa, sb));
  for (const auto& ea : msa.effects)
    for (const auto& eb : msb.effects) effects.push_back(product_effect(th, ea, eb));
  for (std::size_t i = 0; i < effects.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j) {
      double p = effects[i].vector().dot(states[j].vector());
      double want = (i == j) ? 1.0 : 0.0;
      rep.require(std::abs(p - want) <= kUnitTol, "product pair violates duality",
                  std::abs(p - want));
      if (!rep.pass) return rep;
    }
  rep.note("N_ab=" + std::to_string(ab.N));
  rep.note("log-additivity: log N_ab = log N_a + log N_b");
  return rep;
}

/// P3, tomographic locality: K_ab = K_a K_b and product effects span the
/// composite effect space (rank K_ab). Reports log-additivity of capacity.
inline CheckReport check_p3(const Theory& th, const SystemType& a, const SystemType& b) {
  CheckReport rep;
  rep.id = "p3";
  rep.tolerances = {{"rank", 0.0}};
  SystemType ab = th.composite(a, b);
  rep.require(ab.K == a.K * b.K, "K_ab differs from K_a*K_b",
              std::abs(static_cast<double>(ab.K) - static_cast<double>(a.K) * b.K),
              "K_ab=" + std::to_string(ab.K));
  auto ea = th.effect_span(a);
  auto eb = th.effect_span(b);
  Eigen::MatrixXd rows(ea.size() * eb.size(), a.K * b.K);
  int r = 0;
  for (const auto& x : ea)
    for (const auto& y : eb) {
      GptTensor prod = GptTensor::effect(SystemType{ab.label, ab.N, a.K * b.K},
                                         kron_values(x, y));
      rows.row(r++) = prod.vector();
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  int rank = static_cast<int>(lu.rank());
  rep.require(rank == ab.K, "product effects do not span the composite effect space",
              std::abs(rank - ab.K), "rank=" + std::to_string(rank));
  rep.note("rank=" + std::to_string(rank));
  if (ab.N == a.N * b.N) rep.note("log N_ab = log N_a + log N_b");
  return rep;
}

/// P4', permutability: the theory can reversibly effect any permutation of
/// a maximal set. Verifies the inverse exists and the action is exact.
inline CheckReport check_p4prime(const Theory& th, const SystemType& t, const Permutation& pi) {
  CheckReport rep;
  rep.id = "p4prime";
  rep.tolerances = {{"inverse", 1e-10}, {"action", kUnitTol}};
  MaximalSet ms = th.maximal_set(t);
  GptTensor fwd = th.permutation_transform(t, ms, pi);
  GptTensor bwd = th.permutation_transform(t, ms, pi.inverse());
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(t.K, t.K);
  double inv1 = (bwd.matrix() * fwd.matrix() - eye).cwiseAbs().maxCoeff();
  double inv2 = (fwd.matrix() * bwd.matrix() - eye).cwiseAbs().maxCoeff();
  rep.require(inv1 <= 1e-10 && inv2 <= 1e-10, "transformation is not reversible",
              std::max(inv1, inv2));
  for (int n = 0; n < pi.size(); ++n) {
    double d =
        (fwd.matrix() * ms.states[n].vector() - ms.states[pi(n)].vector()).cwiseAbs().maxCoeff();
    rep.require(d <= kUnitTol, "permutation action fails on the maximal set", d,
                "n=" + std::to_string(n));
    if (!rep.pass) break;
  }
  return rep;
}

/// P4, compound permutability: the permutation must factor into two
/// sequential reversible transformations, neither the identity. This is the
/// classical-exclusion mechanism: it fails for the classical bit swap.
inline CheckReport check_p4_compound(const Theory& th, const SystemType& t,
                                     const Permutation& pi) {
  CheckReport rep;
  rep.id = "p4";
  rep.tolerances = {{"action", kUnitTol}, {"identity_distance", 1e-6}, {"composition", 1e-10}};
  MaximalSet ms = th.maximal_set(t);
  auto witness = th.compound_permutation_witness(t, ms, pi);
  if (!witness) {
    rep.fail("no compound factorization exists (search exhausted)");
    return rep;
  }
  const auto& [r1, r2] = *witness;
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(t.K, t.K);
  double d1 = (r1.matrix() - eye).cwiseAbs().maxCoeff();
  double d2 = (r2.matrix() - eye).cwiseAbs().maxCoeff();
  rep.require(d1 > 1e-6 && d2 > 1e-6, "a factor collapses to the identity", std::min(d1, d2));

  // both factors reversible (invertible with well-conditioned inverse)
  Eigen::FullPivLU<Eigen::MatrixXd> lu1(Eigen::MatrixXd(r1.matrix()));
  Eigen::FullPivLU<Eigen::MatrixXd> lu2(Eigen::MatrixXd(r2.matrix()));
  rep.require(lu1.isInvertible() && lu2.isInvertible(), "a factor is not reversible");
  if (rep.pass) {
    double inv = std::max(
        (lu1.inverse() * r1.matrix() - eye).cwiseAbs().maxCoeff(),
        (lu2.inverse() * r2.matrix() - eye).cwiseAbs().maxCoeff());
    rep.require(inv <= 1e-9, "factor inverse is ill-conditioned", inv);
  }

  // the composition effects pi on the maximal set
  Eigen::MatrixXd total = r2.matrix() * r1.matrix();
  for (int n = 0; n < pi.size() && rep.pass; ++n) {
    double d = (total * ms.states[n].vector() - ms.states[pi(n)].vector()).cwiseAbs().maxCoeff();
    rep.require(d <= kUnitTol, "compound action fails on the maximal set", d);
  }

  // against the theory's own single-step transform when it exists
  try {
    GptTensor direct = th.permutation_transform(t, ms, pi);
    double comp = (total - direct.matrix()).cwiseAbs().maxCoeff();
    rep.require(comp <= 1e-10, "composition differs from the direct transform", comp);
  } catch (const UnsupportedTheory&) {
  }
  return rep;
}

/// P5, sturdiness: the given filter must hold the face pointwise, block the
/// complement face, and keep every non-flat battery set non-flat (rank
/// preserved); pure in-face states must stay pure up to normalization.
/// Filter-axiom violations are recorded in the report (with the offending
/// clause) so that deliberately flattening maps still reach the rank check.
inline CheckReport check_p5(const Theory& th, const InformationalFace& face,
                            const GptTensor& filter, std::uint64_t seed) {
  CheckReport rep;
  rep.id = "p5";
  rep.seed = seed;
  rep.tolerances = {{"face", kUnitTol}, {"rank", 0.0}};
  Rng rng(seed);
  const SystemType& t = face.type;
  if (filter.in_rank() != 1 || filter.out_rank() != 1 || filter.in_type(0).K != t.K ||
      filter.out_type(0).K != t.K)
    throw NotAFilter("transformation signature does not match the face's type");

  auto apply = [&](const GptTensor& s) {
    Eigen::VectorXd v = filter.matrix() * s.vector();
    return GptTensor::state(t, std::vector<double>(v.data(), v.data() + v.size()));
  };

  // filter axioms
  for (const auto& s : face.span_basis) {
    double d = (apply(s).vector() - s.vector()).cwiseAbs().maxCoeff();
    if (d > kUnitTol) {
      rep.fail("not a filter: face state altered", d, witness_vector(s));
      break;
    }
  }
  std::vector<GptTensor> blocked;
  if (!face.complement.empty()) {
    blocked = th.face_span(t, face.parent, face.complement);
    for (const auto& s : blocked) {
      double d = apply(s).max_abs();
      if (d > kUnitTol) {
        rep.fail("not a filter: complement face state not mapped to the null state", d,
                 witness_vector(s));
        break;
      }
    }
  }

  // battery of non-flat sets within the face
  struct BatterySet {
    std::string label;
    std::vector<GptTensor> states;
    int rank;
  };
  std::vector<BatterySet> battery;
  battery.push_back({"face-span", face.span_basis, face.dimension});

  for (int trial = 0; trial < 6; ++trial) {
    std::vector<GptTensor> overcomplete = face.span_basis;
    for (int extra = 0; extra < 3; ++extra) {
      std::vector<double> w(face.span_basis.size());
      double sum = 0;
      for (auto& x : w) sum += (x = rng.uniform(0.0, 1.0));
      for (auto& x : w) x /= sum;
      overcomplete.push_back(convex_mix(face.span_basis, w));
    }
    battery.push_back({"overcomplete", overcomplete, numerical_rank(overcomplete)});
  }

  // spanning sets of the sub-faces (proper nonempty outcome subsets)
  const auto& oc = face.outcomes;
  if (oc.size() > 1) {
    for (std::size_t mask = 1; mask + 1 < (1u << oc.size()); ++mask) {
      std::vector<int> sub;
      for (std::size_t b = 0; b < oc.size(); ++b)
        if (mask & (1u << b)) sub.push_back(oc[b]);
      auto span = th.face_span(t, face.parent, sub);
      if (span.empty()) continue;
      battery.push_back({"sub-face", span, numerical_rank(span)});
      if (battery.size() > 24) break;  // enough evidence for large faces
    }
  }

  for (const auto& set : battery) {
    std::vector<GptTensor> out;
    out.reserve(set.states.size());
    for (const auto& s : set.states) out.push_back(apply(s));
    int out_rank = numerical_rank(out);
    if (out_rank != set.rank) {
      rep.fail("filter flattens a non-flat set (" + set.label + "): rank " +
                   std::to_string(set.rank) + " -> " + std::to_string(out_rank),
               std::abs(out_rank - set.rank),
               set.label + ": rank " + std::to_string(set.rank) + " -> " +
                   std::to_string(out_rank));
      break;
    }
  }

  // non-mixing corollary: pure face states stay pure up to normalization
  if (rep.pass) {
    for (const auto& s : face.span_basis) {
      bool pure_in = false;
      try {
        pure_in = th.is_pure(t, s);
      } catch (const NotAState&) {
        continue;
      }
      if (!pure_in) continue;
      GptTensor out = apply(s);
      if (out.max_abs() <= 1e-12) {
        rep.fail("filter annihilates a pure face state", 0.0, witness_vector(s));
        break;
      }
      if (!th.is_pure(t, out)) {
        rep.fail("filter mixes a pure face state", 0.0, witness_vector(s));
        break;
      }
    }
  }
  rep.note("battery=" + std::to_string(battery.size()));
  return rep;
}

/// Wootters hierarchy verifier: checks K is a strictly increasing,
/// multiplicative function of N over the table and extracts the unique
/// integer exponent r with K = N^r.
struct WoottersResult {
  bool consistent = false;
  int r = 0;
  std::string witness;
};

inline WoottersResult wootters_verify(std::vector<std::pair<int, int>> table) {
  if (table.empty()) throw EmptyTable("the (N, K) table is empty");
  for (auto [n, k] : table)
    if (n < 1 || k < 1) throw SpecInvalid("table entries must be positive");

  WoottersResult res;
  std::sort(table.begin(), table.end());
  // K must be a function of N
  for (std::size_t i = 0; i + 1 < table.size(); ++i)
    if (table[i].first == table[i + 1].first && table[i].second != table[i + 1].second) {
      res.witness = "K is not a function of N: N=" + std::to_string(table[i].first);
      return res;
    }
  table.erase(std::unique(table.begin(), table.end()), table.end());
  // strictly increasing
  for (std::size_t i = 0; i + 1 < table.size(); ++i)
    if (table[i].second >= table[i + 1].second) {
      res.witness = "K is not strictly increasing between N=" +
                    std::to_string(table[i].first) + " and N=" +
                    std::to_string(table[i + 1].first);
      return res;
    }
  // multiplicative on in-table products
  for (const auto& [na, ka] : table)
    for (const auto& [nb, kb] : table)
      for (const auto& [nc, kc] : table)
        if (nc == na * nb && kc != ka * kb) {
          res.witness = "K(" + std::to_string(nc) + ") != K(" + std::to_string(na) + ")*K(" +
                        std::to_string(nb) + ")";
          return res;
        }
  // the integer exponent
  std::optional<int> r;
  for (const auto& [n, k] : table) {
    if (n == 1) {
      if (k != 1) {
        res.witness = "N=1 entry must have K=1";
        return res;
      }
      continue;
    }
    int guess = static_cast<int>(std::lround(std::log(static_cast<double>(k)) /
                                             std::log(static_cast<double>(n))));
    long long pow = 1;
    for (int i = 0; i < guess; ++i) pow *= n;
    if (guess < 1 || pow != k) {
      res.witness = "no integer r with K=N^r at (N=" + std::to_string(n) +
                    ", K=" + std::to_string(k) + ")";
      return res;
    }
    if (r && *r != guess) {
      res.witness = "conflicting exponents r=" + std::to_string(*r) + " and r=" +
                    std::to_string(guess);
      return res;
    }
    r = guess;
  }
  if (!r) {
    res.witness = "table pins no exponent (all N=1)";
    return res;
  }
  res.consistent = true;
  res.r = *r;
  return res;
}

inline CheckReport wootters_report(const std::vector<std::pair<int, int>>& table) {
  CheckReport rep;
  rep.id = "wootters";
  WoottersResult res = wootters_verify(table);
  if (res.consistent) {
    rep.note("r=" + std::to_string(res.r));
  } else {
    rep.fail(res.witness.empty() ? "inconsistent table" : res.witness, 0.0, res.witness);
  }
  return rep;
}

}  // namespace gptc
