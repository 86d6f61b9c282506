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

#include <catch2/catch_amalgamated.hpp>

#include "gptc/classical.hpp"
#include "gptc/constructions.hpp"
#include "gptc/notation.hpp"

using namespace gptc;
using Catch::Approx;

TEST_CASE("reversible transformation between pure states", "[constructions]") {
  SECTION("z basis to x basis acts as the Hadamard channel") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    MaximalSet z = th.maximal_set(a);
    CMat h(2, 2);
    double s = 1 / std::sqrt(2.0);
    h << s, s, s, -s;
    MaximalSet x = [&] {
      MaximalSet ms;
      ms.type = a;
      for (int n = 0; n < 2; ++n) {
        CMat p = h.col(n) * h.col(n).adjoint();
        ms.states.push_back(th.embed_state({a}, p));
        ms.effects.push_back(th.embed_effect({a}, p));
      }
      return ms;
    }();
    auto [transform, rep] = build_reversible_between_pure(th, a, z, x);
    REQUIRE(rep.pass);
    GptTensor hadamard = th.embed_channel({a}, {a}, {h});
    REQUIRE((transform.matrix() - hadamard.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
  SECTION("identical sets give the identity") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    MaximalSet z = th.maximal_set(a);
    auto [transform, rep] = build_reversible_between_pure(th, a, z, z);
    REQUIRE(rep.pass);
    REQUIRE((transform.matrix() - Eigen::MatrixXd::Identity(a.K, a.K)).cwiseAbs().maxCoeff() <
            1e-9);
  }
  SECTION("classical relabeling yields a permutation matrix") {
    ClassicalTheory th(3);
    SystemType a = th.type("a");
    MaximalSet u = th.maximal_set(a);
    Rng rng(5);
    MaximalSet v = th.random_maximal_set(a, rng);
    auto [transform, rep] = build_reversible_between_pure(th, a, u, v);
    REQUIRE(rep.pass);
    Eigen::MatrixXd m = transform.matrix();
    for (int i = 0; i < m.rows(); ++i) {
      REQUIRE(m.row(i).sum() == Approx(1.0).margin(1e-9));
      for (int j = 0; j < m.cols(); ++j)
        REQUIRE((std::abs(m(i, j)) < 1e-9 || std::abs(m(i, j) - 1) < 1e-9));
    }
  }
  SECTION("random bases map to each other (quantum)") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      MaximalSet u = th.random_maximal_set(a, rng);
      MaximalSet v = th.random_maximal_set(a, rng);
      auto [transform, rep] = build_reversible_between_pure(th, a, u, v);
      REQUIRE(rep.pass);
    }
  }
}

TEST_CASE("filter construction", "[constructions]") {
  SECTION("qutrit face {0,1} matches the projector filter") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    MaximalSet ms = th.maximal_set(a);
    InformationalFace face = build_face(th, a, ms, {0, 1});
    auto [filter, rep] = build_filter(th, face);
    REQUIRE(rep.pass);
    GptTensor direct = th.direct_filter(a, ms, {0, 1});
    REQUIRE((filter.matrix() - direct.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
  SECTION("full face gives the identity transformation") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1});
    auto [filter, rep] = build_filter(th, face);
    REQUIRE(rep.pass);
    REQUIRE((filter.matrix() - Eigen::MatrixXd::Identity(a.K, a.K)).cwiseAbs().maxCoeff() <
            1e-9);
  }
  SECTION("classical face gives the 0/1 diagonal") {
    ClassicalTheory th(4);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 2});
    auto [filter, rep] = build_filter(th, face);
    REQUIRE(rep.pass);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    expect(0, 0) = expect(2, 2) = 1;
    REQUIRE((filter.matrix() - expect).cwiseAbs().maxCoeff() < 1e-9);
  }
  SECTION("n1 must lie in the outcome set") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1});
    REQUIRE_THROWS_AS(build_filter(th, face, 2), BadOutcomeIndex);
  }
}

TEST_CASE("system substitution leaves probabilities unchanged", "[constructions]") {
  QuantumTheory th(2);
  SystemType a = th.type("a");
  Fragment circuit = parse("S^{a1} R_{a1}");

  std::vector<Binding> bindings;
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    Binding b;
    b.emplace("S", th.embed_state({a}, detail::projector(QuantumTheory::gaussian_ket(2, rng))));
    CMat basis = QuantumTheory::haar_unitary(2, rng);
    b.emplace("R", th.embed_effect({a}, detail::projector(CVec(basis.col(0)))));
    bindings.push_back(std::move(b));
  }

  SECTION("onto a distinct equal-N type") {
    auto res = substitute_system(th, circuit, 0, th.type("b"), bindings);
    REQUIRE(res.report.pass);
    REQUIRE(res.circuit.op_count() == circuit.op_count() + 6);
    REQUIRE(res.circuit.classify() == Classification::Circuit);
  }
  SECTION("onto the same type") {
    auto res = substitute_system(th, circuit, 0, a, bindings);
    REQUIRE(res.report.pass);
  }
  SECTION("unequal N is rejected") {
    QuantumTheory mixed(std::map<std::string, int>{{"a", 2}, {"c", 3}});
    Fragment c2 = parse("S^{a1} R_{a1}");
    Binding b;
    b.emplace("S", mixed.named_tensor("prep:z+", {}, {mixed.type("a")}));
    b.emplace("R", mixed.named_tensor("effect:z+", {mixed.type("a")}, {}));
    REQUIRE_THROWS_AS(substitute_system(mixed, c2, 0, mixed.type("c"), {b}), NMismatch);
  }
}

TEST_CASE("teleportation suite", "[constructions][teleport]") {
  SECTION("the quantum gebit yields the 1/8 identity and the saturated bound") {
    QuantumTheory th(2);
    TeleportationReport rep = run_teleportation_suite(th);
    REQUIRE(rep.report.pass);
    REQUIRE(rep.factor == Approx(0.125).margin(1e-9));
    REQUIRE(rep.identity_residual < 1e-9);
    REQUIRE(rep.trace_value == Approx(0.5).margin(1e-9));
    REQUIRE(rep.closed_loop_probability == Approx(0.5).margin(1e-9));
    REQUIRE(rep.closed_loop_probability <= 0.5 + 1e-9);
    REQUIRE(rep.implied_k_bound == Approx(4.0).margin(1e-6));
  }
  SECTION("classical theories cannot run it") {
    ClassicalTheory th(2);
    REQUIRE_THROWS_AS(run_teleportation_suite(th), ConstructionUnavailable);
  }
  SECTION("it needs the gebit") {
    QuantumTheory th(3);
    REQUIRE_THROWS_AS(run_teleportation_suite(th), ConstructionUnavailable);
  }
}
