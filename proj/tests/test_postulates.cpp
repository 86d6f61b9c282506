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
#include "gptc/postulates.hpp"
#include "gptc/quantum.hpp"
#include "gptc/tabular.hpp"

using namespace gptc;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("P1 logical sharpness", "[postulates][p1]") {
  SECTION("classical theories pass exactly") {
    ClassicalTheory th(3);
    CheckReport rep = check_p1(th, th.type("a"), 100, 7);
    REQUIRE(rep.pass);
    REQUIRE(rep.residual < 1e-12);
  }
  SECTION("quantum qubit passes the sampled rigidity probes") {
    QuantumTheory th(2);
    CheckReport rep = check_p1(th, th.type("a"), 100, 7);
    REQUIRE(rep.pass);
  }
  SECTION("the square gbit fails with a two-effect witness") {
    TabularTheory gbit =
        TabularTheory::from_file(std::string(GPTC_DATA_DIR) + "/gbit-square.thy");
    CheckReport rep = check_p1(gbit, gbit.type("a"), 100, 7);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(!rep.witness.empty());
    REQUIRE_THAT(rep.notes, ContainsSubstring("maximal effects"));
  }
}

TEST_CASE("P2 information locality", "[postulates][p2]") {
  SECTION("die and coin compose to N_ab = 12") {
    ClassicalTheory th(std::map<std::string, int>{{"a", 6}, {"b", 2}});
    CheckReport rep = check_p2(th, th.type("a"), th.type("b"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("N_ab=12"));
  }
  SECTION("qubit pair: product states pairwise distinguishable") {
    QuantumTheory th(2);
    CheckReport rep = check_p2(th, th.type("a"), th.type("b"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("N_ab=4"));
  }
  SECTION("trivial system is absorbed") {
    ClassicalTheory th(std::map<std::string, int>{{"a", 1}, {"b", 5}});
    CheckReport rep = check_p2(th, th.type("a"), th.type("b"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("N_ab=5"));
  }
}

TEST_CASE("P3 tomographic locality", "[postulates][p3]") {
  SECTION("qubit pair: rank 16") {
    QuantumTheory th(2);
    CheckReport rep = check_p3(th, th.type("a"), th.type("b"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("rank=16"));
  }
  SECTION("classical composite") {
    ClassicalTheory th(std::map<std::string, int>{{"a", 3}, {"b", 4}});
    CheckReport rep = check_p3(th, th.type("a"), th.type("b"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("rank=12"));
  }
  SECTION("the rebit table fails tomographic locality") {
    TabularTheory rebit = TabularTheory::from_file(std::string(GPTC_DATA_DIR) + "/rebit.thy");
    CheckReport rep = check_p3(rebit, rebit.type("a"), rebit.type("b"));
    REQUIRE_FALSE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("K_ab"));
  }
}

TEST_CASE("P4' permutability", "[postulates][p4prime]") {
  SECTION("classical 4-cycle") {
    ClassicalTheory th(4);
    CheckReport rep = check_p4prime(th, th.type("a"), Permutation::cycle(4));
    REQUIRE(rep.pass);
  }
  SECTION("qubit swap via the bit-flip unitary") {
    QuantumTheory th(2);
    CheckReport rep = check_p4prime(th, th.type("a"), Permutation({1, 0}));
    REQUIRE(rep.pass);
  }
  SECTION("identity permutation gives the identity transform") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    GptTensor id = th.permutation_transform(a, th.maximal_set(a), Permutation::identity(3));
    REQUIRE((id.matrix() - Eigen::MatrixXd::Identity(a.K, a.K)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(check_p4prime(th, a, Permutation::identity(3)).pass);
  }
}

TEST_CASE("P4 compound permutability excludes the classical bit", "[postulates][p4]") {
  SECTION("classical N=2 swap cannot factor") {
    ClassicalTheory th(2);
    CheckReport rep = check_p4_compound(th, th.type("a"), Permutation({1, 0}));
    REQUIRE_FALSE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("no compound factorization"));
  }
  SECTION("quantum N=2 swap factors through the square root of the flip") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    CheckReport rep = check_p4_compound(th, a, Permutation({1, 0}));
    REQUIRE(rep.pass);
    // the witness squares to the bit-flip channel itself
    auto w = th.compound_permutation_witness(a, th.maximal_set(a), Permutation({1, 0}));
    REQUIRE(w.has_value());
    GptTensor direct = th.permutation_transform(a, th.maximal_set(a), Permutation({1, 0}));
    double d = (w->second.matrix() * w->first.matrix() - direct.matrix()).cwiseAbs().maxCoeff();
    REQUIRE(d < 1e-10);
  }
  SECTION("classical 3-cycle factors into two transpositions") {
    ClassicalTheory th(3);
    CheckReport rep = check_p4_compound(th, th.type("a"), Permutation::cycle(3));
    REQUIRE(rep.pass);
  }
  SECTION("identity on the classical bit factors as swap twice") {
    ClassicalTheory th(2);
    CheckReport rep = check_p4_compound(th, th.type("a"), Permutation::identity(2));
    REQUIRE(rep.pass);
  }
}

TEST_CASE("P5 sturdiness", "[postulates][p5]") {
  SECTION("the qutrit projector filter is non-flattening") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    MaximalSet ms = th.maximal_set(a);
    InformationalFace face = build_face(th, a, ms, {0, 1});
    CheckReport rep = check_p5(th, face, th.direct_filter(a, ms, {0, 1}), 11);
    REQUIRE(rep.pass);
  }
  SECTION("the classical 0/1 diagonal filter passes") {
    ClassicalTheory th(4);
    SystemType a = th.type("a");
    MaximalSet ms = th.maximal_set(a);
    InformationalFace face = build_face(th, a, ms, {0, 1, 2});
    CheckReport rep = check_p5(th, face, th.direct_filter(a, ms, {0, 1, 2}), 11);
    REQUIRE(rep.pass);
  }
  SECTION("a deliberately flattening map fails with a rank witness") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    MaximalSet ms = th.maximal_set(a);
    InformationalFace face = build_face(th, a, ms, {0, 1});
    // project the whole face onto the ray of its first basis state
    Eigen::MatrixXd flat =
        ms.states[0].vector() * th.distinguishing_effect(a, ms.states[0]).vector().transpose();
    GptTensor flattening = GptTensor::transformation({a}, {a}, flat);
    CheckReport rep = check_p5(th, face, flattening, 11);
    REQUIRE_FALSE(rep.pass);
    REQUIRE_THAT(rep.notes, ContainsSubstring("flattens"));
    REQUIRE_THAT(rep.witness + rep.notes, ContainsSubstring("rank"));
  }
  SECTION("wrong signature is not a filter") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1});
    GptTensor wrong = GptTensor::transformation({SystemType{"a", 2, 4}}, {SystemType{"a", 2, 4}},
                                                Eigen::MatrixXd::Identity(4, 4));
    REQUIRE_THROWS_AS(check_p5(th, face, wrong, 1), NotAFilter);
  }
}

TEST_CASE("Wootters hierarchy verifier", "[postulates][wootters]") {
  SECTION("quantum exponent") {
    WoottersResult res = wootters_verify({{2, 4}, {3, 9}, {4, 16}});
    REQUIRE(res.consistent);
    REQUIRE(res.r == 2);
  }
  SECTION("classical exponent") {
    WoottersResult res = wootters_verify({{2, 2}, {3, 3}, {6, 6}});
    REQUIRE(res.consistent);
    REQUIRE(res.r == 1);
  }
  SECTION("no integer exponent") {
    WoottersResult res = wootters_verify({{2, 3}});
    REQUIRE_FALSE(res.consistent);
    REQUIRE_THAT(res.witness, ContainsSubstring("no integer r"));
  }
  SECTION("multiplicativity violations are caught") {
    WoottersResult res = wootters_verify({{2, 4}, {3, 9}, {6, 30}});
    REQUIRE_FALSE(res.consistent);
  }
  SECTION("monotonicity violations are caught") {
    WoottersResult res = wootters_verify({{2, 9}, {3, 4}});
    REQUIRE_FALSE(res.consistent);
  }
  SECTION("empty table errors") { REQUIRE_THROWS_AS(wootters_verify({}), EmptyTable); }
}

TEST_CASE("check reports are reproducible per seed", "[postulates]") {
  QuantumTheory th(2);
  SystemType a = th.type("a");
  CheckReport r1 = check_p1(th, a, 50, 99);
  CheckReport r2 = check_p1(th, a, 50, 99);
  REQUIRE(r1.to_record().dump() == r2.to_record().dump());
  CheckReport r3 = check_p1(th, a, 50, 100);
  REQUIRE(r3.seed != r1.seed);
}
