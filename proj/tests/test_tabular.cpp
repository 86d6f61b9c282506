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
#include "gptc/tabular.hpp"

using namespace gptc;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* kClassicalBit = R"({
  "name": "bit-table",
  "types": [{"label": "a", "N": 2, "K": 2}],
  "states": [
    {"type": "a", "name": "s0", "pure": true, "values": [1, 0]},
    {"type": "a", "name": "s1", "pure": true, "values": [0, 1]}
  ],
  "effects": [
    {"type": "a", "name": "e0", "values": [1, 0]},
    {"type": "a", "name": "e1", "values": [0, 1]},
    {"type": "a", "name": "unit", "unit": true, "values": [1, 1]}
  ],
  "transforms": [
    {"name": "id", "in": "a", "out": "a", "matrix": [[1, 0], [0, 1]]},
    {"name": "swap", "in": "a", "out": "a", "matrix": [[0, 1], [1, 0]]}
  ],
  "maximal_sets": [
    {"type": "a", "states": ["s0", "s1"], "effects": ["e0", "e1"]}
  ]
})";

}  // namespace

TEST_CASE("a classical bit given as a table behaves like classical_theory(2)", "[tabular]") {
  TabularTheory tab = load_tabular_theory(kClassicalBit);
  ClassicalTheory cls(2);
  SystemType at = tab.type("a");
  SystemType ac = cls.type("a");
  REQUIRE(at.N == ac.N);
  REQUIRE(at.K == ac.K);

  MaximalSet mt = tab.maximal_set(at);
  MaximalSet mc = cls.maximal_set(ac);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      REQUIRE(mt.effects[i].vector().dot(mt.states[j].vector()) ==
              Approx(mc.effects[i].vector().dot(mc.states[j].vector())).margin(1e-12));

  REQUIRE((tab.unit_effect(at).vector() - cls.unit_effect(ac).vector()).cwiseAbs().maxCoeff() <
          1e-12);
  REQUIRE(tab.is_pure(at, mt.states[0]));
  REQUIRE_FALSE(tab.is_pure(at, convex_mix({mt.states[0], mt.states[1]}, {0.5, 0.5})));

  // the listed swap acts like the classical permutation transform
  Permutation swap({1, 0});
  GptTensor pt = tab.permutation_transform(at, mt, swap);
  GptTensor pc = cls.permutation_transform(ac, mc, swap);
  REQUIRE((pt.matrix() - pc.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("loader rejects invalid tables", "[tabular]") {
  SECTION("K < N") {
    REQUIRE_THROWS_MATCHES(
        load_tabular_theory(R"({"name":"x","types":[{"label":"a","N":3,"K":2}]})"),
        SpecInvalid, Catch::Matchers::MessageMatches(ContainsSubstring("K >= N")));
  }
  SECTION("no nontrivial type") {
    REQUIRE_THROWS_AS(
        load_tabular_theory(R"({"name":"x","types":[{"label":"a","N":1,"K":1}]})"),
        SpecInvalid);
  }
  SECTION("duality violation is named") {
    const char* bad = R"({
      "name": "bad",
      "types": [{"label": "a", "N": 2, "K": 2}],
      "states": [
        {"type": "a", "name": "s0", "values": [1, 0]},
        {"type": "a", "name": "s1", "values": [0.5, 0.5]}
      ],
      "effects": [
        {"type": "a", "name": "e0", "values": [1, 0]},
        {"type": "a", "name": "e1", "values": [0, 1]}
      ],
      "maximal_sets": [{"type": "a", "states": ["s0", "s1"], "effects": ["e0", "e1"]}]
    })";
    REQUIRE_THROWS_MATCHES(load_tabular_theory(bad), SpecInvalid,
                           Catch::Matchers::MessageMatches(ContainsSubstring("duality")));
  }
  SECTION("effect bound violation") {
    const char* bad = R"({
      "name": "bad",
      "types": [{"label": "a", "N": 2, "K": 2}],
      "states": [{"type": "a", "name": "s0", "values": [2, 0]}],
      "effects": [{"type": "a", "name": "e0", "values": [1, 0]}]
    })";
    REQUIRE_THROWS_AS(load_tabular_theory(bad), SpecInvalid);
  }
  SECTION("not JSON") { REQUIRE_THROWS_AS(load_tabular_theory("not json"), SpecInvalid); }
}

TEST_CASE("the gbit square table loads", "[tabular]") {
  TabularTheory gbit = TabularTheory::from_file(std::string(GPTC_DATA_DIR) + "/gbit-square.thy");
  SystemType a = gbit.type("a");
  REQUIRE(a.N == 2);
  REQUIRE(a.K == 3);
  REQUIRE(gbit.enumerable_pure_states(a)->size() == 4);
  REQUIRE(gbit.enumerable_maximal_effects(a)->size() == 4);
  Rng rng(3);
  REQUIRE_NOTHROW(gbit.sample_pure(a, rng));

  // two distinct maximal effects reach unit probability on the (1,1) corner
  GptTensor corner = gbit.named_tensor("prep:c11", {}, {a});
  int winners = 0;
  for (const auto& e : *gbit.enumerable_maximal_effects(a))
    if (e.vector().dot(corner.vector()) >= 1.0 - 1e-9) ++winners;
  REQUIRE(winners == 2);
}

TEST_CASE("the rebit table loads and pins its composite", "[tabular]") {
  TabularTheory rebit = TabularTheory::from_file(std::string(GPTC_DATA_DIR) + "/rebit.thy");
  SystemType a = rebit.type("a");
  SystemType b = rebit.type("b");
  REQUIRE(a.K == 3);
  SystemType ab = rebit.composite(a, b);
  REQUIRE(ab.N == 4);
  REQUIRE(ab.K == 10);  // the true two-rebit dimension, not 3*3
}
