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

#include "gptc/fragment.hpp"
#include "gptc/notation.hpp"
#include "support.hpp"

using namespace gptc;

namespace {

OperationInstance box(const std::string& name, std::vector<std::string> ins,
                      std::vector<std::string> outs) {
  OperationInstance op;
  op.name = name;
  op.inputs = std::move(ins);
  op.outputs = std::move(outs);
  return op;
}

}  // namespace

TEST_CASE("connect enforces the wiring rules", "[fragment]") {
  // A_{a a b}^{b c}  and  B_{a b}^{d c}, as in the two-box wiring example
  Fragment f = Fragment::compose(Fragment::single(box("A", {"a", "a", "b"}, {"b", "c"})),
                                 Fragment::single(box("B", {"a", "b"}, {"d", "c"})));

  SECTION("wiring b-output into b-input gives one internal wire") {
    Fragment wired = f.connect({0, 0}, {1, 1});
    REQUIRE(wired.wires().size() == 1);
    REQUIRE(wired.open_inputs().size() == 4);
    REQUIRE(wired.open_outputs().size() == 3);
    wired.validate();
  }

  SECTION("one-wire rule") {
    Fragment wired = f.connect({0, 0}, {1, 1});
    Fragment extra = wired.with_op(box("C", {"b"}, {}));
    REQUIRE_THROWS_AS(extra.connect({0, 0}, {2, 0}), PortOccupied);
  }

  SECTION("type matching") {
    REQUIRE_THROWS_AS(f.connect({0, 1}, {1, 0}), TypeMismatch);  // c output, a input
  }

  SECTION("no closed loops") {
    // A -> B, then B -> A on the remaining compatible ports
    Fragment once = f.connect({0, 0}, {1, 1});  // A.b -> B.b
    // B's d output cannot reach A (no d input), so use a fresh pair
    Fragment g = Fragment::compose(Fragment::single(box("X", {"a"}, {"a"})),
                                   Fragment::single(box("Y", {"a"}, {"a"})));
    Fragment xy = g.connect({0, 0}, {1, 0});
    REQUIRE_THROWS_AS(xy.connect({1, 0}, {0, 0}), WouldCreateCycle);
    REQUIRE(once.wires().size() == 1);
  }

  SECTION("self-loop is a cycle") {
    Fragment s = Fragment::single(box("S", {"a"}, {"a"}));
    REQUIRE_THROWS_AS(s.connect({0, 0}, {0, 0}), WouldCreateCycle);
  }
}

TEST_CASE("classification by open ports", "[fragment]") {
  SECTION("only outputs is a preparation") {
    Fragment f = Fragment::single(box("A", {}, {"a", "b", "a"}));
    REQUIRE(f.classify() == Classification::Preparation);
  }
  SECTION("only inputs is a result") {
    Fragment f = Fragment::single(box("D", {"a", "c", "c"}, {}));
    REQUIRE(f.classify() == Classification::Result);
  }
  SECTION("both kinds of open port is a transformation") {
    Fragment f = Fragment::single(box("B", {"a", "c"}, {"b", "b", "a"}));
    REQUIRE(f.classify() == Classification::TransformationMode);
  }
  SECTION("a chain with open ends is a transformation") {
    Fragment f = Fragment::compose(Fragment::single(box("P", {"a"}, {"a"})),
                                   Fragment::single(box("Q", {"a"}, {"a"})),
                                   {{{0, 0}, {1, 0}}});
    REQUIRE(f.classify() == Classification::TransformationMode);
  }
  SECTION("circuit H has no open ports") {
    Fragment h = parse(testsupport::kCircuitH);
    REQUIRE(h.classify() == Classification::Circuit);
    REQUIRE(h.op_count() == 5);
    REQUIRE(h.wires().size() == 7);
  }
}

TEST_CASE("compose", "[fragment]") {
  Fragment prep = Fragment::single(box("A", {}, {"a"}));
  Fragment result = Fragment::single(box("X", {"a"}, {}));

  SECTION("preparation against matching result closes to a circuit") {
    Fragment c = Fragment::compose(prep, result, {{{0, 0}, {1, 0}}});
    REQUIRE(c.classify() == Classification::Circuit);
  }
  SECTION("empty wiring gives the disjoint parallel fragment") {
    Fragment c = Fragment::compose(prep, result);
    REQUIRE(c.op_count() == 2);
    REQUIRE(c.wires().empty());
    REQUIRE(c.classify() == Classification::TransformationMode);
  }
  SECTION("composing a cycle fails") {
    Fragment fwd = Fragment::single(box("F", {"a"}, {"a"}));
    Fragment bwd = Fragment::single(box("G", {"a"}, {"a"}));
    REQUIRE_THROWS_AS(
        Fragment::compose(fwd, bwd, {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}),
        WouldCreateCycle);
  }
}

TEST_CASE("validation is idempotent on accepted fragments", "[fragment]") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Fragment f = testsupport::random_fragment(rng);
    REQUIRE_NOTHROW(f.validate());
    REQUIRE_NOTHROW(f.validate());
  }
}

TEST_CASE("fragments compare up to op reordering", "[fragment]") {
  // same diagram assembled in two insertion orders
  Fragment f1 = Fragment::compose(Fragment::single(box("A", {}, {"a"})),
                                  Fragment::single(box("B", {"a"}, {})),
                                  {{{0, 0}, {1, 0}}});
  Fragment f2 = Fragment::compose(Fragment::single(box("B", {"a"}, {})),
                                  Fragment::single(box("A", {}, {"a"})),
                                  {{{1, 0}, {0, 0}}});
  REQUIRE(f1 == f2);

  SECTION("differently wired fragments are distinct") {
    Fragment g1 = Fragment::compose(Fragment::single(box("A", {}, {"a", "a"})),
                                    Fragment::single(box("B", {"a", "a"}, {})),
                                    {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}});
    Fragment g2 = Fragment::compose(Fragment::single(box("A", {}, {"a", "a"})),
                                    Fragment::single(box("B", {"a", "a"}, {})),
                                    {{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}});
    REQUIRE(!(g1 == g2));
  }

  SECTION("structural twins with distinct consumers still canonicalize") {
    // two identical preparations feeding differently named consumers
    auto build = [&](bool swapped) {
      Fragment f;
      f = f.with_op(box("P", {}, {"a"}));
      f = f.with_op(box("P", {}, {"a"}));
      f = f.with_op(box("X", {"a"}, {}));
      f = f.with_op(box("Y", {"a"}, {}));
      f = f.connect({swapped ? 1 : 0, 0}, {2, 0});
      f = f.connect({swapped ? 0 : 1, 0}, {3, 0});
      return f;
    };
    REQUIRE(build(false) == build(true));
  }
}

TEST_CASE("classify of prep composed onto matching result is a circuit", "[fragment]") {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    int n = rng.uniform_int(1, 3);
    std::vector<std::string> types;
    for (int j = 0; j < n; ++j) types.emplace_back(1, "ab"[rng.uniform_int(0, 1)]);
    Fragment prep = Fragment::single(box("A", {}, types));
    Fragment result = Fragment::single(box("X", types, {}));
    std::vector<std::pair<PortRef, PortRef>> wiring;
    for (int j = 0; j < n; ++j) wiring.push_back({{0, j}, {1, j}});
    Fragment c = Fragment::compose(prep, result, wiring);
    REQUIRE(c.classify() == Classification::Circuit);
  }
}
