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
#include <map>
#include <string>

#include "gptc/notation.hpp"
#include "support.hpp"

using namespace gptc;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("parse of the two-box wiring example", "[notation]") {
  Fragment f = parse(testsupport::kWiresAB);
  REQUIRE(f.op_count() == 2);
  REQUIRE(f.wires().size() == 1);  // the repeated 4 on b4
  REQUIRE(f.open_inputs().size() == 4);
  REQUIRE(f.open_outputs().size() == 3);
  const Wire& w = f.wires()[0];
  REQUIRE(f.output_label(w.from) == "b");
}

TEST_CASE("parse of circuit H", "[notation]") {
  Fragment h = parse(testsupport::kCircuitH);
  REQUIRE(h.op_count() == 5);
  REQUIRE(h.wires().size() == 7);
  REQUIRE(h.open_inputs().empty());
  REQUIRE(h.open_outputs().empty());
  REQUIRE(h.classify() == Classification::Circuit);
}

TEST_CASE("parse of fragment E", "[notation]") {
  Fragment e = parse(testsupport::kFragmentE);
  REQUIRE(e.op_count() == 4);
  REQUIRE(e.wires().size() == 6);
  REQUIRE(e.open_inputs().size() == 6);
  REQUIRE(e.open_outputs().size() == 4);
  // B appears twice with different wiring: instances, not one apparatus
  int b_count = 0;
  for (int i = 0; i < e.op_count(); ++i)
    if (e.op(i).name == "B") ++b_count;
  REQUIRE(b_count == 2);
}

TEST_CASE("parse rejects malformed documents", "[notation]") {
  SECTION("duplicate role") {
    REQUIRE_THROWS_AS(parse("A^{a1} B_{b1}^{a1}"), DuplicateIndexRole);
    REQUIRE_THROWS_AS(parse("A_{a1} B_{a1}"), DuplicateIndexRole);
  }
  SECTION("type letter mismatch") {
    REQUIRE_THROWS_AS(parse("A^{a1} B_{b1}"), TypeLetterMismatch);
  }
  SECTION("cycle") {
    REQUIRE_THROWS_AS(parse("A_{b2}^{a1} B_{a1}^{b2}"), CycleError);
    REQUIRE_THROWS_AS(parse("A_{a1}^{a1}"), CycleError);
  }
  SECTION("syntax errors carry positions") {
    try {
      parse("A^{a1}\nB^{!}");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      REQUIRE(e.line == 2);
      REQUIRE_THAT(e.what(), ContainsSubstring("line 2"));
    }
  }
  SECTION("empty document") {
    REQUIRE_THROWS_AS(parse(""), SyntaxError);
    REQUIRE_THROWS_AS(parse("   # only a comment\n"), SyntaxError);
  }
  SECTION("missing integer") { REQUIRE_THROWS_AS(parse("A^{a}"), SyntaxError); }
  SECTION("unterminated block") { REQUIRE_THROWS_AS(parse("A^{a1"), SyntaxError); }
}

TEST_CASE("type declarations resolve N", "[notation]") {
  Fragment f = parse("type a : N=2\ntype b : N=3\nA^{a1 b2}");
  REQUIRE(f.declared_N().at("a") == 2);
  REQUIRE(f.declared_N().at("b") == 3);
  REQUIRE_THROWS_AS(parse("type a : N=2\ntype a : N=3\nA^{a1}"), SyntaxError);
}

TEST_CASE("render emits a canonical reparseable form", "[notation]") {
  SECTION("single preparation box gets fresh integers") {
    Fragment f = parse("Q^{a7 b9 a4}");
    std::string text = render(f);
    REQUIRE_THAT(text, ContainsSubstring("Q^{a1 b2 a3}"));
  }
  SECTION("fragment E round-trips") {
    Fragment e = parse(testsupport::kFragmentE);
    Fragment again = parse(render(e));
    REQUIRE(again.op_count() == 4);
    REQUIRE(again.wires().size() == 6);
    REQUIRE(e == again);
  }
  SECTION("circuit H round-trips") {
    Fragment h = parse(testsupport::kCircuitH);
    REQUIRE(parse(render(h)) == h);
  }
}

TEST_CASE("round-trip holds for random fragments", "[notation][property]") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Fragment f = testsupport::random_fragment(rng);
    Fragment back = parse(render(f));
    REQUIRE(back == f);
  }
}

TEST_CASE("integer relabeling yields an isomorphic fragment", "[notation][property]") {
  // relabel the integers of circuit H by an order-scrambling map
  std::string h = testsupport::kCircuitH;
  std::map<char, std::string> relabel{{'1', "11"}, {'2', "29"}, {'3', "3"}, {'4', "47"},
                                      {'5', "50"}, {'6', "66"}, {'7', "78"}};
  std::string scrambled;
  for (char c : h)
    scrambled += (relabel.count(c) ? relabel[c] : std::string(1, c));
  REQUIRE(parse(scrambled) == parse(h));
}

TEST_CASE("random byte strings never crash the parser", "[notation][fuzz]") {
  Rng rng(13);
  for (int i = 0; i < 2000; ++i) {
    std::string junk;
    int len = rng.uniform_int(0, 40);
    for (int j = 0; j < len; ++j) junk += static_cast<char>(rng.uniform_int(1, 255));
    try {
      Fragment f = parse(junk);
      f.validate();  // anything accepted must be valid
    } catch (const GptError&) {
      // fine: structured rejection, not a crash
    }
  }
}
