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
#include "gptc/faces.hpp"
#include "gptc/quantum.hpp"

using namespace gptc;

TEST_CASE("face construction", "[faces]") {
  SECTION("single-outcome qubit face is the pure ray") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0});
    REQUIRE(face.dimension == 1);
    REQUIRE(face.span_basis.size() == 1);
    REQUIRE(th.is_pure(a, face.span_basis[0]));
  }
  SECTION("qutrit face on two outcomes spans the 2x2 block") {
    QuantumTheory th(3);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1});
    REQUIRE(face.dimension == 4);
    for (const auto& s : face.span_basis)
      REQUIRE(std::abs(face.hyperplane.vector().dot(s.vector())) < 1e-9);
  }
  SECTION("classical die face on three outcomes has dimension 3") {
    ClassicalTheory th(6);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1, 2});
    REQUIRE(face.dimension == 3);
  }
  SECTION("full-outcome face covers the whole space") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1});
    REQUIRE(face.dimension == 4);
    REQUIRE(face.complement.empty());
    REQUIRE(face.hyperplane.max_abs() == 0.0);
  }
  SECTION("empty outcome set is rejected") {
    QuantumTheory th(2);
    SystemType a = th.type("a");
    REQUIRE_THROWS_AS(build_face(th, a, th.maximal_set(a), {}), EmptyOutcomeSet);
    REQUIRE_THROWS_AS(build_face(th, a, th.maximal_set(a), {7}), EmptyOutcomeSet);
  }
}

TEST_CASE("non-flat detection", "[faces]") {
  QuantumTheory th(3);
  SystemType a = th.type("a");
  InformationalFace face = build_face(th, a, th.maximal_set(a), {0, 1});

  SECTION("the spanning basis is non-flat") {
    REQUIRE(is_non_flat(face.span_basis, face));
  }
  SECTION("a single pure state spans its own 1-dimensional face") {
    InformationalFace ray = build_face(th, a, th.maximal_set(a), {0});
    REQUIRE(is_non_flat(ray.span_basis, ray));
  }
  SECTION("two parallel states inside the 4-dimensional face are flat") {
    std::vector<GptTensor> two = {face.span_basis[0],
                                  convex_mix({face.span_basis[0]}, {0.5})};
    REQUIRE_FALSE(is_non_flat(two, face));
  }
  SECTION("states outside the face are rejected") {
    GptTensor outside = th.maximal_set(a).states[2];
    REQUIRE_THROWS_AS(is_non_flat(std::vector<GptTensor>{outside}, face), NotInFace);
  }
  SECTION("rank is invariant under invertible recombination") {
    Rng rng(77);
    std::vector<GptTensor> mixed;
    // random convex recombinations of the basis with full weight matrix rank
    for (std::size_t i = 0; i < face.span_basis.size(); ++i) {
      std::vector<double> w(face.span_basis.size());
      double sum = 0;
      for (auto& x : w) sum += (x = rng.uniform(0.05, 1.0));
      for (auto& x : w) x /= sum;
      w[i] = w[i] + 0.5;  // diagonal dominance keeps the recombination invertible
      double s2 = 0;
      for (auto& x : w) s2 += x;
      for (auto& x : w) x /= s2;
      mixed.push_back(convex_mix(face.span_basis, w));
    }
    REQUIRE(numerical_rank(mixed) == face.dimension);
    REQUIRE(is_non_flat(mixed, face));
  }
}
