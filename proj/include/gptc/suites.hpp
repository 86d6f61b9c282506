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
#include <memory>
#include <string>
#include <vector>

#include "gptc/classical.hpp"
#include "gptc/constructions.hpp"
#include "gptc/notation.hpp"
#include "gptc/postulates.hpp"
#include "gptc/quantum.hpp"
#include "gptc/tabular.hpp"

namespace gptc {

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  int p1_samples = 500;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> suites = {
      "p1", "p2", "p3", "p4prime", "p4", "p5", "wootters", "teleport", "constructions"};
  return suites;
}

namespace detail {

inline CheckReport error_report(const std::string& id, std::uint64_t seed,
                                const std::string& what) {
  CheckReport rep;
  rep.id = id;
  rep.seed = seed;
  rep.fail("error: " + what);
  return rep;
}

template <typename Fn>
void guarded(std::vector<CheckReport>& out, const std::string& id, std::uint64_t seed, Fn&& fn) {
  try {
    fn();
  } catch (const GptError& e) {
    out.push_back(error_report(id, seed, e.what()));
  }
}

}  // namespace detail

/// Runs one named check suite against a theory, returning its reports. Check
/// errors (an unsupported construction, say) become failing reports rather
/// than aborting the run, so expectation manifests can assert on them.
inline std::vector<CheckReport> run_suite(const Theory& th, const std::string& suite,
                                          const SuiteOptions& opt = {}) {
  std::vector<CheckReport> out;
  const std::uint64_t seed = opt.seed;
  auto stamp = [&](CheckReport rep) {
    rep.seed = seed;
    out.push_back(std::move(rep));
  };

  if (suite == "all") {
    for (const std::string& s : known_suites()) {
      auto reports = run_suite(th, s, opt);
      out.insert(out.end(), reports.begin(), reports.end());
    }
    std::sort(out.begin(), out.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.id < b.id; });
    return out;
  }

  if (suite == "p1") {
    detail::guarded(out, "p1", seed,
                    [&] { stamp(check_p1(th, th.type("a"), opt.p1_samples, seed)); });
  } else if (suite == "p2") {
    detail::guarded(out, "p2", seed, [&] { stamp(check_p2(th, th.type("a"), th.type("b"))); });
  } else if (suite == "p3") {
    detail::guarded(out, "p3", seed, [&] { stamp(check_p3(th, th.type("a"), th.type("b"))); });
  } else if (suite == "p4prime") {
    detail::guarded(out, "p4prime", seed, [&] {
      stamp(check_p4prime(th, th.type("a"), Permutation::cycle(th.type("a").N)));
    });
  } else if (suite == "p4") {
    detail::guarded(out, "p4", seed, [&] {
      stamp(check_p4_compound(th, th.type("a"), Permutation::cycle(th.type("a").N)));
    });
  } else if (suite == "p5") {
    detail::guarded(out, "p5", seed, [&] {
      SystemType a = th.type("a");
      MaximalSet ms = th.maximal_set(a);
      std::vector<int> outcomes = a.N < 3 ? std::vector<int>{0} : std::vector<int>{0, 1};
      InformationalFace face = build_face(th, a, ms, outcomes);
      stamp(check_p5(th, face, th.direct_filter(a, ms, outcomes), seed));
    });
  } else if (suite == "wootters") {
    detail::guarded(out, "wootters", seed, [&] {
      SystemType a = th.type("a");
      SystemType aa = th.composite(a, a);
      SystemType aaa = th.composite(aa, a);
      stamp(wootters_report({{a.N, a.K}, {aa.N, aa.K}, {aaa.N, aaa.K}}));
    });
  } else if (suite == "teleport") {
    detail::guarded(out, "teleport", seed, [&] { stamp(run_teleportation_suite(th).report); });
  } else if (suite == "constructions") {
    detail::guarded(out, "constructions.reversible", seed, [&] {
      Rng rng(seed);
      SystemType a = th.type("a");
      stamp(build_reversible_between_pure(th, a, th.maximal_set(a),
                                          th.random_maximal_set(a, rng))
                .report);
    });
    detail::guarded(out, "constructions.filter", seed, [&] {
      SystemType a = th.type("a");
      MaximalSet ms = th.maximal_set(a);
      std::vector<int> outcomes = a.N < 3 ? std::vector<int>{0} : std::vector<int>{0, 1};
      stamp(build_filter(th, build_face(th, a, ms, outcomes)).report);
    });
    detail::guarded(out, "constructions.substitute", seed, [&] {
      Rng rng(seed + 1);
      SystemType a = th.type("a");
      Fragment circuit = parse("S^{a1} R_{a1}");
      MaximalSet ms = th.maximal_set(a);
      std::vector<Binding> bindings;
      for (int i = 0; i < 3; ++i) {
        Binding b;
        b.emplace("S", th.sample_pure(a, rng));
        b.emplace("R", ms.effects[rng.uniform_int(0, a.N - 1)]);
        bindings.push_back(std::move(b));
      }
      SystemType target = [&] {
        try {
          return detail::find_ancilla(th, a);
        } catch (const AncillaUnavailable&) {
          return a;
        }
      }();
      stamp(substitute_system(th, circuit, 0, target, bindings).report);
    });
  } else {
    throw UnknownSuite("unknown suite '" + suite + "'");
  }
  return out;
}

/// Theory selector used by the CLI: classical:N | quantum:N | tabular:path.
inline std::unique_ptr<Theory> make_theory(const std::string& selector) {
  auto colon = selector.find(':');
  if (colon == std::string::npos)
    throw GptError("theory selector must be classical:N, quantum:N, or tabular:<path>");
  std::string kind = selector.substr(0, colon);
  std::string arg = selector.substr(colon + 1);
  if (kind == "classical") return std::make_unique<ClassicalTheory>(std::stoi(arg));
  if (kind == "quantum") return std::make_unique<QuantumTheory>(std::stoi(arg));
  if (kind == "tabular") return std::make_unique<TabularTheory>(TabularTheory::from_file(arg));
  throw GptError("unknown theory kind '" + kind + "'");
}

}  // namespace gptc
