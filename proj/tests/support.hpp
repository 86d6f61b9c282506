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

#include <string>
#include <vector>

#include "gptc/fragment.hpp"
#include "gptc/rng.hpp"

namespace gptc::testsupport {

// Paper displays, ASCII form.
inline const char* kFragmentE =
    "A^{c1 b2 d3}_{b15 c16} B_{c4 a5 c1}^{b6 a7} "
    "C_{a7 b2 d3 b8}^{a9 c10 d11} B_{c12 a9 c10}^{b13 a14}";
inline const char* kCircuitH =
    "A^{a1 a2 b3} B^{a4 c7} C_{a1}^{d5} D_{b3 a4}^{c6} E_{d5 a2 c6 c7}";
inline const char* kWiresAB = "A_{a1 a2 b3}^{b4 c5} B_{a6 b4}^{d7 c8}";

/// Random valid fragment: a handful of ops with ports over a small letter
/// alphabet, wired greedily without breaking the three wiring rules.
inline Fragment random_fragment(Rng& rng, int max_ops = 6) {
  const std::string letters = "ab";
  int n_ops = rng.uniform_int(1, max_ops);
  Fragment f;
  for (int i = 0; i < n_ops; ++i) {
    OperationInstance op;
    op.name = std::string(1, static_cast<char>('A' + rng.uniform_int(0, 3)));
    int n_in = rng.uniform_int(0, 2), n_out = rng.uniform_int(0, 2);
    for (int p = 0; p < n_in; ++p)
      op.inputs.emplace_back(1, letters[rng.uniform_int(0, 1)]);
    for (int p = 0; p < n_out; ++p)
      op.outputs.emplace_back(1, letters[rng.uniform_int(0, 1)]);
    f = f.with_op(op);
  }
  // try a few random connections; rejected ones just stay open
  int attempts = rng.uniform_int(0, 2 * n_ops);
  for (int t = 0; t < attempts; ++t) {
    auto outs = f.open_outputs();
    auto ins = f.open_inputs();
    if (outs.empty() || ins.empty()) break;
    PortRef from = outs[rng.uniform_int(0, static_cast<int>(outs.size()) - 1)];
    PortRef to = ins[rng.uniform_int(0, static_cast<int>(ins.size()) - 1)];
    try {
      f = f.connect(from, to);
    } catch (const GptError&) {
    }
  }
  return f;
}

}  // namespace gptc::testsupport
