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

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "gptc/tensor.hpp"

namespace gptc {

/// Structured outcome of a postulate or construction check. `residual` is
/// the largest numeric violation observed; `pass` holds iff every clause
/// stayed below its tolerance. Reports are reproducible bit-for-bit for a
/// given seed.
struct CheckReport {
  std::string id;
  bool pass = true;
  double residual = 0.0;
  std::string witness;
  std::string notes;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;

  void observe(double r) { residual = std::max(residual, std::abs(r)); }

  void fail(const std::string& why, double r = 0.0, const std::string& w = "") {
    pass = false;
    observe(r);
    if (!w.empty() && witness.empty()) witness = w;
    note(why);
  }

  void require(bool ok, const std::string& why, double r = 0.0, const std::string& w = "") {
    observe(r);
    if (!ok) fail(why, r, w);
  }

  void note(const std::string& s) {
    if (!notes.empty()) notes += "; ";
    notes += s;
  }

  nlohmann::json to_record() const {
    return nlohmann::json{{"id", id},           {"pass", pass},   {"residual", residual},
                          {"witness", witness}, {"notes", notes}, {"seed", seed},
                          {"tolerances", tolerances}};
  }

  std::string to_human() const {
    std::string line = (pass ? "PASS " : "FAIL ") + id;
    line += "  residual=" + nlohmann::json(residual).dump();
    if (!witness.empty()) line += "  witness=" + witness;
    if (!notes.empty()) line += "  (" + notes + ")";
    return line;
  }
};

/// Deterministic text form of a fiducial vector for witnesses.
inline std::string witness_vector(const GptTensor& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (double v : t.data()) arr.push_back(v);
  return arr.dump();
}

}  // namespace gptc
