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

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gptc/theory.hpp"

namespace gptc {

/// User-loadable theory given by finite tables of states, effects,
/// transforms, and maximal sets (the `.thy` JSON format; schema in the repo
/// docs). This is the falsification vehicle: tables need not satisfy the
/// postulates, the loader only enforces structural sanity.
class TabularTheory final : public Theory {
 public:
  struct NamedState {
    std::string name;
    GptTensor tensor;
    bool pure = false;
  };
  struct NamedEffect {
    std::string name;
    GptTensor tensor;
    bool unit = false;
  };
  struct NamedTransform {
    std::string name;
    GptTensor tensor;
  };

  Kind kind() const override { return Kind::Tabular; }
  const std::string& name() const override { return name_; }

  SystemType type(const std::string& label) const override {
    auto it = types_.find(label);
    if (it == types_.end())
      throw UnknownType("theory '" + name_ + "' has no type '" + label + "'");
    return it->second;
  }

  SystemType composite(const SystemType& a, const SystemType& b) const override {
    auto it = types_.find(a.label + b.label);
    if (it != types_.end()) return it->second;  // the table may pin composites
    return SystemType{a.label + b.label, a.N * b.N, a.K * b.K};
  }

  MaximalSet maximal_set(const SystemType& t) const override {
    const auto& sets = sets_for(t.label);
    return sets.front();
  }
  MaximalSet random_maximal_set(const SystemType& t, Rng& rng) const override {
    const auto& sets = sets_for(t.label);
    return sets[rng.uniform_int(0, static_cast<int>(sets.size()) - 1)];
  }

  GptTensor unit_effect(const SystemType& t) const override {
    for (const auto& e : effects_at(t.label))
      if (e.unit) return e.tensor;
    throw UnsupportedTheory("no unit effect declared for type '" + t.label + "'");
  }

  GptTensor sample_pure(const SystemType& t, Rng& rng) const override {
    std::vector<const NamedState*> pure;
    for (const auto& s : states_at(t.label))
      if (s.pure) pure.push_back(&s);
    if (pure.empty())
      throw UnsupportedTheory("no pure states declared for type '" + t.label + "'");
    return pure[rng.uniform_int(0, static_cast<int>(pure.size()) - 1)]->tensor;
  }

  bool is_pure(const SystemType& t, const GptTensor& state) const override {
    if (state.max_abs() <= 1e-12) return false;
    for (const auto& s : states_at(t.label)) {
      if (!s.pure) continue;
      double pp = s.tensor.vector().squaredNorm();
      if (pp <= 0) continue;
      double lambda = s.tensor.vector().dot(state.vector()) / pp;
      if (lambda <= 0) continue;
      if ((state.vector() - lambda * s.tensor.vector()).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, state.max_abs()))
        return true;
    }
    return false;
  }

  std::vector<GptTensor> state_span(const SystemType& t) const override {
    std::vector<GptTensor> v;
    for (const auto& s : states_at(t.label)) v.push_back(s.tensor);
    return v;
  }
  std::vector<GptTensor> effect_span(const SystemType& t) const override {
    std::vector<GptTensor> v;
    for (const auto& e : effects_at(t.label)) v.push_back(e.tensor);
    return v;
  }

  GptTensor permutation_transform(const SystemType& t, const MaximalSet& mset,
                                  const Permutation& pi) const override {
    for (const auto& tr : transforms_at(t.label)) {
      bool matches = true;
      for (int n = 0; n < pi.size() && matches; ++n)
        matches = (tr.tensor.matrix() * mset.states[n].vector() -
                   mset.states[pi(n)].vector())
                      .cwiseAbs()
                      .maxCoeff() < 1e-9;
      if (matches) return tr.tensor;
    }
    throw UnsupportedTheory("table lists no transform effecting the permutation");
  }

  GptTensor direct_filter(const SystemType& t, const MaximalSet& mset,
                          const std::vector<int>& outcomes) const override {
    std::vector<GptTensor> face = face_span(t, mset, outcomes);
    std::vector<int> complement;
    for (int n = 0; n < static_cast<int>(mset.states.size()); ++n)
      if (std::find(outcomes.begin(), outcomes.end(), n) == outcomes.end())
        complement.push_back(n);
    std::vector<GptTensor> blocked = face_span(t, mset, complement);
    for (const auto& tr : transforms_at(t.label)) {
      bool ok = true;
      for (const auto& s : face)
        ok = ok && (tr.tensor.matrix() * s.vector() - s.vector()).cwiseAbs().maxCoeff() < 1e-9;
      for (const auto& s : blocked)
        ok = ok && (tr.tensor.matrix() * s.vector()).cwiseAbs().maxCoeff() < 1e-9;
      if (ok) return tr.tensor;
    }
    throw UnsupportedTheory("table lists no filter for the face");
  }

  std::vector<GptTensor> face_span(const SystemType& t, const MaximalSet& mset,
                                   const std::vector<int>& outcomes) const override {
    // states with support only on the declared outcomes, read off the table
    Eigen::VectorXd hyper = Eigen::VectorXd::Zero(t.K);
    for (int n = 0; n < static_cast<int>(mset.effects.size()); ++n)
      if (std::find(outcomes.begin(), outcomes.end(), n) == outcomes.end())
        hyper += mset.effects[n].vector();
    std::vector<GptTensor> span;
    for (const auto& s : states_at(t.label))
      if (std::abs(hyper.dot(s.tensor.vector())) < 1e-9) span.push_back(s.tensor);
    return span;
  }

  GptTensor distinguishing_effect(const SystemType& t, const GptTensor& pure) const override {
    const GptTensor* best = nullptr;
    double best_p = -1;
    for (const auto& sets = sets_for(t.label); const MaximalSet& ms : sets)
      for (const auto& e : ms.effects) {
        double p = e.vector().dot(pure.vector());
        if (p > best_p) {
          best_p = p;
          best = &e;
        }
      }
    if (!best) throw UnsupportedTheory("no maximal effects declared");
    return *best;
  }

  std::optional<std::vector<GptTensor>> enumerable_maximal_effects(
      const SystemType& t) const override {
    std::vector<GptTensor> all;
    for (const MaximalSet& ms : sets_for(t.label))
      for (const auto& e : ms.effects) all.push_back(e);
    return all;
  }
  std::optional<std::vector<GptTensor>> enumerable_pure_states(
      const SystemType& t) const override {
    std::vector<GptTensor> pure;
    for (const auto& s : states_at(t.label))
      if (s.pure) pure.push_back(s.tensor);
    return pure;
  }

  std::optional<std::pair<GptTensor, GptTensor>> compound_permutation_witness(
      const SystemType& t, const MaximalSet& mset, const Permutation& pi) const override {
    auto is_id = [&](const GptTensor& tr) {
      return (tr.matrix() - Eigen::MatrixXd::Identity(t.K, t.K)).cwiseAbs().maxCoeff() < 1e-9;
    };
    const auto& trs = transforms_at(t.label);
    for (const auto& first : trs) {
      if (is_id(first.tensor)) continue;
      for (const auto& second : trs) {
        if (is_id(second.tensor)) continue;
        Eigen::MatrixXd total = second.tensor.matrix() * first.tensor.matrix();
        bool matches = true;
        for (int n = 0; n < pi.size() && matches; ++n)
          matches = (total * mset.states[n].vector() - mset.states[pi(n)].vector())
                        .cwiseAbs()
                        .maxCoeff() < 1e-9;
        if (matches) return std::make_pair(first.tensor, second.tensor);
      }
    }
    return std::nullopt;
  }

  GptTensor named_tensor(const std::string& ref, const std::vector<SystemType>& in_types,
                         const std::vector<SystemType>& out_types) const override {
    auto expect_single = [&](const std::vector<SystemType>& ts) -> const SystemType& {
      if (ts.size() != 1)
        throw ShapeMismatch("tabular objects bind single ports ('" + ref + "')");
      return ts[0];
    };
    if (ref.rfind("prep:", 0) == 0) {
      const SystemType& t = expect_single(out_types);
      for (const auto& s : states_at(t.label))
        if (s.name == ref.substr(5)) return s.tensor;
    } else if (ref.rfind("effect:", 0) == 0) {
      const SystemType& t = expect_single(in_types);
      for (const auto& e : effects_at(t.label))
        if (e.name == ref.substr(7)) return e.tensor;
    } else if (ref.rfind("channel:", 0) == 0) {
      const SystemType& t = expect_single(in_types);
      for (const auto& tr : transforms_at(t.label))
        if (tr.name == ref.substr(8)) return tr.tensor;
    }
    throw UnknownObject("theory '" + name_ + "' has no object '" + ref + "'");
  }

  static TabularTheory from_json(const std::string& text);
  static TabularTheory from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GptError("cannot open theory file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
  }

 private:
  std::string name_;
  std::map<std::string, SystemType> types_;
  std::map<std::string, std::vector<NamedState>> states_;
  std::map<std::string, std::vector<NamedEffect>> effects_;
  std::map<std::string, std::vector<NamedTransform>> transforms_;
  std::map<std::string, std::vector<MaximalSet>> maximal_sets_;

  const std::vector<NamedState>& states_at(const std::string& label) const {
    static const std::vector<NamedState> empty;
    auto it = states_.find(label);
    return it == states_.end() ? empty : it->second;
  }
  const std::vector<NamedEffect>& effects_at(const std::string& label) const {
    static const std::vector<NamedEffect> empty;
    auto it = effects_.find(label);
    return it == effects_.end() ? empty : it->second;
  }
  const std::vector<NamedTransform>& transforms_at(const std::string& label) const {
    static const std::vector<NamedTransform> empty;
    auto it = transforms_.find(label);
    return it == transforms_.end() ? empty : it->second;
  }
  const std::vector<MaximalSet>& sets_for(const std::string& label) const {
    auto it = maximal_sets_.find(label);
    if (it == maximal_sets_.end() || it->second.empty())
      throw UnsupportedTheory("no maximal sets declared for type '" + label + "'");
    return it->second;
  }
};

inline TabularTheory TabularTheory::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecInvalid(std::string("theory file is not valid JSON: ") + e.what());
  }
  TabularTheory th;
  th.name_ = doc.value("name", "tabular");

  if (!doc.contains("types") || doc["types"].empty())
    throw SpecInvalid("theory declares no types");
  bool nontrivial = false;
  for (const auto& jt : doc["types"]) {
    SystemType t{jt.at("label").get<std::string>(), jt.at("N").get<int>(),
                 jt.at("K").get<int>()};
    validate_system_type(t);
    if (th.types_.count(t.label)) throw SpecInvalid("duplicate type '" + t.label + "'");
    if (t.N > 1) nontrivial = true;
    th.types_.emplace(t.label, t);
  }
  if (!nontrivial)
    throw SpecInvalid("at least one type must have N > 1 with finite K");

  auto values_of = [](const nlohmann::json& j, int expect,
                      const std::string& what) -> std::vector<double> {
    std::vector<double> v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != expect)
      throw SpecInvalid(what + " has " + std::to_string(v.size()) + " entries, K is " +
                        std::to_string(expect));
    return v;
  };

  for (const auto& js : doc.value("states", nlohmann::json::array())) {
    std::string label = js.at("type").get<std::string>();
    SystemType t = th.type(label);
    NamedState s{js.at("name").get<std::string>(),
                 GptTensor::state(t, values_of(js.at("values"), t.K,
                                               "state '" + js.at("name").get<std::string>() + "'")),
                 js.value("pure", false)};
    th.states_[label].push_back(std::move(s));
  }
  for (const auto& je : doc.value("effects", nlohmann::json::array())) {
    std::string label = je.at("type").get<std::string>();
    SystemType t = th.type(label);
    NamedEffect e{je.at("name").get<std::string>(),
                  GptTensor::effect(t, values_of(je.at("values"), t.K,
                                                 "effect '" + je.at("name").get<std::string>() + "'")),
                  je.value("unit", false)};
    th.effects_[label].push_back(std::move(e));
  }
  for (const auto& jt : doc.value("transforms", nlohmann::json::array())) {
    std::string in_label = jt.at("in").get<std::string>();
    std::string out_label = jt.at("out").get<std::string>();
    SystemType tin = th.type(in_label), tout = th.type(out_label);
    auto rows = jt.at("matrix");
    Eigen::MatrixXd m(tout.K, tin.K);
    if (static_cast<int>(rows.size()) != tout.K)
      throw SpecInvalid("transform '" + jt.at("name").get<std::string>() + "' matrix rows");
    for (int r = 0; r < tout.K; ++r) {
      std::vector<double> row = rows[r].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != tin.K)
        throw SpecInvalid("transform '" + jt.at("name").get<std::string>() + "' matrix cols");
      for (int c = 0; c < tin.K; ++c) m(r, c) = row[c];
    }
    if (in_label != out_label)
      throw SpecInvalid("transforms between different types are not supported");
    th.transforms_[in_label].push_back(
        NamedTransform{jt.at("name").get<std::string>(),
                       GptTensor::transformation({tout}, {tin}, m)});
  }

  // effect bounds over the listed states
  for (const auto& [label, effs] : th.effects_) {
    for (const auto& e : effs)
      for (const auto& s : th.states_at(label)) {
        double p = e.tensor.vector().dot(s.tensor.vector());
        if (p < -1e-9 || p > 1.0 + 1e-9)
          throw SpecInvalid("effect '" + e.name + "' on state '" + s.name +
                            "' gives probability " + std::to_string(p));
      }
  }

  for (const auto& jm : doc.value("maximal_sets", nlohmann::json::array())) {
    std::string label = jm.at("type").get<std::string>();
    SystemType t = th.type(label);
    MaximalSet ms;
    ms.type = t;
    for (const auto& sname : jm.at("states")) {
      bool found = false;
      for (const auto& s : th.states_at(label))
        if (s.name == sname.get<std::string>()) {
          ms.states.push_back(s.tensor);
          found = true;
          break;
        }
      if (!found)
        throw SpecInvalid("maximal set references unknown state '" +
                          sname.get<std::string>() + "'");
    }
    for (const auto& ename : jm.at("effects")) {
      bool found = false;
      for (const auto& e : th.effects_at(label))
        if (e.name == ename.get<std::string>()) {
          ms.effects.push_back(e.tensor);
          found = true;
          break;
        }
      if (!found)
        throw SpecInvalid("maximal set references unknown effect '" +
                          ename.get<std::string>() + "'");
    }
    if (static_cast<int>(ms.states.size()) != t.N ||
        static_cast<int>(ms.effects.size()) != t.N)
      throw SpecInvalid("maximal set for '" + label + "' must list N states and N effects");
    for (int i = 0; i < t.N; ++i)
      for (int j = 0; j < t.N; ++j) {
        double p = ms.effects[i].vector().dot(ms.states[j].vector());
        if (std::abs(p - (i == j ? 1.0 : 0.0)) > 1e-9)
          throw SpecInvalid("maximal set for '" + label + "' violates duality at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    // when a unit effect is declared, the maximal effects must sum to it
    for (const auto& e : th.effects_at(label))
      if (e.unit) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(t.K);
        for (const auto& me : ms.effects) sum += me.vector();
        if ((sum - e.tensor.vector()).cwiseAbs().maxCoeff() > 1e-9)
          throw SpecInvalid("maximal set effects for '" + label +
                            "' do not sum to the unit effect");
      }
  }

  // store maximal sets after validation (two passes keeps errors early)
  for (const auto& jm : doc.value("maximal_sets", nlohmann::json::array())) {
    std::string label = jm.at("type").get<std::string>();
    SystemType t = th.type(label);
    MaximalSet ms;
    ms.type = t;
    for (const auto& sname : jm.at("states"))
      for (const auto& s : th.states_at(label))
        if (s.name == sname.get<std::string>()) ms.states.push_back(s.tensor);
    for (const auto& ename : jm.at("effects"))
      for (const auto& e : th.effects_at(label))
        if (e.name == ename.get<std::string>()) ms.effects.push_back(e.tensor);
    th.maximal_sets_[label].push_back(std::move(ms));
  }
  return th;
}

inline TabularTheory load_tabular_theory(const std::string& json_text) {
  return TabularTheory::from_json(json_text);
}

}  // namespace gptc
