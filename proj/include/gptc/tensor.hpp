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

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gptc/errors.hpp"
#include "gptc/system_type.hpp"

namespace gptc {

/// Real dense tensor over fiducial indices: one axis of size K per port.
/// States have output axes only, effects input axes only, transformations
/// both. Data is stored row-major over the concatenated axis list
/// (outputs first, then inputs), so the matrix view of a transformation has
/// shape (prod K_out) x (prod K_in) with row-major layout, and a composite
/// axis pair (i, j) flattens to i*K_second + j.
class GptTensor {
 public:
  GptTensor() : data_(1, 1.0) {}  // scalar 1

  GptTensor(std::vector<SystemType> out_types, std::vector<SystemType> in_types,
            std::vector<double> data)
      : out_types_(std::move(out_types)), in_types_(std::move(in_types)), data_(std::move(data)) {
    for (const auto& t : out_types_)
      if (t.K < 1) throw ShapeMismatch("tensor axis '" + t.label + "' has no K");
    for (const auto& t : in_types_)
      if (t.K < 1) throw ShapeMismatch("tensor axis '" + t.label + "' has no K");
    if (data_.size() != total_size())
      throw ShapeMismatch("tensor data has " + std::to_string(data_.size()) +
                          " entries, axes require " + std::to_string(total_size()));
    for (double v : data_)
      if (!std::isfinite(v)) throw GptError("tensor entries must be finite");
  }

  static GptTensor scalar(double v) { return GptTensor({}, {}, {v}); }
  static GptTensor state(const SystemType& t, std::vector<double> values) {
    return GptTensor({t}, {}, std::move(values));
  }
  static GptTensor state(std::vector<SystemType> types, std::vector<double> values) {
    return GptTensor(std::move(types), {}, std::move(values));
  }
  static GptTensor effect(const SystemType& t, std::vector<double> values) {
    return GptTensor({}, {t}, std::move(values));
  }
  static GptTensor effect(std::vector<SystemType> types, std::vector<double> values) {
    return GptTensor({}, std::move(types), std::move(values));
  }
  static GptTensor transformation(std::vector<SystemType> out_types,
                                  std::vector<SystemType> in_types,
                                  const Eigen::MatrixXd& m) {
    std::vector<double> data(m.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data.data(), m.rows(), m.cols()) = m;
    GptTensor t(std::move(out_types), std::move(in_types), std::move(data));
    if (static_cast<std::size_t>(m.rows()) != t.out_size() ||
        static_cast<std::size_t>(m.cols()) != t.in_size())
      throw ShapeMismatch("matrix shape does not match axis sizes");
    return t;
  }

  int out_rank() const { return static_cast<int>(out_types_.size()); }
  int in_rank() const { return static_cast<int>(in_types_.size()); }
  const SystemType& out_type(int i) const { return out_types_.at(i); }
  const SystemType& in_type(int i) const { return in_types_.at(i); }
  const std::vector<SystemType>& out_types() const { return out_types_; }
  const std::vector<SystemType>& in_types() const { return in_types_; }

  bool is_state() const { return in_types_.empty() && !out_types_.empty(); }
  bool is_effect() const { return out_types_.empty() && !in_types_.empty(); }
  bool is_scalar() const { return out_types_.empty() && in_types_.empty(); }

  std::size_t out_size() const {
    std::size_t s = 1;
    for (const auto& t : out_types_) s *= t.K;
    return s;
  }
  std::size_t in_size() const {
    std::size_t s = 1;
    for (const auto& t : in_types_) s *= t.K;
    return s;
  }
  std::size_t total_size() const { return out_size() * in_size(); }

  const std::vector<double>& data() const { return data_; }
  double scalar_value() const {
    if (!is_scalar()) throw ShapeMismatch("tensor is not a scalar");
    return data_[0];
  }

  /// Row-major matrix view, rows = flattened outputs, cols = flattened inputs.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(out_size()),
            static_cast<Eigen::Index>(in_size())};
  }
  /// Flat vector view.
  Eigen::Map<const Eigen::VectorXd> vector() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  double max_abs() const {
    double m = 0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::vector<SystemType> out_types_, in_types_;
  std::vector<double> data_;
};

/// Componentwise affine combination of states with nonnegative weights
/// summing to at most one (sub-normalized mixtures are allowed).
inline GptTensor convex_mix(std::span<const GptTensor> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size())
    throw ShapeMismatch("convex_mix needs matching state and weight counts");
  double sum = 0;
  for (double w : weights) {
    if (w < 0) throw NegativeWeight("mixture weight " + std::to_string(w) + " is negative");
    sum += w;
  }
  if (sum > 1.0 + 1e-12) throw GptError("mixture weights exceed 1");
  std::vector<double> acc(states[0].data().size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].out_types() != states[0].out_types() ||
        states[i].in_types() != states[0].in_types())
      throw ShapeMismatch("mixed states must share a signature");
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += weights[i] * states[i].data()[j];
  }
  return GptTensor(states[0].out_types(), states[0].in_types(), std::move(acc));
}

inline GptTensor convex_mix(const std::vector<GptTensor>& states, const std::vector<double>& w) {
  return convex_mix(std::span<const GptTensor>(states), std::span<const double>(w));
}

/// The null state gives probability zero in every circuit; all components
/// vanish up to tolerance.
inline bool is_null(const GptTensor& state, double tol = 1e-12) {
  return state.max_abs() <= tol;
}

}  // namespace gptc
