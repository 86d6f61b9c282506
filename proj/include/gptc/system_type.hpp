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

#include "gptc/errors.hpp"

namespace gptc {

/// A wire type. `N` is the maximum number of single-shot distinguishable
/// states, `K` the number of fiducial probabilities specifying a state.
/// Either may be 0 while unresolved (e.g. straight out of the parser, before
/// a theory is bound); a bound theory always supplies both.
struct SystemType {
  std::string label;
  int N = 0;
  int K = 0;

  bool resolved() const { return N > 0 && K > 0; }

  friend bool operator==(const SystemType& a, const SystemType& b) {
    return a.label == b.label && a.N == b.N && a.K == b.K;
  }
};

/// Validates the N/K constraints a model theory must satisfy for one type.
inline void validate_system_type(const SystemType& t) {
  if (t.N < 1 || t.K < 1)
    throw SpecInvalid("type '" + t.label + "': N and K must be positive");
  if (t.K < t.N)
    throw SpecInvalid("type '" + t.label + "': K >= N is required (got N=" +
                      std::to_string(t.N) + ", K=" + std::to_string(t.K) + ")");
}

/// A permutation of {0, .., n-1}; image form, i.e. `pi[i]` is where i goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (int v : image_) {
      if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v])
        throw GptError("not a permutation");
      seen[v] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = i;
    return Permutation(std::move(img));
  }
  /// The full cycle (0 1 2 .. n-1).
  static Permutation cycle(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = (i + 1) % n;
    return Permutation(std::move(img));
  }

  int operator()(int i) const { return image_.at(i); }
  int size() const { return static_cast<int>(image_.size()); }
  const std::vector<int>& image() const { return image_; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (image_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> img(image_.size());
    for (int i = 0; i < size(); ++i) img[image_[i]] = i;
    return Permutation(std::move(img));
  }

  /// this after other: (a.then(b))(i) = b(a(i)).
  Permutation then(const Permutation& b) const {
    std::vector<int> img(image_.size());
    for (int i = 0; i < size(); ++i) img[i] = b(image_[i]);
    return Permutation(std::move(img));
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.image_ == b.image_;
  }

 private:
  std::vector<int> image_;
};

}  // namespace gptc
