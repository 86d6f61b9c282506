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

#include <stdexcept>
#include <string>

namespace gptc {

/// Base class for all library errors.
class GptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- wiring / fragment construction

class PortOccupied : public GptError {
 public:
  using GptError::GptError;
};
class TypeMismatch : public GptError {
 public:
  using GptError::GptError;
};
class WouldCreateCycle : public GptError {
 public:
  using GptError::GptError;
};
class InvalidFragment : public GptError {
 public:
  using GptError::GptError;
};

// -- notation front end

class SyntaxError : public GptError {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : GptError(what + " at line " + std::to_string(line) + ", column " +
                 std::to_string(column)),
        line(line),
        column(column) {}
  int line;
  int column;
};
class DuplicateIndexRole : public GptError {
 public:
  using GptError::GptError;
};
class TypeLetterMismatch : public GptError {
 public:
  using GptError::GptError;
};
class CycleError : public GptError {
 public:
  using GptError::GptError;
};

// -- tensors and contraction

class ShapeMismatch : public GptError {
 public:
  using GptError::GptError;
};
class UnboundOperation : public GptError {
 public:
  using GptError::GptError;
};
class NegativeWeight : public GptError {
 public:
  using GptError::GptError;
};

// -- theories

class NonPhysicalOperator : public GptError {
 public:
  using GptError::GptError;
};
class NotAState : public GptError {
 public:
  using GptError::GptError;
};
class SpecInvalid : public GptError {
 public:
  using GptError::GptError;
};
class UnsupportedTheory : public GptError {
 public:
  using GptError::GptError;
};
class UnknownType : public GptError {
 public:
  using GptError::GptError;
};
class UnknownObject : public GptError {
 public:
  using GptError::GptError;
};

// -- faces, postulates, constructions

class EmptyOutcomeSet : public GptError {
 public:
  using GptError::GptError;
};
class NotInFace : public GptError {
 public:
  using GptError::GptError;
};
class NotAFilter : public GptError {
 public:
  using GptError::GptError;
};
class EmptyTable : public GptError {
 public:
  using GptError::GptError;
};
class AncillaUnavailable : public GptError {
 public:
  using GptError::GptError;
};
class BadOutcomeIndex : public GptError {
 public:
  using GptError::GptError;
};
class NMismatch : public GptError {
 public:
  using GptError::GptError;
};
class ConstructionUnavailable : public GptError {
 public:
  using GptError::GptError;
};
class UnknownSuite : public GptError {
 public:
  using GptError::GptError;
};

}  // namespace gptc
