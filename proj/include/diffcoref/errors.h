// Copyright 2026 The diffcoref Authors.
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

#ifndef DIFFCOREF_ERRORS_H_
#define DIFFCOREF_ERRORS_H_

#include <stdexcept>
#include <string>

namespace diffcoref {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (ranges, dimensions, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input that violates a structural invariant of the format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Arguments that do not describe the same mentions, or otherwise do not fit
// together.
class InputError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes that disagree with the model dimensions.
class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

// Gold annotation that cannot be used for training.
class DataError : public InputError {
 public:
  using InputError::InputError;
};

// A link distribution whose rows are not normalized or not lower-triangular.
class InvalidDistributionError : public InputError {
 public:
  using InputError::InputError;
};

// Argument outside the mathematical domain of a function (T <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// NaN or infinity encountered during training.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace diffcoref

#endif  // DIFFCOREF_ERRORS_H_
