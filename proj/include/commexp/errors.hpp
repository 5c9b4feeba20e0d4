// Copyright 2026 The commexp Authors
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

namespace commexp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two series with different truncation orders were combined.
class TruncationMismatch : public Error {
 public:
  using Error::Error;
};

/// A series failed the Lie-membership (Friedrichs) residual check.
class NotLieElement : public Error {
 public:
  NotLieElement(int degree, double residual)
      : Error("Lie-membership residual exceeded at degree " +
              std::to_string(degree) + " (residual " +
              std::to_string(residual) + ")"),
        degree_(degree),
        residual_(residual) {}

  int degree() const noexcept { return degree_; }
  double residual() const noexcept { return residual_; }

 private:
  int degree_;
  double residual_;
};

class UnknownScheme : public Error {
 public:
  explicit UnknownScheme(const std::string& name)
      : Error("unknown scheme: " + name) {}
};

/// An iterative method stopped without meeting its convergence criterion.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace commexp
