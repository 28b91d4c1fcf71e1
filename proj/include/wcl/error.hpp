// Copyright 2026 The wcl Authors.
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

#ifndef WCL_ERROR_HPP
#define WCL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wcl {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of the operation
/// (non-positive variance, degree above a guard, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration: mismatched sizes, off-grid times,
/// unsupported model/functional combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical evaluation produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo estimate is too poorly conditioned to be reported.
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

}  // namespace wcl

#endif  // WCL_ERROR_HPP
