// Copyright 2026 The bab Authors. All Rights Reserved.
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

#ifndef BAB_ERRORS_H_
#define BAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace bab {

// Broad failure classes. The CLI maps each one onto a distinct exit code.
enum class ErrorKind {
  kUsage,       // bad arguments or configuration
  kValidation,  // input data violates a contract
  kTransport,   // scoring endpoint unreachable or misbehaving
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::kUsage, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ErrorKind::kTransport, what) {}
};

// Raised by the statistical routines when an input violates a test's
// preconditions (too few observations, zero variance, ...).
class StatsError : public ValidationError {
 public:
  explicit StatsError(const std::string& what) : ValidationError(what) {}
};

}  // namespace bab

#endif  // BAB_ERRORS_H_
