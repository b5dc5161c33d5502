// Copyright 2026 The orq Authors
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

namespace orq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gate construction violated an arity or operand invariant.
class InvalidGate : public Error {
 public:
  using Error::Error;
};

class QubitCapExceeded : public Error {
 public:
  using Error::Error;
};

class QubitOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonUnitaryInput : public Error {
 public:
  using Error::Error;
};

class InsufficientQubits : public Error {
 public:
  using Error::Error;
};

class HyperparameterError : public Error {
 public:
  using Error::Error;
};

/// A device profile document failed validation. `path()` names the field.
class ProfileError : public Error {
 public:
  ProfileError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A pipeline produced output that failed its own verification. Always a bug.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace orq
