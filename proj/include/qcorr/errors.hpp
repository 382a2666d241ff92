// Copyright 2026 The qcorr Authors
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

namespace qcorr {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  ok = 0,
  failed = 1,
  parse = 2,
  invariant = 3,
  usage = 64,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

// Malformed input document (JSON syntax, missing or mistyped field).
class ParseError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::parse; }
};

// A value violates a domain invariant: non-Hermitian or non-PSD operator,
// dimension overflow, a state that is not in the image of an isometry.
class InvariantError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::invariant; }
};

// Bad arguments: unknown labels, out-of-range indices, inconsistent sizes.
class ArgumentError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

}  // namespace qcorr
