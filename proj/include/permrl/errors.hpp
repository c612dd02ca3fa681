// Copyright 2026 The permrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERMRL_ERRORS_HPP_
#define PERMRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace permrl {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input: formula syntax, JSON schema, CSV layout.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally invalid model: broken ownership partition, nondeterministic
// transitions, dangling identifiers, dead ends where none are allowed.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(what) {}
};

// The safety objective admits no winning strategy from some initial state.
class UnrealizableError : public Error {
 public:
  explicit UnrealizableError(const std::string& what) : Error(what) {}
};

}  // namespace permrl

#endif  // PERMRL_ERRORS_HPP_
