// Copyright 2026 The hinpair Authors.
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

#ifndef HINPAIR_ERRORS_H_
#define HINPAIR_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hinpair {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed corpus line. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateError : public Error {
 public:
  explicit DuplicateError(const std::string &key)
      : Error("duplicate paper_id \"" + key + "\""), key_(key) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// A forward op produced NaN or Inf, or training diverged.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Bad config value. key() is the offending RunConfig key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string &key, const std::string &what)
      : Error(key + ": " + what), key_(key) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

// Checkpoint with the wrong magic, version or config snapshot.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Checkpoint that ends early or has inconsistent lengths.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace hinpair

#endif  // HINPAIR_ERRORS_H_
