// Copyright 2026 The conedyn Authors
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

namespace conedyn {

enum class ErrorKind {
  Input,
  Config,
  Integration,
  Divergence,
  SplittingDegenerate,
  InsufficientData,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base of every exception thrown by the core library. The C API maps
/// `kind()` onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

/// Step-size underflow or step budget exhaustion. `last_time` is the last
/// time reached with a valid state.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_time)
      : Error(ErrorKind::Integration, what), last_time_(last_time) {}
  double last_time() const noexcept { return last_time_; }

 private:
  double last_time_;
};

/// The state became non-finite or left the divergence bound: the orbit left
/// every bounded set the caller cares about.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double last_time)
      : Error(ErrorKind::Divergence, what), last_time_(last_time) {}
  double last_time() const noexcept { return last_time_; }

 private:
  double last_time_;
};

class SplittingDegenerateError : public Error {
 public:
  explicit SplittingDegenerateError(const std::string& what)
      : Error(ErrorKind::SplittingDegenerate, what) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& what)
      : Error(ErrorKind::InsufficientData, what) {}
};

}  // namespace conedyn
