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

#include "conedyn/errors.hpp"

namespace conedyn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return "input error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Integration: return "integration error";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::SplittingDegenerate: return "splitting degenerate";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace conedyn
