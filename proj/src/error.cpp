// Copyright 2026 The qkcm Authors
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

#include "qkcm/error.hpp"

namespace qkcm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::OutOfRange: return "out of range";
    case ErrorCode::CapExceeded: return "oracle cap exceeded";
    case ErrorCode::DetailedBalance: return "detailed balance violated";
    case ErrorCode::NotNormalized: return "state not normalized";
    case ErrorCode::NotConverged: return "not converged";
    case ErrorCode::Numerical: return "numerical failure";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace qkcm
