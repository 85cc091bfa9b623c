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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qkcm/model_zoo.hpp"

namespace qkcm {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using JumpFactory = std::function<std::vector<JumpOperator>(const QuantumKCMSpec&)>;

// max_k ||J_k |S...S>|| < 1e-12 over East and FA chains; the detail names the
// first failing model.
CheckResult check_dark_states(const JumpFactory& factory, VerifyLevel level);

// Runs every check in order, reporting each through on_result as it finishes.
std::vector<CheckResult> verify_suite(VerifyLevel level,
                                      const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace qkcm
