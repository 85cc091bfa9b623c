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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkcm/model_zoo.hpp"
#include "qkcm/time_series.hpp"

namespace qkcm {

enum class ModelKind {
  Unconstrained,
  East,
  FA,
  ExcludedVolumeClassical,
  QuantumKCM,
  RydbergEffective,
  RydbergThreeLevel,
};

const char* to_string(ModelKind kind) noexcept;
bool is_classical(ModelKind kind) noexcept;
bool is_rydberg(ModelKind kind) noexcept;

// Flat key = value experiment description. Unset optionals take model
// dependent defaults when the config is resolved.
struct ExperimentConfig {
  ModelKind model = ModelKind::East;
  std::optional<ConstraintKind> constraint;  // quantum_kcm only
  int n_sites = 4;
  std::optional<double> kappa_ratio;
  std::optional<double> x;
  std::optional<double> theta;
  double lambda = 1.0;
  std::optional<Boundary> boundary;
  // all_up, all_down, product_s or explicit site levels; all_down is the
  // default for the Rydberg and excluded-volume models, all_up otherwise.
  std::optional<std::string> initial_state;
  double t_max = 100.0;
  GridKind time_grid = GridKind::Log;
  std::size_t n_points = 61;
  double t_min = 0.1;
  std::size_t n_trajectories = 1000;
  std::uint64_t master_seed = 1;
  bool oracle = false;
  std::string output_path = "qkcm_out";
  ThreeLevelParams three_level;

  // Throws InvalidArgument naming the key on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  // Lines of `key = value`; `#` starts a comment.
  static ExperimentConfig parse(const std::string& text);
  // Reads a key-value file, or the config echoed in a run manifest (.json).
  static ExperimentConfig load(const std::string& path);

  // Canonical text; parse(to_text()) reproduces the config exactly.
  std::string to_text() const;
  std::vector<std::pair<std::string, std::string>> entries() const;

  void validate() const;

  Boundary resolved_boundary() const;
  std::string resolved_initial_state() const;
  double resolved_kappa() const;
  std::vector<double> grid() const;

  ClassicalKCMSpec classical_spec() const;
  QuantumKCMSpec quantum_spec() const;
  RydbergSpec rydberg_spec() const;
};

// Accepts plain numbers and multiples of pi such as "pi/2", "3pi/4", "0.5*pi".
double parse_angle(const std::string& text);

}  // namespace qkcm
