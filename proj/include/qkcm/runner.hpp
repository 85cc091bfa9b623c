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

#include <string>
#include <vector>

#include "qkcm/analysis.hpp"
#include "qkcm/config.hpp"
#include "qkcm/time_series.hpp"

namespace qkcm {

inline constexpr const char* kVersion = "1.0.0";

struct RunResult {
  std::string output_path;
  // Every series written, named by its file stem.
  std::vector<TimeSeries> series;
  std::vector<std::string> files;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;
};

// Runs the configured experiment and writes CSV series (t,value,stderr), the
// waiting-time histogram, a single-trajectory heatmap and manifest.json into
// output_path. The manifest is written first with status "running" and is
// rewritten as "complete" or "failed" at the end.
RunResult run_experiment(const ExperimentConfig& config);

void write_series_csv(const std::string& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::string& path);

// Stationary values are taken as the final sample of each series.
ComparisonReport compare_files(const std::string& classical_csv, const std::string& quantum_csv);

}  // namespace qkcm
