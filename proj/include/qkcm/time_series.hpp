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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qkcm {

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::optional<std::vector<double>> stderrs;
  std::string label;

  std::size_t size() const noexcept { return times.size(); }
  // Throws InvalidArgument unless times strictly increase and values are finite.
  void validate() const;
  // Linear in log t between positive grid points, linear in t next to t = 0.
  double interpolate(double t) const;
};

enum class GridKind { Log, Linear };

// Log grids start with t = 0 followed by n_points - 1 geometric points in
// [t_min, t_max]; linear grids are n_points equispaced points in [0, t_max].
std::vector<double> make_time_grid(GridKind kind, double t_max, std::size_t n_points,
                                   double t_min = 0.1);

// Welford accumulation over a fixed grid, fed in trajectory-index order.
class SeriesAccumulator {
 public:
  explicit SeriesAccumulator(std::size_t n_points);

  void add(std::span<const double> sample);
  std::size_t count() const noexcept { return count_; }
  std::vector<double> mean() const { return mean_; }
  // Empty when fewer than two samples were accumulated.
  std::optional<std::vector<double>> standard_error() const;
  TimeSeries series(const std::vector<double>& times, std::string label) const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace qkcm
