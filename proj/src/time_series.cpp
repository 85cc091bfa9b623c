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

#include "qkcm/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "qkcm/error.hpp"

namespace qkcm {

void TimeSeries::validate() const {
  require(values.size() == times.size(), ErrorCode::DimensionMismatch,
          "series '" + label + "' has mismatched times/values");
  if (stderrs) {
    require(stderrs->size() == times.size(), ErrorCode::DimensionMismatch,
            "series '" + label + "' has mismatched standard errors");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(std::isfinite(values[i]) && std::isfinite(times[i]), ErrorCode::InvalidArgument,
            "series '" + label + "' contains non-finite entries");
    if (i > 0) {
      require(times[i] > times[i - 1], ErrorCode::InvalidArgument,
              "series '" + label + "' times are not strictly increasing");
    }
  }
}

double TimeSeries::interpolate(double t) const {
  require(!times.empty(), ErrorCode::InvalidArgument, "cannot interpolate an empty series");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double t0 = times[lo], t1 = times[hi];
  double w;
  if (t0 > 0.0) {
    w = std::log(t / t0) / std::log(t1 / t0);
  } else {
    w = (t - t0) / (t1 - t0);
  }
  return values[lo] + w * (values[hi] - values[lo]);
}

std::vector<double> make_time_grid(GridKind kind, double t_max, std::size_t n_points,
                                   double t_min) {
  require(t_max > 0.0, ErrorCode::InvalidArgument, "t_max must be positive");
  require(n_points >= 2, ErrorCode::InvalidArgument, "a time grid needs at least two points");
  std::vector<double> grid(n_points);
  if (kind == GridKind::Linear) {
    for (std::size_t i = 0; i < n_points; ++i) {
      grid[i] = t_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return grid;
  }
  require(t_min > 0.0 && t_min < t_max, ErrorCode::InvalidArgument,
          "log grid needs 0 < t_min < t_max");
  grid[0] = 0.0;
  const std::size_t m = n_points - 1;
  const double lmin = std::log(t_min), lmax = std::log(t_max);
  for (std::size_t i = 0; i < m; ++i) {
    const double f = m == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(m - 1);
    grid[i + 1] = std::exp(lmin + f * (lmax - lmin));
  }
  grid.back() = t_max;
  return grid;
}

SeriesAccumulator::SeriesAccumulator(std::size_t n_points) : mean_(n_points), m2_(n_points) {}

void SeriesAccumulator::add(std::span<const double> sample) {
  require(sample.size() == mean_.size(), ErrorCode::DimensionMismatch,
          "sample length does not match accumulator grid");
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double delta = sample[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (sample[i] - mean_[i]);
  }
}

std::optional<std::vector<double>> SeriesAccumulator::standard_error() const {
  if (count_ < 2) return std::nullopt;
  std::vector<double> se(mean_.size());
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < se.size(); ++i) {
    se[i] = std::sqrt(std::max(0.0, m2_[i]) / (n - 1.0) / n);
  }
  return se;
}

TimeSeries SeriesAccumulator::series(const std::vector<double>& times, std::string label) const {
  TimeSeries s{times, mean_, standard_error(), std::move(label)};
  return s;
}

}  // namespace qkcm
