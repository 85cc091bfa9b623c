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

#include "qkcm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "qkcm/error.hpp"

namespace qkcm {

namespace {

double interpolate_crossing(double t0, double t1, double d0, double d1, double level) {
  // d0 > level >= d1 along the segment; place the crossing linearly in log t.
  const double w = (d0 - level) / (d0 - d1);
  if (t0 > 0.0) return std::exp(std::log(t0) + w * (std::log(t1) - std::log(t0)));
  return t0 + w * (t1 - t0);
}

}  // namespace

double relaxation_time(const TimeSeries& series, double stationary_value, double band) {
  series.validate();
  require(series.size() >= 1, ErrorCode::InvalidArgument, "empty series");
  require(band > 0.0, ErrorCode::InvalidArgument, "band must be positive");
  const double width = band * std::abs(series.values.front() - stationary_value);
  std::vector<double> dev(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    dev[i] = std::abs(series.values[i] - stationary_value);
  }
  if (dev.back() > width) {
    std::ostringstream os;
    os << "series '" << series.label << "' has not relaxed: final residual " << dev.back()
       << " exceeds band " << width;
    fail(ErrorCode::NotConverged, os.str());
  }
  std::size_t last_out = series.size();
  for (std::size_t i = series.size(); i-- > 0;) {
    if (dev[i] > width) {
      last_out = i;
      break;
    }
  }
  if (last_out == series.size()) return series.times.front();
  const std::size_t i = last_out;
  return interpolate_crossing(series.times[i], series.times[i + 1], dev[i], dev[i + 1], width);
}

std::string ComparisonReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\n  \"stationary_classical\": " << stationary_classical
     << ",\n  \"stationary_quantum\": " << stationary_quantum
     << ",\n  \"stationary_deviation\": " << stationary_deviation
     << ",\n  \"max_transient_deviation\": " << max_transient_deviation
     << ",\n  \"time_of_max_deviation\": " << time_of_max_deviation
     << ",\n  \"points\": " << points << ",\n  \"profile\": [";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << (i ? ",\n" : "\n") << "    {\"t_lo\": " << profile[i].t_lo << ", \"t_hi\": "
       << profile[i].t_hi << ", \"max_abs_deviation\": " << profile[i].max_abs_deviation << "}";
  }
  os << (profile.empty() ? "]" : "\n  ]") << "\n}\n";
  return os.str();
}

ComparisonReport compare_models(const TimeSeries& classical, const TimeSeries& quantum,
                                double stationary_classical, double stationary_quantum) {
  classical.validate();
  quantum.validate();
  require(!classical.times.empty() && !quantum.times.empty(), ErrorCode::InvalidArgument,
          "cannot compare empty series");
  const double lo = std::max(classical.times.front(), quantum.times.front());
  const double hi = std::min(classical.times.back(), quantum.times.back());
  require(lo <= hi, ErrorCode::InvalidArgument, "series time ranges do not overlap");

  ComparisonReport r;
  r.stationary_classical = stationary_classical;
  r.stationary_quantum = stationary_quantum;
  r.stationary_deviation = stationary_quantum - stationary_classical;
  for (std::size_t i = 0; i < classical.size(); ++i) {
    const double t = classical.times[i];
    if (t < lo || t > hi) continue;
    const double d = std::abs(quantum.interpolate(t) - classical.values[i]);
    ++r.points;
    if (d > r.max_transient_deviation) {
      r.max_transient_deviation = d;
      r.time_of_max_deviation = t;
    }
    if (t <= 0.0) continue;
    const double decade = std::floor(std::log10(t));
    const double t_lo = std::pow(10.0, decade);
    if (r.profile.empty() || r.profile.back().t_lo != t_lo) {
      r.profile.push_back({t_lo, 10.0 * t_lo, 0.0});
    }
    r.profile.back().max_abs_deviation = std::max(r.profile.back().max_abs_deviation, d);
  }
  require(r.points > 0, ErrorCode::InvalidArgument, "no common grid points to compare");
  return r;
}

Eigen::MatrixXd site_profile_heatmap(const QuantumTrajectory& trajectory) {
  const std::size_t points = trajectory.site_density.size();
  require(points == trajectory.grid.size() && points > 0, ErrorCode::InvalidArgument,
          "trajectory carries no per-site samples");
  const auto sites = static_cast<Eigen::Index>(trajectory.site_density.front().size());
  Eigen::MatrixXd m(sites, static_cast<Eigen::Index>(points));
  for (std::size_t j = 0; j < points; ++j) {
    for (Eigen::Index k = 0; k < sites; ++k) {
      m(k, static_cast<Eigen::Index>(j)) = std::clamp(trajectory.site_density[j][k], 0.0, 1.0);
    }
  }
  return m;
}

Eigen::MatrixXd site_profile_heatmap(const ClassicalTrajectory& trajectory,
                                     const std::vector<double>& grid) {
  const auto ords = trajectory.ordinals_at(grid);
  const int n = trajectory.initial.n_sites();
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int k = 0; k < n; ++k) m(k, static_cast<Eigen::Index>(j)) = (ords[j] >> k) & 1u;
  }
  return m;
}

std::vector<PlateauInterval> plateau_intervals(const TimeSeries& series, double until,
                                               double fraction, double min_decades) {
  series.validate();
  std::vector<double> t, v;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.times[i] > 0.0) {
      t.push_back(series.times[i]);
      v.push_back(series.values[i]);
    }
  }
  std::vector<PlateauInterval> out;
  if (t.size() < 2) return out;
  double running_max = 0.0;
  bool in_run = false;
  double run_start = 0.0;
  auto close_run = [&](double end) {
    if (in_run && std::log10(end / run_start) >= min_decades && end <= until) {
      out.push_back({run_start, end});
    }
    in_run = false;
  };
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double slope = std::abs(v[i + 1] - v[i]) / std::log(t[i + 1] / t[i]);
    running_max = std::max(running_max, slope);
    const bool flat = running_max > 0.0 && slope < fraction * running_max;
    if (flat && !in_run) {
      in_run = true;
      run_start = t[i];
    } else if (!flat && in_run) {
      close_run(t[i]);
    }
  }
  if (in_run) close_run(t.back());
  return out;
}

std::pair<double, double> fit_two_exponential(const TimeSeries& uniform_series,
                                              double stationary_value) {
  uniform_series.validate();
  const std::size_t n = uniform_series.size();
  require(n >= 4, ErrorCode::InvalidArgument, "two-exponential fit needs at least 4 points");
  const double dt = uniform_series.times[1] - uniform_series.times[0];
  for (std::size_t i = 2; i < n; ++i) {
    const double step = uniform_series.times[i] - uniform_series.times[i - 1];
    require(std::abs(step - dt) <= 1e-9 * dt, ErrorCode::InvalidArgument,
            "two-exponential fit needs a uniform grid");
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = uniform_series.values[i] - stationary_value;
  // y[j+2] = a1 y[j+1] + a0 y[j], least squares.
  Eigen::MatrixXd a(n - 2, 2);
  Eigen::VectorXd b(n - 2);
  for (std::size_t j = 0; j + 2 < n; ++j) {
    a(static_cast<Eigen::Index>(j), 0) = y[j + 1];
    a(static_cast<Eigen::Index>(j), 1) = y[j];
    b(static_cast<Eigen::Index>(j)) = y[j + 2];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  const double a1 = coef(0), a0 = coef(1);
  const std::complex<double> disc = std::sqrt(std::complex<double>(a1 * a1 + 4.0 * a0, 0.0));
  const std::complex<double> z1 = 0.5 * (a1 + disc), z2 = 0.5 * (a1 - disc);
  double r1 = -std::log(std::abs(z1)) / dt;
  double r2 = -std::log(std::abs(z2)) / dt;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace qkcm
