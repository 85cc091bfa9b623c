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

#include <Eigen/Dense>

#include "qkcm/classical_engine.hpp"
#include "qkcm/quantum_engine.hpp"
#include "qkcm/time_series.hpp"

namespace qkcm {

// Time after which |v - v_ss| <= band * |v(0) - v_ss| holds for good, with
// log-time interpolation of the exit point. Throws NotConverged carrying the
// final residual if the last sample is still outside the band.
double relaxation_time(const TimeSeries& series, double stationary_value, double band = 0.05);

struct DecadeDeviation {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double max_abs_deviation = 0.0;
};

// Deviations are quantum minus classical.
struct ComparisonReport {
  double stationary_classical = 0.0;
  double stationary_quantum = 0.0;
  double stationary_deviation = 0.0;
  double max_transient_deviation = 0.0;
  double time_of_max_deviation = 0.0;
  std::size_t points = 0;
  std::vector<DecadeDeviation> profile;

  std::string to_json() const;
};

// The quantum series is interpolated onto the classical grid inside the
// overlap of both time ranges.
ComparisonReport compare_models(const TimeSeries& classical, const TimeSeries& quantum,
                                double stationary_classical, double stationary_quantum);

// Rows are sites, columns grid points.
Eigen::MatrixXd site_profile_heatmap(const QuantumTrajectory& trajectory);
Eigen::MatrixXd site_profile_heatmap(const ClassicalTrajectory& trajectory,
                                     const std::vector<double>& grid);

struct PlateauInterval {
  double start = 0.0;
  double end = 0.0;
};

// Maximal runs where |dv/dlog t| stays below `fraction` of its running
// maximum for at least `min_decades`, ending no later than `until`.
std::vector<PlateauInterval> plateau_intervals(const TimeSeries& series, double until,
                                               double fraction = 0.1, double min_decades = 1.0);

// Prony fit of v(t) - v_ss = a e^{-r1 t} + b e^{-r2 t} on a uniform grid.
// Returns {r1, r2} ascending; a double root yields two equal rates.
std::pair<double, double> fit_two_exponential(const TimeSeries& uniform_series,
                                              double stationary_value);

}  // namespace qkcm
