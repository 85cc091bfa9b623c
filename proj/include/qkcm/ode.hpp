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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>

#include "qkcm/error.hpp"

namespace qkcm {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 picks a step from the first derivative
  double min_step = 1e-13;    // relative to max(1, |t|)
  std::size_t max_steps = 50'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
};

// Dormand-Prince 5(4) with FSAL and steps clipped to land on every output
// time. State is any Eigen dense type; rhs(t, y, dydt) fills dydt. The
// observer receives (index, y) at each requested time, starting with times[0].
template <class State, class Rhs, class Observer>
OdeStats integrate_dopri5(Rhs&& rhs, State y, std::span<const double> times, Observer&& observer,
                          const OdeOptions& opt = {}) {
  OdeStats stats;
  if (times.empty()) return stats;
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(times[i] >= times[i - 1], ErrorCode::InvalidArgument,
            "output times must be nondecreasing");
  }

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto err_norm = [&](const State& err, const State& y0, const State& y1) {
    const auto scale = (opt.atol + opt.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array());
    return (err.cwiseAbs().array() / scale).maxCoeff();
  };

  double t = times[0];
  observer(std::size_t{0}, static_cast<const State&>(y));

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, ynew = y;
  rhs(t, y, k1);
  ++stats.rhs_calls;

  double h = opt.initial_step;
  if (!(h > 0.0)) {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    h = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-6;
    h = std::max(h, 1e-10);
  }

  for (std::size_t idx = 1; idx < times.size(); ++idx) {
    const double target = times[idx];
    while (t < target) {
      require(stats.accepted + stats.rejected < opt.max_steps, ErrorCode::NotConverged,
              "ODE step budget exhausted");
      const double span = target - t;
      const bool clipped = h >= span;
      const double step = clipped ? span : h;

      ytmp = y + step * (a21 * k1);
      rhs(t + c2 * step, ytmp, k2);
      ytmp = y + step * (a31 * k1 + a32 * k2);
      rhs(t + c3 * step, ytmp, k3);
      ytmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * step, ytmp, k4);
      ytmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * step, ytmp, k5);
      ytmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + step, ytmp, k6);
      ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(t + step, ynew, k7);
      stats.rhs_calls += 6;

      ytmp = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double err = err_norm(ytmp, y, ynew);
      if (!std::isfinite(err)) {
        h = 0.25 * step;
        ++stats.rejected;
      } else if (err <= 1.0) {
        t = clipped ? target : t + step;
        std::swap(y, ynew);
        std::swap(k1, k7);
        ++stats.accepted;
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A step shortened to hit an output time does not shrink the next one.
        h = clipped ? std::max(h, step * factor) : step * factor;
      } else {
        ++stats.rejected;
        h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      }
      if (h < opt.min_step * std::max(1.0, std::abs(t))) {
        std::ostringstream os;
        os << "integration tolerance failure: step " << h << " underflows at t=" << t;
        fail(ErrorCode::NotConverged, os.str());
      }
    }
    observer(idx, static_cast<const State&>(y));
  }
  return stats;
}

}  // namespace qkcm
