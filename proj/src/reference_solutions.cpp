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

#include "qkcm/reference_solutions.hpp"

#include <cmath>

#include "qkcm/error.hpp"

namespace qkcm::reference {

double classical_density(double t, double lambda, double kappa, double n0) {
  require(t >= 0.0, ErrorCode::InvalidArgument, "t must be nonnegative");
  return kappa + (n0 - kappa) * std::exp(-lambda * t);
}

QuantumTimescales quantum_timescales(double theta, double lambda) {
  require(lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive");
  require(theta > 0.0 && theta < M_PI, ErrorCode::InvalidArgument,
          "degenerate: mixed stationary state regime (theta must lie in (0, pi))");
  const double s = std::sin(theta);
  require(s * s > 1e-300, ErrorCode::InvalidArgument,
          "degenerate: mixed stationary state regime");
  return {2.0 / lambda, 1.0 / (lambda * s * s)};
}

double rydberg_classical_density(double t, double x, double lambda) {
  require(t >= 0.0, ErrorCode::InvalidArgument, "t must be nonnegative");
  const double x2 = x * x;
  return x2 / (1.0 + x2) * (1.0 - std::exp(-t * lambda));
}

double rydberg_quantum_density(double t, double x) {
  require(t >= 0.0, ErrorCode::InvalidArgument, "t must be nonnegative");
  require(x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
  const double x2 = x * x;
  const double kappa = x2 / (1.0 + x2);
  const double d = 1.0 - x2;
  if (d == 0.0) return 0.5 * (1.0 - (1.0 + t) * std::exp(-t));
  if (std::abs(d) < 1e-4) {
    // (2/d)(exp(t d / 2) - 1) = t * phi(z), phi(z) = (e^z - 1)/z, z = t d / 2
    const double z = 0.5 * t * d;
    double term = 1.0, phi = 1.0;
    for (int k = 2; k <= 8; ++k) {
      term *= z / k;
      phi += term;
    }
    return kappa * (1.0 - std::exp(-t) * (1.0 + t * phi));
  }
  return kappa * (1.0 + (1.0 + x2) / d * std::exp(-t) -
                  2.0 / d * std::exp(-t * (1.0 + x2) / 2.0));
}

double rydberg_quantum_density_large_x(double t, double x) {
  const double x2 = x * x;
  return x2 / (1.0 + x2) * (1.0 - std::exp(-t));
}

double timescale_match_lambda() { return 1.0; }

}  // namespace qkcm::reference
