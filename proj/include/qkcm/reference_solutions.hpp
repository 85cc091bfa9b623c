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

#include <utility>

namespace qkcm::reference {

// Single unconstrained classical spin: kappa + (n0 - kappa) exp(-lambda t).
double classical_density(double t, double lambda, double kappa, double n0);

struct QuantumTimescales {
  double tau_q;        // 2 / lambda
  double tau_q_prime;  // 1 / (lambda sin^2 theta)
};

// Throws InvalidArgument for theta = 0 or pi, where a mixed stationary state
// appears and the two-timescale picture no longer applies.
QuantumTimescales quantum_timescales(double theta, double lambda);

// Single-site hard-rod rate equation from the ground state, kappa = x^2/(1+x^2).
double rydberg_classical_density(double t, double x, double lambda);

// Single-site effective Rydberg model from |g>, in rescaled time units.
// x = 1 is a removable singularity: it uses the analytic limit, and a series
// in (1 - x^2) t / 2 inside |1 - x^2| < 1e-4.
double rydberg_quantum_density(double t, double x);

// x >> 1 form: x^2/(1+x^2) (1 - exp(-t)).
double rydberg_quantum_density_large_x(double t, double x);

// Classical rate that matches the quantum single-site curve at short times.
double timescale_match_lambda();

}  // namespace qkcm::reference
