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

#include <cmath>

#include "doctest.h"
#include "qkcm/error.hpp"
#include "qkcm/reference_solutions.hpp"

using namespace qkcm;
using namespace qkcm::reference;

TEST_CASE("classical single spin") {
  CHECK(classical_density(0.0, 1.0, 0.3, 1.0) == 1.0);
  CHECK(classical_density(1e3, 1.0, 0.3, 1.0) == doctest::Approx(0.3));
  CHECK(classical_density(1.0, 1.0, 1.0 / 101.0, 1.0) == doctest::Approx(0.37417).epsilon(1e-4));
}

TEST_CASE("quantum timescales") {
  auto q = quantum_timescales(M_PI / 2, 1.0);
  CHECK(q.tau_q == doctest::Approx(2.0));
  CHECK(q.tau_q_prime == doctest::Approx(1.0));
  q = quantum_timescales(M_PI / 6, 1.0);
  CHECK(q.tau_q == doctest::Approx(2.0));
  CHECK(q.tau_q_prime == doctest::Approx(4.0));
  q = quantum_timescales(M_PI / 2, 2.0);
  CHECK(q.tau_q == doctest::Approx(1.0));
  CHECK(q.tau_q_prime == doctest::Approx(0.5));
  CHECK_THROWS_AS(quantum_timescales(0.0, 1.0), Error);
  CHECK_THROWS_AS(quantum_timescales(M_PI, 1.0), Error);
}

TEST_CASE("rydberg classical density") {
  CHECK(rydberg_classical_density(std::log(2.0), 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(rydberg_classical_density(1e3, 3.0, 1.0) == doctest::Approx(0.9));
}

TEST_CASE("rydberg quantum density") {
  for (double x : {0.1, 1.0, 10.0}) {
    CHECK(std::abs(rydberg_quantum_density(0.0, x)) < 1e-15);
    CHECK(rydberg_quantum_density(200.0, x) == doctest::Approx(x * x / (1.0 + x * x)));
  }
  CHECK(rydberg_quantum_density(1.0, 1.0) == doctest::Approx(0.5 * (1.0 - 2.0 / M_E)));
  for (double t : {0.1, 1.0, 7.0}) {
    const double mid = rydberg_quantum_density(t, 1.0);
    CHECK(std::abs(rydberg_quantum_density(t, 1.0 + 1e-5) - mid) < 1e-4);
    CHECK(std::abs(rydberg_quantum_density(t, 1.0 - 1e-5) - mid) < 1e-4);
  }
  const double x = 100.0;
  for (double t : {0.5, 2.0, 10.0})
    CHECK(std::abs(rydberg_quantum_density(t, x) - rydberg_quantum_density_large_x(t, x)) < 1e-2);
  CHECK(timescale_match_lambda() == 1.0);
}
