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
#include "qkcm/lindblad.hpp"
#include "qkcm/quantum_engine.hpp"

using namespace qkcm;

namespace {

QuantumKCMSpec qkcm_spec(ConstraintKind kind, int n, double theta, double kappa = 0.3) {
  return QuantumKCMSpec{{1.0, kappa, {kind, Boundary::Periodic}, n}, theta, {}};
}

PureState all_up(int n) { return PureState::basis_state(SpinConfiguration::uniform(n, 2, 1)); }

}  // namespace

TEST_CASE("unraveling reproduces the dense density matrix") {
  const auto spec = qkcm_spec(ConstraintKind::FA, 3, M_PI / 3);
  const auto jumps = quantum_jump_operators(spec);
  const auto grid = make_time_grid(GridKind::Linear, 6.0, 13);
  const auto ens = quantum_ensemble(jumps, all_up(3), grid, 4000, 17);
  const auto rho = lindblad_solve_dense(jumps, DensityMatrix::from_pure(all_up(3)), grid);
  REQUIRE(ens.density.stderrs);
  REQUIRE(ens.sigma_x.stderrs);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(std::abs(ens.density.values[i] - mean_excitation(rho[i])) <
          4.0 * (*ens.density.stderrs)[i] + 1e-12);
    CHECK(std::abs(ens.sigma_x.values[i] - mean_sigma_x(rho[i])) <
          4.0 * (*ens.sigma_x.stderrs)[i] + 1e-12);
  }
}

TEST_CASE("spectral and krylov no-jump evolution agree") {
  const auto spec = qkcm_spec(ConstraintKind::East, 5, M_PI / 4);
  const auto jumps = quantum_jump_operators(spec);
  StepControl spectral;
  spectral.backend = NoJumpBackend::Spectral;
  StepControl krylov;
  krylov.backend = NoJumpBackend::Krylov;
  krylov.krylov_tolerance = 1e-11;
  const auto grid = make_time_grid(GridKind::Log, 20.0, 15);
  const auto a = qjmc_trajectory(jumps, all_up(5), grid, 42, spectral);
  const auto b = qjmc_trajectory(jumps, all_up(5), grid, 42, krylov);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].channel == b.events[i].channel);
    CHECK(a.events[i].time == doctest::Approx(b.events[i].time).epsilon(1e-6));
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(a.density[i] - b.density[i]) < 1e-6);
}

TEST_CASE("trajectories are deterministic in the seed") {
  const auto jumps = quantum_jump_operators(qkcm_spec(ConstraintKind::East, 4, M_PI / 2));
  const auto grid = make_time_grid(GridKind::Log, 50.0, 21);
  const auto a = qjmc_trajectory(jumps, all_up(4), grid, 5);
  const auto b = qjmc_trajectory(jumps, all_up(4), grid, 5);
  CHECK(a.density == b.density);
  CHECK(a.sigma_x == b.sigma_x);
  REQUIRE(a.events.size() == b.events.size());

  const auto e1 = quantum_ensemble(jumps, all_up(4), grid, 40, 8, {}, {1, true, 1});
  const auto e4 = quantum_ensemble(jumps, all_up(4), grid, 40, 8, {}, {1, true, 4});
  CHECK(e1.density.values == e4.density.values);
  CHECK(e1.sigma_x.values == e4.sigma_x.values);
}

TEST_CASE("dark initial state never jumps") {
  const auto spec = qkcm_spec(ConstraintKind::FA, 4, M_PI / 2, 1.0 / 101.0);
  const auto s = stationary_product_state(spec);
  const auto grid = make_time_grid(GridKind::Log, 100.0, 11);
  const auto tr = qjmc_trajectory(quantum_jump_operators(spec), s, grid, 1);
  CHECK(tr.events.empty());
  for (double v : tr.density) CHECK(v == doctest::Approx(1.0 / 101.0));
  for (double v : tr.sigma_x) CHECK(v == doctest::Approx(20.0 / 101.0));

  const auto h = waiting_time_distribution({tr.events}, {0.0, 100.0}, {1e-3, 1.0, 1e3});
  CHECK(h.total == 0);
  CHECK(waiting_time_distribution({}, {0.0, 1.0}, {0.1, 1.0}).total == 0);
}

TEST_CASE("run_to_dark reports the asymptotic product value") {
  // Without a constraint the product state is the only dark state.
  const double kappa = 0.2;
  const auto spec = qkcm_spec(ConstraintKind::Unconstrained, 4, M_PI / 2, kappa);
  StepControl control;
  control.run_to_dark = true;
  const auto grid = make_time_grid(GridKind::Log, 10.0, 5);
  const auto ens = quantum_ensemble(quantum_jump_operators(spec), all_up(4), grid, 20, 3, control);
  REQUIRE(ens.asymptotic);
  CHECK(ens.converged_dark == 20);
  CHECK(ens.asymptotic->density == doctest::Approx(kappa).epsilon(1e-8));
  CHECK(ens.asymptotic->sigma_x == doctest::Approx(2.0 * std::sqrt(kappa * (1 - kappa))).epsilon(1e-8));
}

TEST_CASE("waiting times are binned by opening jump and duration") {
  const std::vector<std::vector<JumpEvent>> events{{{1.0, 0}, {1.5, 1}, {11.5, 0}},
                                                   {{2.0, 2}, {2.01, 0}}};
  const auto waits = waiting_times(events);
  CHECK(waits.size() == 3);
  const auto h = waiting_time_distribution(events, {0.0, 2.0, 20.0}, {1e-3, 1e-1, 1.0, 100.0});
  CHECK(h.total == 3);
  CHECK(h.counts[0][1] == 1.0);  // 0.5 opened at 1.0
  CHECK(h.counts[0][0] == 0.0);
  CHECK(h.counts[1][0] == 1.0);  // 0.01 opened at 2.0
  CHECK(h.counts[0][2] == 1.0);  // 10 opened at 1.5
  CHECK(h.normalized[0][1] == doctest::Approx(0.5));
  CHECK(h.marginal[0] == 1.0);
}
