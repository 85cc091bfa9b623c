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
#include "qkcm/reference_solutions.hpp"

using namespace qkcm;

namespace {

DensityMatrix ground(int n) {
  return DensityMatrix::from_pure(PureState::basis_state(SpinConfiguration::uniform(n, 2, 0)));
}

double max_diff(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single-site effective model matches the closed form") {
  for (double x : {0.3, 1.0, 4.0}) {
    const RydbergSpec spec{x, 1, Boundary::Open, {}};
    const std::vector<double> times{0.0, 0.5, 1.0, 3.0, 10.0};
    const auto rho = lindblad_solve_dense(rydberg_jump_operators(spec), ground(1), times);
    for (std::size_t i = 0; i < times.size(); ++i)
      CHECK(std::abs(mean_excitation(rho[i]) - reference::rydberg_quantum_density(times[i], x)) <
            1e-8);
  }
  const auto rho = lindblad_solve_dense(rydberg_jump_operators({1.0, 1, Boundary::Open, {}}),
                                        ground(1), {0.0, 1.0});
  CHECK(mean_excitation(rho[1]) == doctest::Approx(0.13212).epsilon(1e-4));
}

TEST_CASE("propagator and runge-kutta agree") {
  const RydbergSpec spec{0.8, 4, Boundary::Open, {}};
  const auto jumps = rydberg_jump_operators(spec);
  const std::vector<double> times{0.0, 0.3, 2.0, 17.5, 60.0};
  DenseSolveOptions rk;
  rk.method = DenseMethod::RungeKutta;
  DenseSolveOptions prop;
  prop.method = DenseMethod::Propagator;
  const auto a = lindblad_solve_dense(jumps, ground(4), times, rk);
  const auto b = lindblad_solve_dense(jumps, ground(4), times, prop);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(max_diff(a[i], b[i]) < 1e-8);
}

TEST_CASE("sector restriction matches the full solve") {
  const RydbergSpec spec{1.3, 4, Boundary::Periodic, {}};
  const auto jumps = rydberg_jump_operators(spec);
  const LindbladGenerator gen(jumps, spec.basis());
  const auto sector = gen.invariant_sector(ground(4).entries());
  CHECK(sector.size() == 7);  // blockade-allowed configurations of a 4-ring

  const std::vector<double> times{0.0, 1.0, 5.0};
  DenseSolveOptions full;
  full.restrict_to_sector = false;
  full.method = DenseMethod::RungeKutta;
  DenseSolveOptions part = full;
  part.restrict_to_sector = true;
  const auto a = lindblad_solve(gen, ground(4), times, full);
  const auto b = lindblad_solve(gen, ground(4), times, part);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(max_diff(a[i], b[i]) < 1e-8);
}

TEST_CASE("dense evolution preserves the density matrix invariants") {
  const QuantumKCMSpec spec{{1.0, 0.2, {ConstraintKind::East, Boundary::Periodic}, 4}, 0.6, {}};
  const auto rho0 = DensityMatrix::from_pure(PureState::basis_state(SpinConfiguration::uniform(4, 2, 1)));
  const auto out = lindblad_solve_dense(quantum_jump_operators(spec), rho0, {0.0, 1.0, 50.0});
  for (const auto& r : out) {
    CHECK(r.hermiticity_error() < 1e-10);
    CHECK(std::abs(r.trace() - Complex(1.0)) < 1e-10);
    CHECK(r.min_eigenvalue() > -1e-8);
  }
  CHECK(max_diff(out[0], rho0) == 0.0);
}

TEST_CASE("generator application matches the definition") {
  const auto jumps = rydberg_jump_operators({0.5, 2, Boundary::Open, {}});
  const Basis b(2, 2);
  const LindbladGenerator gen(jumps, b);
  DenseMatrix rho = DenseMatrix::Random(4, 4);
  rho = (rho + rho.adjoint()).eval();
  DenseMatrix ref = DenseMatrix::Zero(4, 4);
  for (const auto& j : jumps) {
    const DenseMatrix m = dense_matrix_of(j, b);
    const DenseMatrix mm = m.adjoint() * m;
    ref += m * rho * m.adjoint() - 0.5 * (mm * rho + rho * mm);
  }
  CHECK((gen.apply(rho) - ref).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(gen.rate_bound() > 0.0);
}

TEST_CASE("three-level model approaches the effective model") {
  const ThreeLevelParams p{1.0, 1.0, 40.0, 800.0};
  const RydbergSpec spec{1.0, 1, Boundary::Open, p};
  const double factor = rescaled_time_factor(p);
  CHECK(factor == doctest::Approx(0.1));
  const Basis b(1, 3);
  DenseMatrix g = DenseMatrix::Zero(3, 3);
  g(0, 0) = 1.0;
  const std::vector<double> t_eff{0.0, 1.0, 4.0};
  std::vector<double> t_phys;
  for (double t : t_eff) t_phys.push_back(t / factor);
  const auto rho = three_level_lindblad(spec, DensityMatrix(b, g), t_phys);
  for (std::size_t i = 0; i < t_eff.size(); ++i)
    CHECK(std::abs(mean_excitation(rho[i]) - reference::rydberg_quantum_density(t_eff[i], 1.0)) <
          0.03);

  RydbergSpec missing{1.0, 1, Boundary::Open, {}};
  CHECK_THROWS_AS(three_level_generator(missing), Error);
}

TEST_CASE("cap is enforced") {
  const auto jumps = rydberg_jump_operators({1.0, 9, Boundary::Open, {}});
  CHECK_THROWS_AS(LindbladGenerator(jumps, Basis(9, 2)), Error);
}
