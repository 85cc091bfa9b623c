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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qkcm/error.hpp"
#include "qkcm/model_zoo.hpp"
#include "qkcm/verify.hpp"

using namespace qkcm;

namespace {

ClassicalKCMSpec kcm(ConstraintKind kind, int n, double kappa, Boundary b = Boundary::Periodic) {
  return ClassicalKCMSpec{1.0, kappa, {kind, b}, n};
}

}  // namespace

TEST_CASE("classical_transitions examples") {
  const auto east = kcm(ConstraintKind::East, 3, 0.5);
  const auto t = classical_transitions(east, SpinConfiguration::parse("110", 2));
  REQUIRE(t.size() == 2);
  CHECK(t[0].site == 0);
  CHECK(t[0].direction == Direction::Down);
  CHECK(t[0].rate == doctest::Approx(0.5));
  CHECK(t[1].site == 2);
  CHECK(t[1].direction == Direction::Up);
  CHECK(t[1].rate == doctest::Approx(0.5));

  const auto single = classical_transitions(kcm(ConstraintKind::Unconstrained, 1, 0.3),
                                            SpinConfiguration::parse("0", 2));
  REQUIRE(single.size() == 1);
  CHECK(single[0].direction == Direction::Up);
  CHECK(single[0].rate == doctest::Approx(0.3));

  CHECK(classical_transitions(east, SpinConfiguration::parse("000", 2)).empty());
  CHECK_THROWS_AS(classical_transitions(east, SpinConfiguration::parse("00", 2)), Error);
}

TEST_CASE("kappa from ratio") {
  CHECK(kappa_from_ratio(0.01) == doctest::Approx(1.0 / 101.0));
  CHECK(kappa_from_ratio(1.0) == doctest::Approx(0.5));
}

TEST_CASE("equilibrium and detailed balance") {
  const auto p2 = classical_equilibrium(kcm(ConstraintKind::Unconstrained, 2, 0.5));
  for (double p : p2) CHECK(p == doctest::Approx(0.25));
  const auto p1 = classical_equilibrium(kcm(ConstraintKind::East, 1, 1.0 / 101.0));
  CHECK(p1[0] == doctest::Approx(100.0 / 101.0));
  CHECK(p1[1] == doctest::Approx(1.0 / 101.0));

  for (auto kind : {ConstraintKind::East, ConstraintKind::FA}) {
    for (int n = 1; n <= 3; ++n) {
      const auto spec = kcm(kind, n, 0.27);
      const auto w = rate_table(spec);
      const auto p = classical_equilibrium(spec);
      for (Eigen::Index a = 0; a < w.rows(); ++a) {
        for (Eigen::Index b = 0; b < w.cols(); ++b) {
          if (a == b) continue;
          CHECK(std::abs(p[a] * w(a, b) - p[b] * w(b, a)) < 1e-13);
        }
      }
      check_detailed_balance(w, p);
    }
  }

  RateTable broken = rate_table(kcm(ConstraintKind::Unconstrained, 1, 0.3));
  broken(0, 1) *= 2.0;
  CHECK_THROWS_AS(check_detailed_balance(broken, {0.7, 0.3}), Error);
}

TEST_CASE("generic jump operators for a single spin") {
  const double lambda = 1.7, kappa = 0.3;
  const auto spec = ClassicalKCMSpec{lambda, kappa, {}, 1};
  const auto w = rate_table(spec);
  const auto p = classical_equilibrium(spec);
  Eigen::VectorXcd psi(2);
  psi << 0.6, Complex(0.0, 0.8);
  const auto jumps = generic_jump_operators(w, p, psi);
  CHECK(jumps.size() == 2);
  const auto h = jump_hermitian_form(jumps, 2);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);
  CHECK(es.eigenvalues()(1) == doctest::Approx(lambda));

  const auto gs = ground_state_vector(p);
  for (const auto& j : jumps) CHECK((j.op * gs).norm() < 1e-14);
  CHECK((hermitian_form(w, p) - similarity_hermitian_form(w, p)).norm() < 1e-14);
}

TEST_CASE("zero-rate pairs emit no operator") {
  const auto spec = kcm(ConstraintKind::East, 2, 0.4);
  const auto w = rate_table(spec);
  const auto p = classical_equilibrium(spec);
  std::size_t positive = 0;
  for (Eigen::Index a = 0; a < w.rows(); ++a)
    for (Eigen::Index b = 0; b < w.cols(); ++b)
      if (a != b && w(a, b) > 0.0) ++positive;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = 1.0;
  CHECK(generic_jump_operators(w, p, psi).size() == positive);
}

TEST_CASE("stationary product state is dark") {
  for (auto kind : {ConstraintKind::East, ConstraintKind::FA}) {
    const QuantumKCMSpec spec{kcm(kind, 5, 0.2), 0.9, {}};
    const auto s = stationary_product_state(spec);
    std::vector<Complex> scratch;
    for (const auto& j : quantum_jump_operators(spec))
      CHECK(squared_norm_after(s, j, scratch) < 1e-26);
  }
  const RydbergSpec ryd{0.7, 4, Boundary::Open, {}};
  const auto r = stationary_product_state(ryd);
  CHECK(expectation_diagonal(r, observables::mean_occupation()) ==
        doctest::Approx(0.49 / 1.49));
}

TEST_CASE("single-site rydberg jump has the expected dark state") {
  const double x = 2.5;
  const auto j = rydberg_jump_operators(RydbergSpec{x, 1, Boundary::Open, {}});
  Eigen::VectorXcd psi(2);
  psi << 1.0, x;
  CHECK((dense_matrix_of(j[0], Basis(1, 2)) * psi).norm() < 1e-14);
}

TEST_CASE("rydberg small-x reduction differs by exactly x") {
  for (auto b : {Boundary::Open, Boundary::Periodic}) {
    for (double x : {1e-3, 0.1, 0.5}) {
      const RydbergSpec spec{x, 3, b, {}};
      const auto ryd = rydberg_jump_operators(spec);
      const auto red = rydberg_kcm_form_operators(spec);
      for (std::size_t k = 0; k < ryd.size(); ++k) {
        const DenseMatrix d =
            dense_matrix_of(ryd[k], spec.basis()) - dense_matrix_of(red[k], spec.basis());
        Eigen::JacobiSVD<DenseMatrix> svd(d);
        CHECK(std::abs(svd.singularValues()(0) - x) < 1e-12);
      }
    }
  }
}

TEST_CASE("a sign error in the bright vector is caught and named") {
  const JumpFactory broken = [](const QuantumKCMSpec& spec) {
    const double k = spec.kcm.kappa;
    Eigen::Vector2cd bv(std::sqrt(k), std::sqrt(1.0 - k));
    const DenseMatrix action = spec.site_unitary() * (bv * bv.adjoint());
    std::vector<JumpOperator> ops;
    for (int s = 0; s < spec.kcm.n_sites; ++s)
      ops.emplace_back(LocalOperator{s, action, spec.kcm.constraint, 1.0}, "J_" + std::to_string(s));
    return ops;
  };
  const auto bad = check_dark_states(broken, VerifyLevel::Fast);
  CHECK_FALSE(bad.passed);
  CHECK(bad.detail.find("quantum east N=1") != std::string::npos);
  CHECK(check_dark_states(quantum_jump_operators, VerifyLevel::Fast).passed);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(kcm(ConstraintKind::East, 0, 0.3).validate(), Error);
  CHECK_THROWS_AS(kcm(ConstraintKind::East, 3, 1.5).validate(), Error);
  CHECK_THROWS_AS((RydbergSpec{-1.0, 2, Boundary::Open, {}}.validate()), Error);
  QuantumKCMSpec q{kcm(ConstraintKind::East, 2, 0.3), 0.5, DenseMatrix::Ones(2, 2)};
  CHECK_THROWS_AS(q.validate(), Error);
}
