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

#include "qkcm/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qkcm/analysis.hpp"
#include "qkcm/classical_engine.hpp"
#include "qkcm/error.hpp"
#include "qkcm/lindblad.hpp"
#include "qkcm/quantum_engine.hpp"
#include "qkcm/reference_solutions.hpp"

namespace qkcm {

namespace {

constexpr double kPi = std::numbers::pi;

QuantumKCMSpec kcm_spec(ConstraintKind kind, int n, double theta, double kappa_ratio = 0.01) {
  QuantumKCMSpec s;
  s.kcm.kappa = kappa_from_ratio(kappa_ratio);
  s.kcm.n_sites = n;
  s.kcm.constraint = {kind, Boundary::Periodic};
  s.theta = theta;
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Fraction of grid points where |a - b| <= 3 sigma (or 1e-9 where sigma = 0).
double fraction_within(const TimeSeries& sampled, const std::vector<double>& exact) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const double se = sampled.stderrs ? (*sampled.stderrs)[i] : 0.0;
    if (std::abs(sampled.values[i] - exact[i]) <= 3.0 * se + 1e-9) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(sampled.size());
}

CheckResult hermitian_forms(VerifyLevel) {
  CheckResult r{"hermitian_form", true, {}};
  double worst = 0.0;
  for (auto kind : {ConstraintKind::Unconstrained, ConstraintKind::East, ConstraintKind::FA}) {
    for (int n = 2; n <= 4; ++n) {
      ClassicalKCMSpec spec{1.0, 0.3, {kind, Boundary::Periodic}, n};
      const auto p_eq = classical_equilibrium(spec);
      const DenseMatrix h = hermitian_form(rate_table(spec), p_eq, 1e-10);
      const double gs = (h * ground_state_vector(p_eq)).cwiseAbs().maxCoeff();
      worst = std::max(worst, gs);
      if (gs > 1e-10) {
        r.passed = false;
        r.detail = spec.describe() + ": H|gs> residual " + fmt(gs);
        return r;
      }
    }
  }
  r.detail = "similarity and jump forms agree; max H|gs> residual " + fmt(worst);
  return r;
}

CheckResult dense_stationarity(VerifyLevel level) {
  CheckResult r{"dense_stationarity", true, {}};
  const int n_max = level == VerifyLevel::Fast ? 4 : 6;
  double worst = 0.0;
  for (auto kind : {ConstraintKind::East, ConstraintKind::FA}) {
    for (int n = 2; n <= n_max; n += 2) {
      const auto spec = kcm_spec(kind, n, kPi / 2);
      const auto rho0 = DensityMatrix::from_pure(stationary_product_state(spec));
      const auto rhos = lindblad_solve_dense(quantum_jump_operators(spec), rho0, {0.0, 100.0});
      const double drift = (rhos.back().entries() - rho0.entries()).cwiseAbs().maxCoeff();
      worst = std::max(worst, drift);
      if (drift >= 1e-9) {
        r.passed = false;
        r.detail = spec.describe() + ": drift " + fmt(drift);
        return r;
      }
    }
  }
  r.detail = "max drift over t = 100: " + fmt(worst);
  return r;
}

CheckResult diagonal_matching(VerifyLevel) {
  CheckResult r{"diagonal_observables", true, {}};
  for (auto kind : {ConstraintKind::East, ConstraintKind::FA}) {
    const auto spec = kcm_spec(kind, 4, kPi / 3, 0.25);
    const double k = spec.kcm.kappa;
    const auto psi = stationary_product_state(spec);
    const double n = expectation_diagonal(psi, observables::mean_occupation());
    const double nn = expectation_diagonal(psi, observables::density_correlation(0, 2));
    const double err = std::max(std::abs(n - k), std::abs(nn - k * k));
    if (err >= 1e-12) {
      r.passed = false;
      r.detail = spec.describe() + ": deviation " + fmt(err);
      return r;
    }
  }
  r.detail = "<n> = kappa and <n_j n_k> = kappa^2";
  return r;
}

CheckResult single_spin_rates(VerifyLevel) {
  CheckResult r{"single_spin_timescales", true, {}};
  std::ostringstream detail;
  for (double theta : {kPi / 6, kPi / 4, kPi / 2}) {
    const auto spec = kcm_spec(ConstraintKind::Unconstrained, 1, theta);
    const auto grid = make_time_grid(GridKind::Linear, 30.0, 301);
    const auto rhos = lindblad_solve_dense(quantum_jump_operators(spec),
                                           DensityMatrix::from_pure(PureState::basis_state(
                                               SpinConfiguration::parse("1", 2))),
                                           grid);
    TimeSeries n;
    n.times = grid;
    for (const auto& rho : rhos) n.values.push_back(mean_excitation(rho));
    const auto [r1, r2] = fit_two_exponential(n, spec.kcm.kappa);
    const auto tau = reference::quantum_timescales(theta, 1.0);
    double e1 = 1.0 / tau.tau_q, e2 = 1.0 / tau.tau_q_prime;
    if (e1 > e2) std::swap(e1, e2);
    const double err = std::max(std::abs(r1 - e1) / e1, std::abs(r2 - e2) / e2);
    detail << "theta=" << fmt(theta) << ": {" << fmt(r1) << ", " << fmt(r2) << "} ";
    if (err > 0.01) r.passed = false;
  }
  r.detail = detail.str();
  return r;
}

CheckResult mixed_stationary(VerifyLevel) {
  CheckResult r{"theta_zero_mixed_state", true, {}};
  const auto spec = kcm_spec(ConstraintKind::Unconstrained, 1, 0.0);
  const LindbladGenerator gen(quantum_jump_operators(spec), spec.basis());
  const double d =
      gen.apply(DensityMatrix::maximally_mixed(spec.basis()).entries()).cwiseAbs().maxCoeff();
  r.passed = d < 1e-10;
  r.detail = "|L(I/2)| = " + fmt(d);
  return r;
}

CheckResult unraveling(VerifyLevel level) {
  CheckResult r{"unraveling_equivalence", true, {}};
  const int n = 4;
  const std::size_t n_traj = level == VerifyLevel::Fast ? 1000 : 10000;
  std::ostringstream detail;
  for (auto kind : {ConstraintKind::FA, ConstraintKind::East}) {
    const auto spec = kcm_spec(kind, n, kPi / 2);
    const auto jumps = quantum_jump_operators(spec);
    const auto grid = make_time_grid(GridKind::Log, 100.0, 31);
    const auto init = PureState::basis_state(SpinConfiguration::uniform(n, 2, 1));
    EnsembleOptions opts;
    opts.keep_trajectories = 0;
    opts.keep_events = false;
    const auto ens = quantum_ensemble(jumps, init, grid, n_traj, 2024, {}, opts);
    const auto rhos = lindblad_solve_dense(jumps, DensityMatrix::from_pure(init), grid);
    std::vector<double> dn, dx;
    for (const auto& rho : rhos) {
      dn.push_back(mean_excitation(rho));
      dx.push_back(mean_sigma_x(rho));
    }
    const double fn = fraction_within(ens.density, dn);
    const double fx = fraction_within(ens.sigma_x, dx);
    detail << to_string(kind) << ": " << fmt(100 * fn) << "% / " << fmt(100 * fx) << "% ";
    if (fn < 0.95 || fx < 0.95) r.passed = false;
  }
  r.detail = detail.str() + "of grid points within 3 sigma (n, sigma_x)";
  return r;
}

CheckResult rydberg_formula(VerifyLevel) {
  CheckResult r{"rydberg_single_site", true, {}};
  double worst = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    RydbergSpec spec;
    spec.x = x;
    const auto grid = make_time_grid(GridKind::Linear, 20.0, 81);
    const auto rhos = lindblad_solve_dense(
        rydberg_jump_operators(spec),
        DensityMatrix::from_pure(PureState::basis_state(SpinConfiguration::parse("0", 2))), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(mean_excitation(rhos[i]) -
                                       reference::rydberg_quantum_density(grid[i], x)));
    }
  }
  r.passed = worst < 1e-6;
  r.detail = "max |dense - closed form| = " + fmt(worst);
  return r;
}

CheckResult small_x_reduction(VerifyLevel) {
  CheckResult r{"small_x_reduction", true, {}};
  double worst = 0.0;
  for (double x : {1e-3, 1e-2, 1e-1}) {
    RydbergSpec spec;
    spec.x = x;
    spec.n_sites = 3;
    const auto a = rydberg_jump_operators(spec);
    const auto b = rydberg_kcm_form_operators(spec);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const DenseMatrix d =
          dense_matrix_of(a[k], spec.basis()) - dense_matrix_of(b[k], spec.basis());
      const double norm = Eigen::JacobiSVD<DenseMatrix>(d).singularValues()(0);
      worst = std::max(worst, std::abs(norm - x));
    }
  }
  r.passed = worst < 1e-12;
  r.detail = "max | ||J_ryd - J_kcm|| - x | = " + fmt(worst);
  return r;
}

CheckResult classical_regression(VerifyLevel level) {
  CheckResult r{"classical_engine", true, {}};
  ClassicalKCMSpec single{1.0, 1.0 / 101.0, {}, 1};
  const auto w = build_master_operator(single);
  const auto p = evolve_distribution(w, point_distribution(single.basis(), 1), {0.0, 1.0});
  const double err = std::abs(p.back()(1) - reference::classical_density(1.0, 1.0, single.kappa, 1.0));

  ClassicalKCMSpec east{1.0, 0.3, {ConstraintKind::East, Boundary::Periodic}, 4};
  const auto grid = make_time_grid(GridKind::Log, 50.0, 31);
  const auto init = SpinConfiguration::uniform(4, 2, 1);
  const auto ens = classical_ensemble(east, init, grid, level == VerifyLevel::Fast ? 2000 : 10000, 7);
  const auto dists =
      evolve_distribution_spectral(build_master_operator(east), point_distribution(east.basis(), init.ordinal()), grid);
  const auto exact = distribution_density(east.basis(), dists, grid, "density");
  const double frac = fraction_within(ens.density, exact.values);
  r.passed = err < 1e-8 && frac >= 0.95;
  r.detail = "single-spin error " + fmt(err) + ", Gillespie within 3 sigma at " +
             fmt(100 * frac) + "% of points";
  return r;
}

CheckResult three_level(VerifyLevel) {
  CheckResult r{"three_level_vs_effective", true, {}};
  RydbergSpec spec;
  spec.three_level = ThreeLevelParams{1.0, 1.0, 20.0, 400.0};
  spec.x = 1.0;
  const double factor = rescaled_time_factor(*spec.three_level);
  const auto grid = make_time_grid(GridKind::Linear, 20.0, 41);
  std::vector<double> physical;
  for (double t : grid) physical.push_back(t / factor);
  const auto rhos = three_level_lindblad(
      spec, DensityMatrix::from_pure(PureState::basis_state(SpinConfiguration::parse("0", 3))),
      physical);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(mean_excitation(rhos[i]) -
                                     reference::rydberg_quantum_density(grid[i], 1.0)));
  }
  const double rel = worst / spec.kappa();
  r.passed = rel <= 0.05;
  r.detail = "max deviation " + fmt(100 * rel) + "% of the stationary density";
  return r;
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace

CheckResult check_dark_states(const JumpFactory& factory, VerifyLevel level) {
  return guarded("dark_states", [&] {
    CheckResult r{"dark_states", true, {}};
    const int n_max = level == VerifyLevel::Fast ? 4 : 10;
    double worst = 0.0;
    std::vector<Complex> scratch;
    for (auto kind : {ConstraintKind::East, ConstraintKind::FA}) {
      for (double theta : {kPi / 20, kPi / 4, kPi / 2}) {
        for (int n = 1; n <= n_max; ++n) {
          const auto spec = kcm_spec(kind, n, theta);
          const auto psi = stationary_product_state(spec);
          for (const auto& j : factory(spec)) {
            const double norm = std::sqrt(squared_norm_after(psi, j, scratch));
            worst = std::max(worst, norm);
            if (norm >= 1e-12) {
              r.passed = false;
              r.detail = spec.describe() + ": ||" + j.label + " |S>|| = " + fmt(norm);
              return r;
            }
          }
        }
      }
    }
    r.detail = "max ||J_k |S>|| = " + fmt(worst);
    return r;
  });
}

std::vector<CheckResult> verify_suite(VerifyLevel level,
                                      const std::function<void(const CheckResult&)>& on_result) {
  using Check = CheckResult (*)(VerifyLevel);
  const std::vector<std::pair<const char*, Check>> checks = {
      {"hermitian_form", hermitian_forms},
      {"dense_stationarity", dense_stationarity},
      {"diagonal_observables", diagonal_matching},
      {"single_spin_timescales", single_spin_rates},
      {"theta_zero_mixed_state", mixed_stationary},
      {"rydberg_single_site", rydberg_formula},
      {"small_x_reduction", small_x_reduction},
      {"classical_engine", classical_regression},
      {"unraveling_equivalence", unraveling},
  };
  std::vector<CheckResult> results;
  auto record = [&](CheckResult c) {
    if (on_result) on_result(c);
    results.push_back(std::move(c));
  };
  record(check_dark_states(quantum_jump_operators, level));
  for (const auto& [name, check] : checks) {
    record(guarded(name, [&, check = check] { return check(level); }));
  }
  if (level == VerifyLevel::Full) record(guarded("three_level_vs_effective", [&] { return three_level(level); }));
  return results;
}

}  // namespace qkcm
