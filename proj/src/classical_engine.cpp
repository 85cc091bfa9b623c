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

#include "qkcm/classical_engine.hpp"

#include <cmath>
#include <bit>
#include <limits>

#include "qkcm/error.hpp"
#include "qkcm/parallel.hpp"
#include "qkcm/rng.hpp"

namespace qkcm {

double ClassicalMasterOperator::max_column_sum_error() const {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < matrix.outerSize(); ++c) {
    double sum = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, c); it; ++it) sum += it.value();
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

ClassicalMasterOperator build_master_operator(const ClassicalKCMSpec& spec, std::size_t cap) {
  spec.validate();
  const Basis basis = spec.basis();
  require(basis.size() <= cap, ErrorCode::CapExceeded,
          "master operator of " + std::to_string(basis.size()) + " states exceeds cap " +
              std::to_string(cap));
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    double escape = 0.0;
    for (const auto& tr : classical_transitions(spec, c)) {
      triplets.emplace_back(static_cast<Eigen::Index>(tr.target), static_cast<Eigen::Index>(c),
                            tr.rate);
      escape += tr.rate;
    }
    if (escape > 0.0) {
      triplets.emplace_back(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c), -escape);
    }
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  ClassicalMasterOperator w{spec, Eigen::SparseMatrix<double>(dim, dim)};
  w.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return w;
}

namespace {

void check_distribution(const Eigen::VectorXd& p, double t) {
  const double total = p.sum();
  const double lowest = p.minCoeff();
  if (std::abs(total - 1.0) > 1e-9 || lowest < -1e-9) {
    fail(ErrorCode::NotConverged, "distribution at t=" + std::to_string(t) +
                                      " violates probability conservation (sum " +
                                      std::to_string(total) + ", min " +
                                      std::to_string(lowest) + ")");
  }
}

void check_initial(const ClassicalMasterOperator& w, const Eigen::VectorXd& p0) {
  require(static_cast<std::size_t>(p0.size()) == w.dim(), ErrorCode::DimensionMismatch,
          "initial distribution has wrong length");
  require(p0.minCoeff() >= 0.0 && std::abs(p0.sum() - 1.0) <= 1e-12,
          ErrorCode::InvalidArgument, "initial distribution must be nonnegative and sum to 1");
}

}  // namespace

std::vector<Eigen::VectorXd> evolve_distribution(const ClassicalMasterOperator& w,
                                                 const Eigen::VectorXd& p0,
                                                 const std::vector<double>& times,
                                                 const OdeOptions& options) {
  check_initial(w, p0);
  std::vector<Eigen::VectorXd> out(times.size());
  auto rhs = [&w](double, const Eigen::VectorXd& p, Eigen::VectorXd& dp) {
    dp.noalias() = w.matrix * p;
  };
  integrate_dopri5(
      rhs, Eigen::VectorXd(p0), times,
      [&](std::size_t i, const Eigen::VectorXd& p) {
        check_distribution(p, times[i]);
        out[i] = p;
      },
      options);
  return out;
}

std::vector<Eigen::VectorXd> evolve_distribution_spectral(const ClassicalMasterOperator& w,
                                                          const Eigen::VectorXd& p0,
                                                          const std::vector<double>& times) {
  check_initial(w, p0);
  const std::vector<double> p_eq = classical_equilibrium(w.spec, w.dim());
  const auto dim = static_cast<Eigen::Index>(w.dim());
  Eigen::VectorXd sq(dim), inv_sq(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    sq(c) = std::sqrt(p_eq[c]);
    inv_sq(c) = 1.0 / sq(c);
  }
  const Eigen::MatrixXd wd = w.dense();
  const Eigen::MatrixXd h = -(inv_sq.asDiagonal() * wd * sq.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (h + h.transpose()));
  require(solver.info() == Eigen::Success, ErrorCode::Numerical,
          "eigendecomposition of the symmetrized master operator failed");
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd rates = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd coeff = v.transpose() * inv_sq.cwiseProduct(p0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t == 0.0) {
      out.push_back(p0);
      continue;
    }
    const Eigen::VectorXd decayed = coeff.cwiseProduct((-rates * t).array().exp().matrix());
    Eigen::VectorXd p = sq.cwiseProduct(v * decayed);
    check_distribution(p, t);
    out.push_back(std::move(p));
  }
  return out;
}

Eigen::VectorXd point_distribution(const Basis& basis, std::size_t ordinal) {
  require(ordinal < basis.size(), ErrorCode::OutOfRange, "ordinal outside basis");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  p(static_cast<Eigen::Index>(ordinal)) = 1.0;
  return p;
}

TimeSeries distribution_density(const Basis& basis, const std::vector<Eigen::VectorXd>& dists,
                                const std::vector<double>& times, std::string label) {
  const auto occ = observables::mean_occupation();
  TimeSeries s{times, std::vector<double>(times.size()), std::nullopt, std::move(label)};
  for (std::size_t i = 0; i < dists.size(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < basis.size(); ++c) {
      acc += dists[i](static_cast<Eigen::Index>(c)) * occ(basis, c);
    }
    s.values[i] = acc;
  }
  return s;
}

std::vector<TimeSeries> distribution_site_density(const Basis& basis,
                                                  const std::vector<Eigen::VectorXd>& dists,
                                                  const std::vector<double>& times) {
  std::vector<TimeSeries> out;
  for (int k = 0; k < basis.n_sites(); ++k) {
    TimeSeries s{times, std::vector<double>(times.size()), std::nullopt,
                 "site_" + std::to_string(k)};
    for (std::size_t i = 0; i < dists.size(); ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < basis.size(); ++c) {
        if (basis.level(c, k) == 1) acc += dists[i](static_cast<Eigen::Index>(c));
      }
      s.values[i] = acc;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::size_t> ClassicalTrajectory::ordinals_at(const std::vector<double>& grid) const {
  std::vector<std::size_t> out(grid.size());
  std::size_t ordinal = initial.ordinal();
  std::size_t e = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (e < events.size() && events[e].time <= grid[i]) {
      ordinal ^= std::size_t{1} << events[e].site;
      ++e;
    }
    out[i] = ordinal;
  }
  return out;
}

ClassicalTrajectory gillespie_trajectory(const ClassicalKCMSpec& spec,
                                         const SpinConfiguration& init, double t_max,
                                         std::uint64_t seed) {
  spec.validate();
  require(t_max > 0.0, ErrorCode::InvalidArgument, "t_max must be positive");
  require(init.local_dim() == 2 && init.n_sites() == spec.n_sites, ErrorCode::DimensionMismatch,
          "initial configuration does not match " + spec.describe());
  const Basis basis = spec.basis();
  const int n = spec.n_sites;

  ClassicalTrajectory traj;
  traj.seed = seed;
  traj.initial = init;
  traj.t_max = t_max;

  Rng rng(seed);
  std::size_t config = init.ordinal();
  std::vector<double> rates(n);
  auto site_rate = [&](int k) {
    if (!spec.constraint.allows(basis, config, k)) return 0.0;
    return basis.level(config, k) == 0 ? spec.lambda * spec.kappa
                                       : spec.lambda * (1.0 - spec.kappa);
  };
  for (int k = 0; k < n; ++k) rates[k] = site_rate(k);

  double t = 0.0;
  for (;;) {
    double total = 0.0;
    for (double r : rates) total += r;
    if (total <= 0.0) {
      traj.halted = true;
      traj.halt_time = t;
      break;
    }
    t += -std::log(rng.uniform()) / total;
    if (t > t_max) break;
    const double pick = rng.uniform() * total;
    double acc = 0.0;
    int site = n - 1;
    for (int k = 0; k < n; ++k) {
      acc += rates[k];
      if (pick < acc) {
        site = k;
        break;
      }
    }
    while (rates[site] == 0.0) --site;  // guards the pick == total rounding edge
    const Direction dir = basis.level(config, site) == 0 ? Direction::Up : Direction::Down;
    config ^= std::size_t{1} << site;
    traj.events.push_back({t, site, dir});
    for (int d = -1; d <= 1; ++d) rates[((site + d) % n + n) % n] = site_rate(((site + d) % n + n) % n);
  }
  return traj;
}

ClassicalEnsemble classical_ensemble(const ClassicalKCMSpec& spec,
                                     const InitialSampler& sample_initial,
                                     const std::vector<double>& grid, std::size_t n_trajectories,
                                     std::uint64_t master_seed, unsigned threads) {
  require(n_trajectories >= 1, ErrorCode::InvalidArgument, "need at least one trajectory");
  require(!grid.empty(), ErrorCode::InvalidArgument, "empty time grid");
  const int n = spec.n_sites;
  const std::size_t points = grid.size();
  const double t_max = grid.back() > 0.0 ? grid.back() : 1.0;
  const Basis basis = spec.basis();

  SeriesAccumulator density(points);
  std::vector<SeriesAccumulator> sites(n, SeriesAccumulator(points));
  std::size_t halted = 0;
  std::optional<ClassicalTrajectory> first;

  constexpr std::size_t kBatch = 256;
  std::vector<std::vector<std::size_t>> batch_ordinals;
  std::vector<char> batch_halted;
  for (std::size_t start = 0; start < n_trajectories; start += kBatch) {
    const std::size_t count = std::min(kBatch, n_trajectories - start);
    batch_ordinals.assign(count, {});
    batch_halted.assign(count, 0);
    parallel_for(
        count,
        [&](std::size_t j) {
          const std::uint64_t seed = substream_seed(master_seed, start + j);
          Rng init_rng(substream_seed(seed, 0x1417));
          auto traj = gillespie_trajectory(spec, sample_initial(init_rng), t_max, seed);
          batch_ordinals[j] = traj.ordinals_at(grid);
          batch_halted[j] = traj.halted;
          if (start + j == 0) first = std::move(traj);
        },
        threads);
    std::vector<double> sample(points), site_sample(points);
    for (std::size_t j = 0; j < count; ++j) {
      const auto& ords = batch_ordinals[j];
      for (std::size_t i = 0; i < points; ++i) {
        sample[i] = static_cast<double>(std::popcount(ords[i])) / n;
      }
      density.add(sample);
      for (int k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < points; ++i) site_sample[i] = basis.level(ords[i], k);
        sites[k].add(site_sample);
      }
      halted += batch_halted[j] ? 1 : 0;
    }
  }

  ClassicalEnsemble out;
  out.density = density.series(grid, "density");
  for (int k = 0; k < n; ++k) out.site_density.push_back(sites[k].series(grid, "site_" + std::to_string(k)));
  out.n_trajectories = n_trajectories;
  out.halted = halted;
  out.first = std::move(first);
  return out;
}

ClassicalEnsemble classical_ensemble(const ClassicalKCMSpec& spec, const SpinConfiguration& init,
                                     const std::vector<double>& grid, std::size_t n_trajectories,
                                     std::uint64_t master_seed, unsigned threads) {
  return classical_ensemble(
      spec, [&init](Rng&) { return init; }, grid, n_trajectories, master_seed, threads);
}

InitialSampler bernoulli_sampler(int n_sites, double kappa) {
  return [n_sites, kappa](Rng& rng) {
    std::vector<int> levels(n_sites);
    for (auto& l : levels) l = rng.uniform() < kappa ? 1 : 0;
    return SpinConfiguration(std::move(levels), 2);
  };
}

}  // namespace qkcm
