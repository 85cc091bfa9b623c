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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qkcm/model_zoo.hpp"
#include "qkcm/ode.hpp"
#include "qkcm/rng.hpp"
#include "qkcm/time_series.hpp"

namespace qkcm {

// dP/dt = W P with W(to, from) = rate(from -> to) and W(c, c) = -R_c.
struct ClassicalMasterOperator {
  ClassicalKCMSpec spec;
  Eigen::SparseMatrix<double> matrix;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
  double max_column_sum_error() const;
};

ClassicalMasterOperator build_master_operator(const ClassicalKCMSpec& spec,
                                              std::size_t cap = kDefaultOracleCap);

// Adaptive Dormand-Prince integration; outputs are checked for probability
// conservation (sum within 1e-9, entries >= -1e-9).
std::vector<Eigen::VectorXd> evolve_distribution(const ClassicalMasterOperator& w,
                                                 const Eigen::VectorXd& p0,
                                                 const std::vector<double>& times,
                                                 const OdeOptions& options = {});

// Exact propagation through the eigendecomposition of the symmetrized
// generator; suited to long, stiff horizons at oracle scale.
std::vector<Eigen::VectorXd> evolve_distribution_spectral(const ClassicalMasterOperator& w,
                                                          const Eigen::VectorXd& p0,
                                                          const std::vector<double>& times);

Eigen::VectorXd point_distribution(const Basis& basis, std::size_t ordinal);

// <n(t)> and <n_k(t)> from a sequence of distributions.
TimeSeries distribution_density(const Basis& basis, const std::vector<Eigen::VectorXd>& dists,
                                const std::vector<double>& times, std::string label);
std::vector<TimeSeries> distribution_site_density(const Basis& basis,
                                                  const std::vector<Eigen::VectorXd>& dists,
                                                  const std::vector<double>& times);

struct ClassicalEvent {
  double time = 0.0;
  int site = 0;
  Direction direction = Direction::Up;
};

struct ClassicalTrajectory {
  std::uint64_t seed = 0;
  SpinConfiguration initial{std::vector<int>{0}, 2};
  std::vector<ClassicalEvent> events;
  double t_max = 0.0;
  // Set when an absorbing configuration (zero escape rate) was reached.
  bool halted = false;
  double halt_time = 0.0;

  // Configuration ordinal at each grid time (piecewise constant in time).
  std::vector<std::size_t> ordinals_at(const std::vector<double>& grid) const;
};

ClassicalTrajectory gillespie_trajectory(const ClassicalKCMSpec& spec,
                                         const SpinConfiguration& init, double t_max,
                                         std::uint64_t seed);

struct ClassicalEnsemble {
  TimeSeries density;
  std::vector<TimeSeries> site_density;
  std::size_t n_trajectories = 0;
  std::size_t halted = 0;
  // Trajectory 0 in full.
  std::optional<ClassicalTrajectory> first;
};

// Trajectory i uses substream_seed(master_seed, i); reduction runs in index
// order, so results do not depend on the thread count.
ClassicalEnsemble classical_ensemble(const ClassicalKCMSpec& spec, const SpinConfiguration& init,
                                     const std::vector<double>& grid, std::size_t n_trajectories,
                                     std::uint64_t master_seed, unsigned threads = 0);

// Draws the initial configuration of each trajectory from its own substream.
using InitialSampler = std::function<SpinConfiguration(Rng&)>;

ClassicalEnsemble classical_ensemble(const ClassicalKCMSpec& spec,
                                     const InitialSampler& sample_initial,
                                     const std::vector<double>& grid, std::size_t n_trajectories,
                                     std::uint64_t master_seed, unsigned threads = 0);

// Independent sites, each excited with probability kappa.
InitialSampler bernoulli_sampler(int n_sites, double kappa);

}  // namespace qkcm
