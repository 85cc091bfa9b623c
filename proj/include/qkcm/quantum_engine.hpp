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
#include <memory>
#include <optional>
#include <vector>

#include "qkcm/model_zoo.hpp"
#include "qkcm/time_series.hpp"

namespace qkcm {

enum class NoJumpBackend { Auto, Spectral, Krylov };

// How a one-site coherence enters <sigma^x>: the Pauli operator, or half of
// it (Re of the g-r coherence, bounded by 1/2) for the Rydberg models.
enum class CoherenceConvention { Pauli, Half };

struct StepControl {
  NoJumpBackend backend = NoJumpBackend::Auto;
  // Auto picks the eigendecomposition of G up to this many basis states.
  std::size_t spectral_cap = 2048;
  // Jump time is refined until |norm^2 - r| <= crossing_tolerance * r.
  double crossing_tolerance = 1e-10;
  double krylov_tolerance = 1e-8;
  int krylov_dim = 30;
  // Eigenvalues of G below kernel_threshold * max(1, ||G||) count as exactly 0.
  double kernel_threshold = 1e-12;
  // Keep jumping past t_max until the trajectory reaches a dark state, so the
  // asymptotic observables are exact. Bounded by dark_horizon * t_max.
  bool run_to_dark = false;
  double dark_horizon = 1e6;
  std::size_t max_jumps = 5'000'000;
  CoherenceConvention coherence = CoherenceConvention::Pauli;
};

struct JumpEvent {
  double time = 0.0;
  int channel = 0;
};

struct ObservableSnapshot {
  double density = 0.0;
  double sigma_x = 0.0;
  std::vector<double> site_density;
};

enum class TrajectoryEnd { ReachedTmax, ConvergedDark, HorizonExhausted };

struct QuantumTrajectory {
  std::uint64_t seed = 0;
  std::vector<double> grid;
  std::vector<JumpEvent> events;
  std::vector<double> density;                   // per grid point
  std::vector<double> sigma_x;                   // per grid point
  std::vector<std::vector<double>> site_density; // [grid point][site]
  TrajectoryEnd end = TrajectoryEnd::ReachedTmax;
  double dark_time = 0.0;
  // Observables of the limiting dark state once no further jump can occur.
  std::optional<ObservableSnapshot> asymptotic;

  bool converged_dark() const noexcept { return end == TrajectoryEnd::ConvergedDark; }
};

// Quantum-jump unraveling of the purely dissipative Lindblad equation. The
// no-jump evolution exp(-G t / 2), G = sum_k J_k^dag J_k, is represented
// exactly through the eigenbasis of G (Spectral) or piecewise through Lanczos
// subspaces built from on-the-fly J applications (Krylov).
class QuantumJumpSimulator {
 public:
  QuantumJumpSimulator(std::vector<JumpOperator> jumps, const Basis& basis,
                       StepControl control = {});
  ~QuantumJumpSimulator();
  QuantumJumpSimulator(QuantumJumpSimulator&&) noexcept;
  QuantumJumpSimulator& operator=(QuantumJumpSimulator&&) noexcept;

  const Basis& basis() const noexcept { return basis_; }
  const StepControl& control() const noexcept { return control_; }
  NoJumpBackend backend() const noexcept { return backend_; }
  std::size_t n_channels() const noexcept { return jumps_.size(); }

  // Samples observables at grid (grid.back() is t_max). Deterministic in seed.
  QuantumTrajectory run(const PureState& init, const std::vector<double>& grid,
                        std::uint64_t seed) const;

  ObservableSnapshot observe(std::span<const Complex> normalized) const;

 private:
  struct Spectral;
  class Segment;

  Basis basis_;
  std::vector<JumpOperator> jumps_;
  std::vector<JumpOperator> adjoints_;
  StepControl control_;
  NoJumpBackend backend_;
  std::unique_ptr<Spectral> spectral_;
  double generator_scale_ = 1.0;

  Segment make_segment(std::span<const Complex> psi) const;
  void apply_generator(std::span<const Complex> in, std::span<Complex> out,
                       std::vector<Complex>& scratch) const;
};

QuantumTrajectory qjmc_trajectory(const std::vector<JumpOperator>& jumps, const PureState& init,
                                  const std::vector<double>& grid, std::uint64_t seed,
                                  const StepControl& control = {});

struct QuantumEnsemble {
  TimeSeries density;
  TimeSeries sigma_x;
  std::vector<TimeSeries> site_density;
  std::size_t n_trajectories = 0;
  std::size_t converged_dark = 0;
  // Mean observables of the limiting dark states, when every trajectory got there.
  std::optional<ObservableSnapshot> asymptotic;
  std::vector<std::vector<JumpEvent>> events;   // every trajectory, index order
  std::vector<QuantumTrajectory> kept;          // first keep_trajectories in full
};

struct EnsembleOptions {
  std::size_t keep_trajectories = 1;
  bool keep_events = true;
  unsigned threads = 0;
};

QuantumEnsemble quantum_ensemble(const QuantumJumpSimulator& simulator, const PureState& init,
                                 const std::vector<double>& grid, std::size_t n_trajectories,
                                 std::uint64_t master_seed, const EnsembleOptions& options = {});

QuantumEnsemble quantum_ensemble(const std::vector<JumpOperator>& jumps, const PureState& init,
                                 const std::vector<double>& grid, std::size_t n_trajectories,
                                 std::uint64_t master_seed, const StepControl& control = {},
                                 const EnsembleOptions& options = {});

struct WaitingTimeHistogram {
  std::vector<double> time_edges;
  std::vector<double> wait_edges;
  // [time window][wait bin]: raw counts, and counts divided by the window total.
  std::vector<std::vector<double>> counts;
  std::vector<std::vector<double>> normalized;
  // Counts over all windows per wait bin.
  std::vector<double> marginal;
  std::size_t total = 0;
};

// Bins every inter-jump interval by the time of the jump that opens it and by
// its duration. Intervals outside the edges are dropped.
WaitingTimeHistogram waiting_time_distribution(
    const std::vector<std::vector<JumpEvent>>& trajectories,
    const std::vector<double>& time_window_edges, const std::vector<double>& wait_bin_edges);

std::vector<double> waiting_times(const std::vector<std::vector<JumpEvent>>& trajectories);

}  // namespace qkcm
