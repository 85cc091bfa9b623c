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

#include "qkcm/quantum_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qkcm/error.hpp"
#include "qkcm/parallel.hpp"
#include "qkcm/rng.hpp"

namespace qkcm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

struct QuantumJumpSimulator::Spectral {
  // Real symmetric G (real jump operators) keeps real eigenvectors, which
  // halves the cost of every change of basis.
  bool real = false;
  Eigen::MatrixXd real_vectors;
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd rates;
};

namespace {

// Real matrix times complex vector as two matrix-vector products.
template <typename Matrix>
void real_times(const Matrix& m, const Eigen::Ref<const Eigen::VectorXcd>& v,
                Eigen::VectorXcd& out) {
  const Eigen::VectorXd re = m * v.real();
  out.resize(re.size());
  out.real() = re;
  // Real states stay real under real jump operators; skip the zero half.
  if (v.imag().cwiseAbs().maxCoeff() == 0.0) {
    out.imag().setZero();
  } else {
    out.imag() = m * v.imag();
  }
}

}  // namespace

// psi(tau) = basis * (exp(-rates tau / 2) .* coeffs) for tau in [0, horizon].
class QuantumJumpSimulator::Segment {
 public:
  Segment(const Eigen::MatrixXd* real_basis, const Eigen::MatrixXcd* shared_basis,
          Eigen::MatrixXcd owned_basis, Eigen::VectorXd rates, Eigen::VectorXcd coeffs,
          double horizon)
      : real_(real_basis),
        shared_(shared_basis),
        owned_(std::move(owned_basis)),
        rates_(std::move(rates)),
        coeffs_(std::move(coeffs)),
        horizon_(horizon) {
    weights_ = coeffs_.cwiseAbs2();
    asymptote_ = 0.0;
    for (Eigen::Index i = 0; i < rates_.size(); ++i) {
      if (rates_(i) == 0.0) asymptote_ += weights_(i);
    }
  }

  double horizon() const noexcept { return horizon_; }
  double asymptote() const noexcept { return asymptote_; }

  double norm2(double tau) const {
    double value = 0.0, slope = 0.0;
    norm2_and_derivative(tau, value, slope);
    return value;
  }

  void norm2_and_derivative(double tau, double& value, double& slope) const {
    value = 0.0;
    slope = 0.0;
    for (Eigen::Index i = 0; i < rates_.size(); ++i) {
      const double arg = rates_(i) * tau;
      if (arg > 745.0 || weights_(i) == 0.0) continue;
      const double term = weights_(i) * std::exp(-arg);
      value += term;
      slope -= rates_(i) * term;
    }
  }

  void state(double tau, Eigen::VectorXcd& out) const {
    Eigen::VectorXcd decayed(coeffs_.size());
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
      decayed(i) = coeffs_(i) * std::exp(-0.5 * rates_(i) * tau);
    }
    to_configuration(decayed, out);
  }

  // Limiting state: projection onto the zero-rate modes.
  void asymptotic_state(Eigen::VectorXcd& out) const {
    Eigen::VectorXcd kept = Eigen::VectorXcd::Zero(coeffs_.size());
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
      if (rates_(i) == 0.0) kept(i) = coeffs_(i);
    }
    to_configuration(kept, out);
  }

  // Smallest tau in [0, limit] with norm2(tau) = target; +inf when the
  // squared norm stays above target on the whole interval.
  double crossing(double target, double limit, double rel_tol) const {
    if (norm2(0.0) <= target) return 0.0;
    double hi = limit;
    if (!std::isfinite(hi)) {
      if (asymptote_ >= target) return kInf;
      hi = 1.0;
      while (norm2(hi) > target) {
        hi *= 2.0;
        if (!std::isfinite(hi)) return kInf;
      }
    } else if (norm2(hi) > target) {
      return kInf;
    }
    // Newton on log norm2, which is convex and much closer to linear than
    // norm2 itself; safeguarded by the bracket [lo, hi].
    double lo = 0.0;
    double tau = 0.0;
    const double log_target = std::log(target);
    for (int iter = 0; iter < 400; ++iter) {
      double value = 0.0, slope = 0.0;
      norm2_and_derivative(tau, value, slope);
      const double f = value - target;
      if (std::abs(f) <= rel_tol * target) return tau;
      if (f > 0.0) lo = tau; else hi = tau;
      if (hi - lo <= 1e-15 * hi) return hi;
      double next = value > 0.0 && slope < 0.0
                        ? tau - (std::log(value) - log_target) * value / slope
                        : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      tau = next;
    }
    return tau;
  }

 private:
  void to_configuration(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const {
    if (real_) {
      real_times(*real_, c, out);
    } else {
      out.noalias() = (shared_ ? *shared_ : owned_) * c;
    }
  }

  const Eigen::MatrixXd* real_;
  const Eigen::MatrixXcd* shared_;
  Eigen::MatrixXcd owned_;
  Eigen::VectorXd rates_;
  Eigen::VectorXcd coeffs_;
  Eigen::VectorXd weights_;
  double horizon_;
  double asymptote_ = 0.0;
};

QuantumJumpSimulator::QuantumJumpSimulator(std::vector<JumpOperator> jumps, const Basis& basis,
                                           StepControl control)
    : basis_(basis), jumps_(std::move(jumps)), control_(control) {
  require(!jumps_.empty(), ErrorCode::InvalidArgument, "no jump operators supplied");
  for (const auto& j : jumps_) {
    require(!j.terms.empty(), ErrorCode::InvalidArgument, "jump operator without terms");
    for (const auto& t : j.terms) {
      require(t.local_dim() == basis_.local_dim(), ErrorCode::DimensionMismatch,
              "jump operator local dimension does not match basis");
      require(t.site >= 0 && t.site < basis_.n_sites(), ErrorCode::OutOfRange,
              "jump operator site outside chain");
    }
    adjoints_.push_back(j.adjoint());
  }
  backend_ = control_.backend;
  if (backend_ == NoJumpBackend::Auto) {
    backend_ = basis_.size() <= control_.spectral_cap ? NoJumpBackend::Spectral
                                                      : NoJumpBackend::Krylov;
  }
  if (backend_ == NoJumpBackend::Spectral) {
    const DenseMatrix g = DenseMatrix(sparse_effective_generator(jumps_, basis_));
    spectral_ = std::make_unique<Spectral>();
    const double g_scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    spectral_->real = g.imag().cwiseAbs().maxCoeff() <= 1e-15 * g_scale;
    if (spectral_->real) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.real());
      require(solver.info() == Eigen::Success, ErrorCode::Numerical,
              "eigendecomposition of the effective generator failed");
      spectral_->real_vectors = solver.eigenvectors();
      spectral_->rates = solver.eigenvalues();
    } else {
      Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(g);
      require(solver.info() == Eigen::Success, ErrorCode::Numerical,
              "eigendecomposition of the effective generator failed");
      spectral_->vectors = solver.eigenvectors();
      spectral_->rates = solver.eigenvalues();
    }
    const double top = std::max(1.0, spectral_->rates.cwiseAbs().maxCoeff());
    generator_scale_ = top;
    require(spectral_->rates.minCoeff() >= -1e-9 * top, ErrorCode::Numerical,
            "effective generator is not positive semidefinite");
    for (Eigen::Index i = 0; i < spectral_->rates.size(); ++i) {
      if (spectral_->rates(i) < control_.kernel_threshold * top) spectral_->rates(i) = 0.0;
    }
  } else {
    // Gershgorin-style bound: ||G|| <= sum_k ||J_k||^2 <= sum_k (sum_terms |pre| ||A||_F)^2.
    double bound = 0.0;
    for (const auto& j : jumps_) {
      double s = 0.0;
      for (const auto& t : j.terms) s += std::abs(t.prefactor) * t.local_action.norm();
      bound += s * s;
    }
    generator_scale_ = std::max(1.0, bound);
  }
}

QuantumJumpSimulator::~QuantumJumpSimulator() = default;
QuantumJumpSimulator::QuantumJumpSimulator(QuantumJumpSimulator&&) noexcept = default;
QuantumJumpSimulator& QuantumJumpSimulator::operator=(QuantumJumpSimulator&&) noexcept = default;

void QuantumJumpSimulator::apply_generator(std::span<const Complex> in, std::span<Complex> out,
                                           std::vector<Complex>& scratch) const {
  std::fill(out.begin(), out.end(), Complex{});
  scratch.resize(in.size());
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    std::fill(scratch.begin(), scratch.end(), Complex{});
    apply_accumulate(basis_, jumps_[k], in, scratch);
    apply_accumulate(basis_, adjoints_[k], scratch, out);
  }
}

QuantumJumpSimulator::Segment QuantumJumpSimulator::make_segment(
    std::span<const Complex> psi) const {
  const auto dim = static_cast<Eigen::Index>(psi.size());
  Eigen::Map<const Eigen::VectorXcd> v(psi.data(), dim);
  if (backend_ == NoJumpBackend::Spectral) {
    Eigen::VectorXcd coeffs;
    if (spectral_->real) {
      real_times(spectral_->real_vectors.transpose(), v, coeffs);
      return Segment(&spectral_->real_vectors, nullptr, Eigen::MatrixXcd(), spectral_->rates,
                     std::move(coeffs), kInf);
    }
    coeffs = spectral_->vectors.adjoint() * v;
    return Segment(nullptr, &spectral_->vectors, Eigen::MatrixXcd(), spectral_->rates,
                   std::move(coeffs), kInf);
  }

  // Lanczos with full reorthogonalization on G, starting from psi.
  const int m_max = std::max(2, std::min<int>(control_.krylov_dim, static_cast<int>(dim)));
  Eigen::MatrixXcd q(dim, m_max);
  std::vector<double> alpha, beta;
  const double beta0 = v.norm();
  require(beta0 > 0.0, ErrorCode::Numerical, "no-jump evolution of the zero vector");
  q.col(0) = v / beta0;
  std::vector<Complex> scratch;
  Eigen::VectorXcd w(dim);
  bool invariant = false;
  int m = 0;
  for (int j = 0; j < m_max; ++j) {
    m = j + 1;
    Eigen::VectorXcd col = q.col(j);
    apply_generator(std::span<const Complex>(col.data(), col.size()),
                    std::span<Complex>(w.data(), w.size()), scratch);
    const double a = q.col(j).dot(w).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) w -= q.col(i).dot(w) * q.col(i);
    }
    const double b = w.norm();
    if (b <= 1e-13 * generator_scale_) {
      invariant = true;
      break;
    }
    if (j + 1 == m_max) {
      beta.push_back(b);
      break;
    }
    beta.push_back(b);
    q.col(j + 1) = w / b;
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
  Eigen::VectorXd ritz = solver.eigenvalues();
  const Eigen::MatrixXd& z = solver.eigenvectors();
  for (Eigen::Index i = 0; i < ritz.size(); ++i) {
    if (ritz(i) < control_.kernel_threshold * generator_scale_) ritz(i) = 0.0;
  }
  Eigen::VectorXcd coeffs = (beta0 * z.row(0).transpose()).cast<Complex>();

  double horizon = kInf;
  if (!invariant) {
    // Residual estimate beta_m |e_m^T exp(-T tau / 2) e_1| checked on a
    // geometric ladder below the candidate horizon.
    const double tail = beta.back();
    auto err = [&](double tau) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += z(m - 1, i) * std::exp(-0.5 * ritz(i) * tau) * z(0, i);
      return beta0 * tail * std::abs(acc);
    };
    auto ok_up_to = [&](double h) {
      for (int s = 0; s <= 48; ++s) {
        if (err(h * std::pow(0.75, s)) > control_.krylov_tolerance * beta0) return false;
      }
      return true;
    };
    double h = 1.0 / generator_scale_;
    if (ok_up_to(h)) {
      while (h < 1e12 && ok_up_to(2.0 * h)) h *= 2.0;
    } else {
      while (h > 1e-14 && !ok_up_to(h)) h *= 0.5;
      require(h > 1e-14, ErrorCode::Numerical,
              "no-jump step underflow: Krylov error estimate cannot be met");
    }
    horizon = h;
  }
  Eigen::MatrixXcd basis = q.leftCols(m) * z.cast<Complex>();
  return Segment(nullptr, nullptr, std::move(basis), std::move(ritz), std::move(coeffs), horizon);
}

ObservableSnapshot QuantumJumpSimulator::observe(std::span<const Complex> normalized) const {
  const SiteExpectations site = site_expectations(normalized, basis_);
  ObservableSnapshot snap;
  const double n = basis_.n_sites();
  const double factor = control_.coherence == CoherenceConvention::Half ? 0.5 : 1.0;
  for (double v : site.occupation) snap.density += v;
  for (double v : site.sigma_x) snap.sigma_x += v;
  snap.density /= n;
  snap.sigma_x *= factor / n;
  snap.site_density = site.occupation;
  return snap;
}

QuantumTrajectory QuantumJumpSimulator::run(const PureState& init,
                                            const std::vector<double>& grid,
                                            std::uint64_t seed) const {
  require(init.basis() == basis_, ErrorCode::DimensionMismatch,
          "initial state basis does not match simulator");
  require(init.is_normalized(), ErrorCode::NotNormalized, "initial state must be normalized");
  require(!grid.empty() && grid.front() >= 0.0, ErrorCode::InvalidArgument,
          "time grid must be nonempty and nonnegative");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    require(grid[i] > grid[i - 1], ErrorCode::InvalidArgument, "time grid must increase");
  }

  QuantumTrajectory traj;
  traj.seed = seed;
  traj.grid = grid;
  traj.density.resize(grid.size());
  traj.sigma_x.resize(grid.size());
  traj.site_density.resize(grid.size());
  const double t_max = grid.back();
  const double stop_time = control_.run_to_dark ? std::max(t_max, 1.0) * control_.dark_horizon
                                                : t_max;

  Rng rng(seed);
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(init.amplitudes().data(), dim);
  Eigen::VectorXcd work(dim);
  double t = 0.0;
  double target = rng.uniform();
  std::size_t next_sample = 0;
  std::vector<std::vector<Complex>> jumped(jumps_.size());

  auto sample = [&](const Eigen::VectorXcd& state, std::size_t index) {
    const double nrm = state.norm();
    Eigen::VectorXcd unit = state / nrm;
    auto snap = observe(std::span<const Complex>(unit.data(), unit.size()));
    traj.density[index] = snap.density;
    traj.sigma_x[index] = snap.sigma_x;
    traj.site_density[index] = std::move(snap.site_density);
  };
  auto sample_until = [&](const Segment& seg, double t_end) {
    while (next_sample < grid.size() && grid[next_sample] < t_end) {
      seg.state(grid[next_sample] - t, work);
      sample(work, next_sample);
      ++next_sample;
    }
  };
  auto finish_dark = [&](const Segment& seg) {
    sample_until(seg, kInf);
    seg.asymptotic_state(work);
    work /= work.norm();
    traj.asymptotic = observe(std::span<const Complex>(work.data(), work.size()));
    traj.end = TrajectoryEnd::ConvergedDark;
    traj.dark_time = t;
  };

  for (;;) {
    const Segment seg = make_segment(std::span<const Complex>(psi.data(), psi.size()));
    if (!std::isfinite(seg.horizon()) && seg.asymptote() >= target) {
      finish_dark(seg);
      return traj;
    }
    const double remaining = stop_time - t;
    const bool final_segment = seg.horizon() >= remaining;
    const double limit = final_segment ? remaining : seg.horizon();
    const double tau = seg.crossing(target, limit, control_.crossing_tolerance);
    if (!std::isfinite(tau)) {
      // No jump before the segment ends or the simulation stops.
      sample_until(seg, t + limit);
      if (final_segment) {
        sample_until(seg, kInf);
        traj.end = control_.run_to_dark ? TrajectoryEnd::HorizonExhausted
                                        : TrajectoryEnd::ReachedTmax;
        return traj;
      }
      seg.state(limit, work);
      const double n2 = work.squaredNorm();
      require(n2 > 0.0, ErrorCode::Numerical, "no-jump state collapsed to zero norm");
      target /= n2;
      psi = work / std::sqrt(n2);
      t += limit;
      continue;
    }

    const double t_jump = t + tau;
    sample_until(seg, t_jump);
    seg.state(tau, work);
    work /= work.norm();

    double total = 0.0;
    std::vector<double> weight(jumps_.size());
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      jumped[k].assign(static_cast<std::size_t>(dim), Complex{});
      apply_accumulate(basis_, jumps_[k], std::span<const Complex>(work.data(), work.size()),
                       jumped[k]);
      double w = 0.0;
      for (const auto& a : jumped[k]) w += std::norm(a);
      weight[k] = w;
      total += w;
    }
    if (!(total > 1e-14 * generator_scale_)) {
      // Numerically dark at the crossing: nothing left to emit.
      psi = work;
      t = t_jump;
      const Segment frozen(nullptr, nullptr, Eigen::MatrixXcd(psi), Eigen::VectorXd::Zero(1),
                           Eigen::VectorXcd::Ones(1), kInf);
      finish_dark(frozen);
      return traj;
    }
    double prob_sum = 0.0;
    for (double w : weight) prob_sum += w / total;
    require(std::abs(prob_sum - 1.0) <= 1e-12, ErrorCode::Numerical,
            "jump channel probabilities do not sum to one");

    const double pick = rng.uniform() * total;
    double acc = 0.0;
    std::size_t channel = jumps_.size() - 1;
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      acc += weight[k];
      if (pick < acc) {
        channel = k;
        break;
      }
    }
    while (weight[channel] == 0.0) --channel;
    const double inv = 1.0 / std::sqrt(weight[channel]);
    for (Eigen::Index i = 0; i < dim; ++i) psi(i) = jumped[channel][static_cast<std::size_t>(i)] * inv;
    require(traj.events.empty() || t_jump > traj.events.back().time, ErrorCode::Numerical,
            "jump times must increase strictly");
    traj.events.push_back({t_jump, static_cast<int>(channel)});
    t = t_jump;
    target = rng.uniform();
    if (traj.events.size() >= control_.max_jumps) {
      fail(ErrorCode::Numerical, "jump budget exhausted at t=" + std::to_string(t));
    }
    if (t >= stop_time) {
      const Segment frozen(nullptr, nullptr, Eigen::MatrixXcd(psi), Eigen::VectorXd::Zero(1),
                           Eigen::VectorXcd::Ones(1), kInf);
      sample_until(frozen, kInf);
      traj.end = control_.run_to_dark ? TrajectoryEnd::HorizonExhausted
                                      : TrajectoryEnd::ReachedTmax;
      return traj;
    }
  }
}

QuantumTrajectory qjmc_trajectory(const std::vector<JumpOperator>& jumps, const PureState& init,
                                  const std::vector<double>& grid, std::uint64_t seed,
                                  const StepControl& control) {
  const QuantumJumpSimulator sim(jumps, init.basis(), control);
  return sim.run(init, grid, seed);
}

QuantumEnsemble quantum_ensemble(const QuantumJumpSimulator& simulator, const PureState& init,
                                 const std::vector<double>& grid, std::size_t n_trajectories,
                                 std::uint64_t master_seed, const EnsembleOptions& options) {
  require(n_trajectories >= 1, ErrorCode::InvalidArgument, "need at least one trajectory");
  const std::size_t points = grid.size();
  const int n = simulator.basis().n_sites();
  SeriesAccumulator density(points), sigma_x(points);
  std::vector<SeriesAccumulator> sites(n, SeriesAccumulator(points));
  QuantumEnsemble out;
  out.n_trajectories = n_trajectories;
  ObservableSnapshot asym{0.0, 0.0, std::vector<double>(n, 0.0)};
  std::size_t asym_count = 0;

  constexpr std::size_t kBatch = 64;
  std::vector<QuantumTrajectory> batch;
  std::vector<double> site_sample(points);
  for (std::size_t start = 0; start < n_trajectories; start += kBatch) {
    const std::size_t count = std::min(kBatch, n_trajectories - start);
    batch.assign(count, {});
    parallel_for(
        count,
        [&](std::size_t j) {
          batch[j] = simulator.run(init, grid, substream_seed(master_seed, start + j));
        },
        options.threads);
    for (std::size_t j = 0; j < count; ++j) {
      auto& traj = batch[j];
      density.add(traj.density);
      sigma_x.add(traj.sigma_x);
      for (int k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < points; ++i) site_sample[i] = traj.site_density[i][k];
        sites[k].add(site_sample);
      }
      if (traj.converged_dark()) ++out.converged_dark;
      if (traj.asymptotic) {
        ++asym_count;
        asym.density += traj.asymptotic->density;
        asym.sigma_x += traj.asymptotic->sigma_x;
        for (int k = 0; k < n; ++k) asym.site_density[k] += traj.asymptotic->site_density[k];
      }
      if (options.keep_events) out.events.push_back(traj.events);
      if (start + j < options.keep_trajectories) out.kept.push_back(std::move(traj));
    }
  }
  out.density = density.series(grid, "density");
  out.sigma_x = sigma_x.series(grid, "sigma_x");
  for (int k = 0; k < n; ++k) out.site_density.push_back(sites[k].series(grid, "site_" + std::to_string(k)));
  if (asym_count == n_trajectories) {
    const double inv = 1.0 / static_cast<double>(asym_count);
    asym.density *= inv;
    asym.sigma_x *= inv;
    for (auto& v : asym.site_density) v *= inv;
    out.asymptotic = std::move(asym);
  }
  return out;
}

QuantumEnsemble quantum_ensemble(const std::vector<JumpOperator>& jumps, const PureState& init,
                                 const std::vector<double>& grid, std::size_t n_trajectories,
                                 std::uint64_t master_seed, const StepControl& control,
                                 const EnsembleOptions& options) {
  const QuantumJumpSimulator sim(jumps, init.basis(), control);
  return quantum_ensemble(sim, init, grid, n_trajectories, master_seed, options);
}

WaitingTimeHistogram waiting_time_distribution(
    const std::vector<std::vector<JumpEvent>>& trajectories,
    const std::vector<double>& time_window_edges, const std::vector<double>& wait_bin_edges) {
  require(time_window_edges.size() >= 2 && wait_bin_edges.size() >= 2,
          ErrorCode::InvalidArgument, "histogram needs at least one bin per axis");
  for (std::size_t i = 1; i < time_window_edges.size(); ++i) {
    require(time_window_edges[i] > time_window_edges[i - 1], ErrorCode::InvalidArgument,
            "time window edges must increase");
  }
  for (std::size_t i = 1; i < wait_bin_edges.size(); ++i) {
    require(wait_bin_edges[i] > wait_bin_edges[i - 1], ErrorCode::InvalidArgument,
            "wait bin edges must increase");
  }
  WaitingTimeHistogram h;
  h.time_edges = time_window_edges;
  h.wait_edges = wait_bin_edges;
  const std::size_t rows = time_window_edges.size() - 1;
  const std::size_t cols = wait_bin_edges.size() - 1;
  h.counts.assign(rows, std::vector<double>(cols, 0.0));
  h.marginal.assign(cols, 0.0);

  auto bin_of = [](const std::vector<double>& edges, double v) -> std::ptrdiff_t {
    if (v < edges.front() || v >= edges.back()) return -1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    return static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
  };
  for (const auto& events : trajectories) {
    for (std::size_t i = 1; i < events.size(); ++i) {
      const auto row = bin_of(time_window_edges, events[i - 1].time);
      const auto col = bin_of(wait_bin_edges, events[i].time - events[i - 1].time);
      if (row < 0 || col < 0) continue;
      h.counts[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] += 1.0;
      h.marginal[static_cast<std::size_t>(col)] += 1.0;
      ++h.total;
    }
  }
  h.normalized = h.counts;
  for (auto& row : h.normalized) {
    double sum = 0.0;
    for (double v : row) sum += v;
    if (sum > 0.0) {
      for (double& v : row) v /= sum;
    }
  }
  return h;
}

std::vector<double> waiting_times(const std::vector<std::vector<JumpEvent>>& trajectories) {
  std::vector<double> out;
  for (const auto& events : trajectories) {
    for (std::size_t i = 1; i < events.size(); ++i) out.push_back(events[i].time - events[i - 1].time);
  }
  return out;
}

}  // namespace qkcm
