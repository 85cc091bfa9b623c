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

#include "qkcm/lindblad.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

#include <unsupported/Eigen/MatrixFunctions>

#include "qkcm/error.hpp"

namespace qkcm {

LindbladGenerator::LindbladGenerator(const Basis& basis, std::vector<SparseMatrix> jumps,
                                     SparseMatrix hamiltonian)
    : basis_(basis), jumps_(std::move(jumps)) {
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  SparseMatrix g(dim, dim);
  for (const auto& j : jumps_) {
    require(j.rows() == dim && j.cols() == dim, ErrorCode::DimensionMismatch,
            "jump operator shape does not match basis");
    g += SparseMatrix(j.adjoint() * j);
  }
  if (hamiltonian.size() == 0) hamiltonian.resize(dim, dim);
  require(hamiltonian.rows() == dim && hamiltonian.cols() == dim, ErrorCode::DimensionMismatch,
          "Hamiltonian shape does not match basis");
  kernel_ = 0.5 * g + Complex(0.0, 1.0) * hamiltonian;
  kernel_.makeCompressed();
}

LindbladGenerator::LindbladGenerator(const Basis& basis, std::vector<SparseMatrix> jumps,
                                     SparseMatrix kernel, bool)
    : basis_(basis), jumps_(std::move(jumps)), kernel_(std::move(kernel)) {}

namespace {
std::vector<SparseMatrix> to_sparse(const std::vector<JumpOperator>& jumps, const Basis& basis,
                                    std::size_t cap) {
  require(basis.size() <= cap, ErrorCode::CapExceeded,
          "dense Lindblad solver limited to " + std::to_string(cap) + " basis states, got " +
              std::to_string(basis.size()));
  std::vector<SparseMatrix> out;
  out.reserve(jumps.size());
  for (const auto& j : jumps) out.push_back(sparse_matrix_of(j, basis));
  return out;
}
}  // namespace

LindbladGenerator::LindbladGenerator(const std::vector<JumpOperator>& jumps, const Basis& basis,
                                     std::size_t cap)
    : LindbladGenerator(basis, to_sparse(jumps, basis, cap), SparseMatrix()) {}

void LindbladGenerator::apply(const DenseMatrix& rho, DenseMatrix& drho) const {
  const DenseMatrix rho_adj = rho.adjoint();
  const DenseMatrix k_rho_adj = kernel_ * rho_adj;
  drho.noalias() = -(kernel_ * rho);
  drho -= k_rho_adj.adjoint();
  for (const auto& j : jumps_) {
    const DenseMatrix j_rho_adj = j * rho_adj;          // J rho^dag
    drho.noalias() += j * j_rho_adj.adjoint();          // J rho J^dag
  }
}

DenseMatrix LindbladGenerator::apply(const DenseMatrix& rho) const {
  DenseMatrix out(rho.rows(), rho.cols());
  apply(rho, out);
  return out;
}

double LindbladGenerator::rate_bound() const {
  auto norm1 = [](const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
      double sum = 0.0;
      for (SparseMatrix::InnerIterator it(m, c); it; ++it) sum += std::abs(it.value());
      best = std::max(best, sum);
    }
    return best;
  };
  double bound = 2.0 * norm1(kernel_);
  for (const auto& j : jumps_) bound += norm1(j) * norm1(SparseMatrix(j.adjoint()));
  return bound;
}

std::vector<std::size_t> LindbladGenerator::invariant_sector(const DenseMatrix& rho) const {
  const Eigen::Index dim = kernel_.rows();
  require(rho.rows() == dim && rho.cols() == dim, ErrorCode::DimensionMismatch,
          "density matrix shape does not match generator");
  std::vector<char> seen(static_cast<std::size_t>(dim), 0);
  std::vector<Eigen::Index> stack;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (rho.row(i).cwiseAbs().maxCoeff() > 0.0 || rho.col(i).cwiseAbs().maxCoeff() > 0.0) {
      seen[static_cast<std::size_t>(i)] = 1;
      stack.push_back(i);
    }
  }
  auto visit = [&](const SparseMatrix& m, Eigen::Index col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      if (it.value() == Complex(0.0) || seen[static_cast<std::size_t>(it.row())]) continue;
      seen[static_cast<std::size_t>(it.row())] = 1;
      stack.push_back(it.row());
    }
  };
  while (!stack.empty()) {
    const Eigen::Index c = stack.back();
    stack.pop_back();
    visit(kernel_, c);
    for (const auto& j : jumps_) visit(j, c);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

LindbladGenerator LindbladGenerator::restricted(const std::vector<std::size_t>& states) const {
  const auto dim = kernel_.rows();
  const auto s = static_cast<Eigen::Index>(states.size());
  std::vector<Eigen::Triplet<Complex>> sel;
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto c = static_cast<Eigen::Index>(states[static_cast<std::size_t>(i)]);
    require(c < dim, ErrorCode::OutOfRange, "sector state outside the basis");
    sel.emplace_back(c, i, Complex(1.0));
  }
  SparseMatrix p(dim, s);
  p.setFromTriplets(sel.begin(), sel.end());
  const SparseMatrix pt = p.transpose();
  std::vector<SparseMatrix> jumps;
  jumps.reserve(jumps_.size());
  for (const auto& j : jumps_) {
    SparseMatrix r = pt * j * p;
    if (r.nonZeros() > 0) jumps.push_back(std::move(r));
  }
  SparseMatrix kernel = pt * kernel_ * p;
  kernel.makeCompressed();
  return LindbladGenerator(basis_, std::move(jumps), std::move(kernel), true);
}

namespace {

// Hermitian matrices as real vectors: the diagonal, then Re and Im of each
// entry above it, row by row.
Eigen::VectorXd to_real(const DenseMatrix& rho) {
  const Eigen::Index s = rho.rows();
  Eigen::VectorXd v(s * s);
  for (Eigen::Index a = 0; a < s; ++a) v(a) = rho(a, a).real();
  Eigen::Index p = s;
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = a + 1; b < s; ++b) {
      v(p++) = rho(a, b).real();
      v(p++) = rho(a, b).imag();
    }
  }
  return v;
}

DenseMatrix from_real(const Eigen::VectorXd& v, Eigen::Index s) {
  DenseMatrix rho(s, s);
  for (Eigen::Index a = 0; a < s; ++a) rho(a, a) = v(a);
  Eigen::Index p = s;
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = a + 1; b < s; ++b) {
      rho(a, b) = Complex(v(p), v(p + 1));
      rho(b, a) = Complex(v(p), -v(p + 1));
      p += 2;
    }
  }
  return rho;
}

Eigen::MatrixXd real_superoperator(const LindbladGenerator& g, Eigen::Index s) {
  Eigen::MatrixXd m(s * s, s * s);
  DenseMatrix e = DenseMatrix::Zero(s, s);
  DenseMatrix out(s, s);
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < s; ++a) {
    e(a, a) = 1.0;
    g.apply(e, out);
    m.col(col++) = to_real(out);
    e(a, a) = 0.0;
  }
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = a + 1; b < s; ++b) {
      e(a, b) = 1.0;
      e(b, a) = 1.0;
      g.apply(e, out);
      m.col(col++) = to_real(out);
      e(a, b) = Complex(0.0, 1.0);
      e(b, a) = Complex(0.0, -1.0);
      g.apply(e, out);
      m.col(col++) = to_real(out);
      e(a, b) = 0.0;
      e(b, a) = 0.0;
    }
  }
  return m;
}

// exp(M r) v by its Taylor series; |M| r stays below one here.
Eigen::VectorXd short_exp(const Eigen::MatrixXd& m, double r, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = v;
  if (r <= 0.0) return out;
  Eigen::VectorXd term = v;
  for (int k = 1; k <= 60; ++k) {
    term = (m * term) * (r / k);
    out += term;
    if (term.lpNorm<Eigen::Infinity>() <= 1e-18 * out.lpNorm<Eigen::Infinity>()) break;
  }
  return out;
}

// Every output is built from rho0 as P^m exp(M r) with P = exp(M h) and
// t - t0 = m h + r, using P^(2^k) from repeated squaring; only one power is
// held at a time.
std::vector<DenseMatrix> propagate(const LindbladGenerator& g, const DenseMatrix& rho0,
                                   const std::vector<double>& times) {
  const Eigen::Index s = rho0.rows();
  const Eigen::MatrixXd m = real_superoperator(g, s);
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  const double span = times.back() - times.front();
  int levels = 0;
  if (span * norm > 0.5) levels = static_cast<int>(std::ceil(std::log2(span * norm / 0.5)));
  levels = std::min(levels, 62);
  const double h = span / std::ldexp(1.0, levels);

  const Eigen::VectorXd v0 = to_real(rho0);
  std::vector<Eigen::VectorXd> v(times.size());
  std::vector<std::uint64_t> steps(times.size(), 0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double dt = times[i] - times.front();
    if (h > 0.0) {
      steps[i] = static_cast<std::uint64_t>(std::floor(dt / h));
      if (steps[i] > (std::uint64_t{1} << levels)) steps[i] = std::uint64_t{1} << levels;
    }
    const double r = std::max(0.0, dt - static_cast<double>(steps[i]) * h);
    v[i] = short_exp(m, r, v0);
  }
  // Rounding in the squarings doubles each level; the trace functional is
  // conserved exactly, so its drift is projected out after every product.
  auto conserve_trace = [s](Eigen::MatrixXd& p) {
    Eigen::RowVectorXd drift = p.topRows(s).colwise().sum();
    drift.head(s).array() -= 1.0;
    p.topRows(s).rowwise() -= drift / static_cast<double>(s);
  };
  if (h > 0.0) {
    Eigen::MatrixXd power = (m * h).exp();
    conserve_trace(power);
    for (int k = 0; k <= levels; ++k) {
      for (std::size_t i = 0; i < times.size(); ++i) {
        if ((steps[i] >> k) & 1u) v[i] = power * v[i];
      }
      if (k < levels) {
        power = power * power;
        conserve_trace(power);
      }
    }
  }
  std::vector<DenseMatrix> out;
  out.reserve(times.size());
  for (const auto& x : v) out.push_back(from_real(x, s));
  return out;
}

bool prefer_propagator(const LindbladGenerator& g, Eigen::Index s, const std::vector<double>& times,
                       const DenseSolveOptions& options) {
  if (options.method != DenseMethod::Auto) return options.method == DenseMethod::Propagator;
  const auto dim2 = static_cast<std::size_t>(s) * static_cast<std::size_t>(s);
  if (dim2 > options.propagator_cap || times.size() < 2) return false;
  // Explicit steps are bounded by stability at roughly 3 / |L|; each costs
  // about seven generator applications of order s^3. Squaring costs s^6 per level.
  const double span = times.back() - times.front();
  const double rk_steps = span * g.rate_bound() / 3.0;
  const double sd = static_cast<double>(s);
  const double rk_cost = 7.0 * rk_steps * 16.0 * sd * sd * sd;
  const double levels = std::max(1.0, std::log2(std::max(2.0, span * g.rate_bound())));
  const double prop_cost = (levels + 12.0) * 2.0 * std::pow(sd, 6.0) / 4.0;
  return prop_cost < rk_cost;
}

}  // namespace

std::vector<DensityMatrix> lindblad_solve(const LindbladGenerator& generator,
                                          const DensityMatrix& rho0,
                                          const std::vector<double>& times,
                                          const DenseSolveOptions& options) {
  require(rho0.basis() == generator.basis(), ErrorCode::DimensionMismatch,
          "initial density matrix basis does not match generator");
  std::vector<DensityMatrix> out;
  if (times.empty()) return out;
  out.reserve(times.size());
  std::vector<std::size_t> sector;
  if (options.restrict_to_sector) {
    sector = generator.invariant_sector(rho0.entries());
    if (sector.size() == rho0.basis().size()) sector.clear();
  }
  const std::optional<LindbladGenerator> reduced =
      sector.empty() ? std::nullopt : std::optional(generator.restricted(sector));
  const LindbladGenerator& active = reduced ? *reduced : generator;

  DenseMatrix start = rho0.entries();
  if (reduced) {
    const auto s = static_cast<Eigen::Index>(sector.size());
    start.resize(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        start(a, b) = rho0.entries()(static_cast<Eigen::Index>(sector[a]),
                                     static_cast<Eigen::Index>(sector[b]));
      }
    }
  }
  auto embed = [&](const DenseMatrix& rho) {
    if (!reduced) return rho;
    const auto dim = static_cast<Eigen::Index>(rho0.basis().size());
    DenseMatrix full = DenseMatrix::Zero(dim, dim);
    const auto s = static_cast<Eigen::Index>(sector.size());
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        full(static_cast<Eigen::Index>(sector[a]), static_cast<Eigen::Index>(sector[b])) = rho(a, b);
      }
    }
    return full;
  };
  auto record = [&](const DenseMatrix& rho) {
    DensityMatrix dm(generator.basis(), embed(rho));
    if (options.validate) dm.validate(options.herm_tol, options.trace_tol, options.psd_tol);
    out.push_back(std::move(dm));
  };
  if (prefer_propagator(active, start.rows(), times, options)) {
    for (std::size_t i = 1; i < times.size(); ++i) {
      require(times[i] >= times[i - 1], ErrorCode::InvalidArgument,
              "output times must be nondecreasing");
    }
    for (const auto& rho : propagate(active, start, times)) record(rho);
    return out;
  }
  auto rhs = [&active](double, const DenseMatrix& rho, DenseMatrix& drho) {
    active.apply(rho, drho);
  };
  integrate_dopri5(
      rhs, std::move(start), times, [&](std::size_t, const DenseMatrix& rho) { record(rho); },
      options.ode);
  return out;
}

std::vector<DensityMatrix> lindblad_solve_dense(const std::vector<JumpOperator>& jumps,
                                                const DensityMatrix& rho0,
                                                const std::vector<double>& times,
                                                const DenseSolveOptions& options,
                                                std::size_t cap) {
  require(!jumps.empty(), ErrorCode::InvalidArgument, "no jump operators supplied");
  const LindbladGenerator generator(jumps, rho0.basis(), cap);
  return lindblad_solve(generator, rho0, times, options);
}

LindbladGenerator three_level_generator(const RydbergSpec& spec, std::size_t cap) {
  spec.validate();
  require(spec.three_level.has_value(), ErrorCode::InvalidArgument,
          "three-level model needs omega_c, omega_p, gamma and v");
  const auto& p = *spec.three_level;
  const Basis basis(spec.n_sites, 3);
  require(basis.size() <= cap, ErrorCode::CapExceeded,
          "three-level solver limited to " + std::to_string(cap) + " basis states");
  constexpr int g = 0, e = 1, r = 2;

  std::vector<SparseMatrix> jumps;
  std::vector<LocalOperator> drive;
  for (int k = 0; k < spec.n_sites; ++k) {
    jumps.push_back(sparse_matrix_of(
        JumpOperator(LocalOperator{k, local::transition(3, g, e), {}, std::sqrt(p.gamma)}),
        basis));
    DenseMatrix h = DenseMatrix::Zero(3, 3);
    h(e, r) = -p.omega_c;
    h(r, e) = -p.omega_c;
    h(g, e) = p.omega_p;
    h(e, g) = p.omega_p;
    drive.push_back(LocalOperator{k, h, {}, 1.0});
  }
  SparseMatrix hamiltonian = sparse_matrix_of(JumpOperator(drive, "drive"), basis);

  // V |r_k r_{k+1}><r_k r_{k+1}|, diagonal in the configuration basis.
  const int bonds = spec.boundary == Boundary::Periodic && spec.n_sites > 2 ? spec.n_sites
                                                                            : spec.n_sites - 1;
  std::vector<Eigen::Triplet<Complex>> diag;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    int pairs = 0;
    for (int k = 0; k < bonds; ++k) {
      const int k2 = (k + 1) % spec.n_sites;
      pairs += basis.level(c, k) == r && basis.level(c, k2) == r;
    }
    if (pairs > 0) {
      const auto i = static_cast<Eigen::Index>(c);
      diag.emplace_back(i, i, p.v * pairs);
    }
  }
  SparseMatrix interaction(static_cast<Eigen::Index>(basis.size()),
                           static_cast<Eigen::Index>(basis.size()));
  interaction.setFromTriplets(diag.begin(), diag.end());
  hamiltonian += interaction;
  return LindbladGenerator(basis, std::move(jumps), std::move(hamiltonian));
}

double rescaled_time_factor(const ThreeLevelParams& params) {
  return 4.0 * params.omega_c * params.omega_c / params.gamma;
}

std::vector<DensityMatrix> three_level_lindblad(const RydbergSpec& spec,
                                                const DensityMatrix& rho0,
                                                const std::vector<double>& times,
                                                const DenseSolveOptions& options) {
  const LindbladGenerator generator = three_level_generator(spec);
  DenseSolveOptions opts = options;
  opts.herm_tol = std::max(opts.herm_tol, 1e-9);
  opts.trace_tol = std::max(opts.trace_tol, 1e-9);
  return lindblad_solve(generator, rho0, times, opts);
}

double mean_excitation(const DensityMatrix& rho) {
  return rho.expectation_diagonal(observables::mean_occupation());
}

double mean_sigma_x(const DensityMatrix& rho) {
  const Basis& basis = rho.basis();
  const int top = basis.excited_level();
  const DenseMatrix& m = rho.entries();
  double acc = 0.0;
  for (int k = 0; k < basis.n_sites(); ++k) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (basis.level(c, k) != 0) continue;
      const auto lo = static_cast<Eigen::Index>(c);
      const auto hi = static_cast<Eigen::Index>(c + top * basis.stride(k));
      acc += 2.0 * m(hi, lo).real();
    }
  }
  return acc / basis.n_sites();
}

}  // namespace qkcm
