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

#include "qkcm/spin_space.hpp"

#include <cmath>
#include <numeric>

#include "qkcm/error.hpp"

namespace qkcm {

Basis::Basis(int n_sites, int local_dim) : n_sites_(n_sites), local_dim_(local_dim) {
  require(n_sites >= 1, ErrorCode::InvalidArgument, "n_sites must be positive");
  require(local_dim == 2 || local_dim == 3, ErrorCode::InvalidArgument,
          "local_dim must be 2 or 3");
  const double log_size = n_sites * std::log2(static_cast<double>(local_dim));
  require(log_size < 40.0, ErrorCode::CapExceeded,
          "basis of " + std::to_string(n_sites) + " sites is too large");
  strides_.resize(n_sites);
  std::size_t s = 1;
  for (int k = 0; k < n_sites; ++k) {
    strides_[k] = s;
    s *= static_cast<std::size_t>(local_dim);
  }
  size_ = s;
}

const char* to_string(ConstraintKind kind) noexcept {
  switch (kind) {
    case ConstraintKind::Unconstrained: return "unconstrained";
    case ConstraintKind::East: return "east";
    case ConstraintKind::FA: return "fa";
    case ConstraintKind::ExcludedVolume: return "excluded_volume";
  }
  return "unknown";
}

const char* to_string(Boundary boundary) noexcept {
  return boundary == Boundary::Periodic ? "periodic" : "open";
}

SpinConfiguration::SpinConfiguration(std::vector<int> levels, int local_dim)
    : levels_(std::move(levels)), local_dim_(local_dim) {
  require(!levels_.empty(), ErrorCode::InvalidArgument, "configuration needs at least one site");
  require(local_dim == 2 || local_dim == 3, ErrorCode::InvalidArgument,
          "local_dim must be 2 or 3");
  for (int v : levels_) {
    require(v >= 0 && v < local_dim, ErrorCode::OutOfRange,
            "site level " + std::to_string(v) + " outside local dimension");
  }
}

SpinConfiguration SpinConfiguration::parse(const std::string& text, int local_dim) {
  std::vector<int> levels;
  levels.reserve(text.size());
  for (char ch : text) {
    require(ch >= '0' && ch <= '9', ErrorCode::InvalidArgument,
            "configuration string must contain digits only: '" + text + "'");
    levels.push_back(ch - '0');
  }
  return SpinConfiguration(std::move(levels), local_dim);
}

SpinConfiguration SpinConfiguration::from_ordinal(const Basis& basis, std::size_t ordinal) {
  require(ordinal < basis.size(), ErrorCode::OutOfRange, "ordinal outside basis");
  std::vector<int> levels(basis.n_sites());
  for (int k = 0; k < basis.n_sites(); ++k) levels[k] = basis.level(ordinal, k);
  return SpinConfiguration(std::move(levels), basis.local_dim());
}

SpinConfiguration SpinConfiguration::uniform(int n_sites, int local_dim, int level) {
  return SpinConfiguration(std::vector<int>(n_sites, level), local_dim);
}

std::size_t SpinConfiguration::ordinal() const {
  std::size_t ord = 0;
  std::size_t stride = 1;
  for (int v : levels_) {
    ord += static_cast<std::size_t>(v) * stride;
    stride *= static_cast<std::size_t>(local_dim_);
  }
  return ord;
}

std::string SpinConfiguration::to_string() const {
  std::string s;
  s.reserve(levels_.size());
  for (int v : levels_) s.push_back(static_cast<char>('0' + v));
  return s;
}

PureState::PureState(const Basis& basis) : basis_(basis), amplitudes_(basis.size()) {
  synchronized_ = true;
}

PureState::PureState(const Basis& basis, std::vector<Complex> amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() == basis_.size(), ErrorCode::DimensionMismatch,
          "amplitude vector length does not match basis size");
}

PureState PureState::basis_state(const SpinConfiguration& config) {
  PureState s(config.basis());
  s.amplitudes_[config.ordinal()] = 1.0;
  s.synchronized_ = false;
  return s;
}

PureState PureState::product(int n_sites, const std::vector<Complex>& site_state) {
  const int dim = static_cast<int>(site_state.size());
  Basis basis(n_sites, dim);
  std::vector<Complex> amps(basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Complex a = 1.0;
    for (int k = 0; k < n_sites; ++k) a *= site_state[basis.level(c, k)];
    amps[c] = a;
  }
  return PureState(basis, std::move(amps));
}

double PureState::squared_norm() const {
  if (!synchronized_) {
    double acc = 0.0;
    for (const auto& a : amplitudes_) acc += std::norm(a);
    squared_norm_ = acc;
    synchronized_ = true;
  }
  return squared_norm_;
}

bool PureState::is_normalized(double tol) const {
  return std::abs(squared_norm() - 1.0) <= tol;
}

void PureState::normalize() {
  const double n2 = squared_norm();
  require(n2 > 0.0, ErrorCode::Numerical, "cannot normalize the zero vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amplitudes_) a *= inv;
  synchronized_ = false;
}

LocalOperator LocalOperator::adjoint() const {
  LocalOperator out = *this;
  out.local_action = local_action.adjoint();
  out.prefactor = std::conj(prefactor);
  return out;
}

JumpOperator::JumpOperator(LocalOperator op, std::string name) : label(std::move(name)) {
  terms.push_back(std::move(op));
}

JumpOperator::JumpOperator(std::vector<LocalOperator> ops, std::string name)
    : terms(std::move(ops)), label(std::move(name)) {}

JumpOperator JumpOperator::adjoint() const {
  JumpOperator out;
  out.label = label + "^dag";
  out.terms.reserve(terms.size());
  for (const auto& t : terms) out.terms.push_back(t.adjoint());
  return out;
}

namespace local {
DenseMatrix identity(int dim) { return DenseMatrix::Identity(dim, dim); }
DenseMatrix sigma_minus() { return transition(2, 0, 1); }
DenseMatrix sigma_plus() { return transition(2, 1, 0); }
DenseMatrix sigma_x() {
  DenseMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
DenseMatrix sigma_y() {
  DenseMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
DenseMatrix number() { return projector(2, 1); }
DenseMatrix ground_projector() { return projector(2, 0); }
DenseMatrix projector(int dim, int level) { return transition(dim, level, level); }
DenseMatrix transition(int dim, int to, int from) {
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  m(to, from) = 1.0;
  return m;
}
}  // namespace local

namespace {

void check_compatible(const Basis& basis, const LocalOperator& op) {
  require(op.local_dim() == basis.local_dim() && op.local_action.cols() == op.local_dim(),
          ErrorCode::DimensionMismatch,
          "operator local dimension " + std::to_string(op.local_dim()) +
              " does not match state local dimension " + std::to_string(basis.local_dim()));
  require(op.site >= 0 && op.site < basis.n_sites(), ErrorCode::OutOfRange,
          "target site " + std::to_string(op.site) + " outside chain of " +
              std::to_string(basis.n_sites()) + " sites");
}

}  // namespace

void apply_accumulate(const Basis& basis, const LocalOperator& op,
                      std::span<const Complex> in, std::span<Complex> out) {
  check_compatible(basis, op);
  require(in.size() == basis.size() && out.size() == basis.size(),
          ErrorCode::DimensionMismatch, "buffer size does not match basis");
  const int d = basis.local_dim();
  const int k = op.site;
  const auto stride = static_cast<std::ptrdiff_t>(basis.stride(k));
  Complex m[9];
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) m[b * d + a] = op.prefactor * op.local_action(b, a);

  const std::size_t n = basis.size();
  for (std::size_t c = 0; c < n; ++c) {
    const Complex v = in[c];
    if (v == Complex{}) continue;
    if (!op.constraint.allows(basis, c, k)) continue;
    const int a = basis.level(c, k);
    const auto base = static_cast<std::ptrdiff_t>(c) - a * stride;
    for (int b = 0; b < d; ++b) {
      const Complex coeff = m[b * d + a];
      if (coeff == Complex{}) continue;
      out[static_cast<std::size_t>(base + b * stride)] += coeff * v;
    }
  }
}

void apply_accumulate(const Basis& basis, const JumpOperator& op,
                      std::span<const Complex> in, std::span<Complex> out) {
  for (const auto& term : op.terms) apply_accumulate(basis, term, in, out);
}

PureState apply_local_operator(const PureState& state, const LocalOperator& op) {
  PureState out(state.basis());
  apply_accumulate(state.basis(), op, state.amplitudes(), out.mutable_amplitudes());
  return out;
}

PureState apply_jump(const PureState& state, const JumpOperator& op) {
  PureState out(state.basis());
  apply_accumulate(state.basis(), op, state.amplitudes(), out.mutable_amplitudes());
  return out;
}

double squared_norm_after(const PureState& state, const JumpOperator& op,
                          std::vector<Complex>& scratch) {
  scratch.assign(state.size(), Complex{});
  apply_accumulate(state.basis(), op, state.amplitudes(), scratch);
  double acc = 0.0;
  for (const auto& a : scratch) acc += std::norm(a);
  return acc;
}

namespace observables {
DiagonalObservable mean_occupation() {
  return [](const Basis& basis, std::size_t c) {
    const int top = basis.excited_level();
    int count = 0;
    for (int k = 0; k < basis.n_sites(); ++k) count += basis.level(c, k) == top;
    return static_cast<double>(count) / basis.n_sites();
  };
}
DiagonalObservable occupation(int site) {
  return [site](const Basis& basis, std::size_t c) {
    return basis.level(c, site) == basis.excited_level() ? 1.0 : 0.0;
  };
}
DiagonalObservable density_correlation(int site_a, int site_b) {
  return [site_a, site_b](const Basis& basis, std::size_t c) {
    const int top = basis.excited_level();
    return (basis.level(c, site_a) == top && basis.level(c, site_b) == top) ? 1.0 : 0.0;
  };
}
}  // namespace observables

double expectation_diagonal(const PureState& state, const DiagonalObservable& observable) {
  require(state.is_normalized(), ErrorCode::NotNormalized,
          "expectation_diagonal needs a normalized state (squared norm " +
              std::to_string(state.squared_norm()) + ")");
  double acc = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t c = 0; c < amps.size(); ++c) {
    const double p = std::norm(amps[c]);
    if (p != 0.0) acc += p * observable(state.basis(), c);
  }
  return acc;
}

Complex expectation_local(const PureState& state, const LocalOperator& op) {
  require(state.is_normalized(), ErrorCode::NotNormalized,
          "expectation_local needs a normalized state");
  const Basis& basis = state.basis();
  check_compatible(basis, op);
  const int d = basis.local_dim();
  const int k = op.site;
  const auto stride = static_cast<std::ptrdiff_t>(basis.stride(k));
  const auto amps = state.amplitudes();
  Complex acc{};
  for (std::size_t c = 0; c < amps.size(); ++c) {
    const Complex v = amps[c];
    if (v == Complex{} || !op.constraint.allows(basis, c, k)) continue;
    const int a = basis.level(c, k);
    const auto base = static_cast<std::ptrdiff_t>(c) - a * stride;
    for (int b = 0; b < d; ++b) {
      const Complex coeff = op.local_action(b, a);
      if (coeff == Complex{}) continue;
      acc += std::conj(amps[static_cast<std::size_t>(base + b * stride)]) * coeff * v;
    }
  }
  return op.prefactor * acc;
}

SiteExpectations site_expectations(std::span<const Complex> amplitudes, const Basis& basis) {
  const int n = basis.n_sites();
  const int top = basis.excited_level();
  SiteExpectations out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t c = 0; c < amplitudes.size(); ++c) {
    const Complex v = amplitudes[c];
    const double p = std::norm(v);
    for (int k = 0; k < n; ++k) {
      const int lv = basis.level(c, k);
      if (lv == top) {
        out.occupation[k] += p;
      } else if (lv == 0) {
        const Complex partner = amplitudes[c + top * basis.stride(k)];
        out.sigma_x[k] += 2.0 * (std::conj(v) * partner).real();
      }
    }
  }
  return out;
}

DenseMatrix dense_matrix_of(const std::vector<LocalOperator>& sum, const Basis& basis,
                            std::size_t cap) {
  require(basis.size() <= cap, ErrorCode::CapExceeded,
          "dense materialization of " + std::to_string(basis.size()) +
              " states exceeds cap " + std::to_string(cap));
  const auto dim = static_cast<Eigen::Index>(basis.size());
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  std::vector<Complex> e(basis.size()), col(basis.size());
  for (Eigen::Index c = 0; c < dim; ++c) {
    std::fill(col.begin(), col.end(), Complex{});
    e[c] = 1.0;
    for (const auto& op : sum) apply_accumulate(basis, op, e, col);
    e[c] = 0.0;
    for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = col[r];
  }
  return m;
}

DenseMatrix dense_matrix_of(const JumpOperator& op, const Basis& basis, std::size_t cap) {
  return dense_matrix_of(op.terms, basis, cap);
}

SparseMatrix sparse_matrix_of(const JumpOperator& op, const Basis& basis) {
  std::vector<Eigen::Triplet<Complex>> triplets;
  const std::size_t n = basis.size();
  for (const auto& term : op.terms) {
    check_compatible(basis, term);
    const int d = basis.local_dim();
    const int k = term.site;
    const auto stride = static_cast<std::ptrdiff_t>(basis.stride(k));
    for (std::size_t c = 0; c < n; ++c) {
      if (!term.constraint.allows(basis, c, k)) continue;
      const int a = basis.level(c, k);
      const auto base = static_cast<std::ptrdiff_t>(c) - a * stride;
      for (int b = 0; b < d; ++b) {
        const Complex coeff = term.prefactor * term.local_action(b, a);
        if (coeff == Complex{}) continue;
        triplets.emplace_back(static_cast<Eigen::Index>(base + b * stride),
                              static_cast<Eigen::Index>(c), coeff);
      }
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(Complex{});
  return m;
}

DensityMatrix::DensityMatrix(const Basis& basis, DenseMatrix entries)
    : basis_(basis), entries_(std::move(entries)) {
  require(entries_.rows() == static_cast<Eigen::Index>(basis_.size()) &&
              entries_.cols() == entries_.rows(),
          ErrorCode::DimensionMismatch, "density matrix shape does not match basis");
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  const auto amps = state.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  return DensityMatrix(state.basis(), v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(const Basis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  return DensityMatrix(basis, DenseMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const DenseMatrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double psd_tol) const {
  const double herm = hermiticity_error();
  require(herm <= herm_tol, ErrorCode::Numerical,
          "density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
  const Complex tr = trace();
  require(std::abs(tr - 1.0) <= trace_tol, ErrorCode::Numerical,
          "density matrix trace " + std::to_string(tr.real()) + " differs from 1");
  const double lo = min_eigenvalue();
  require(lo >= -psd_tol, ErrorCode::Numerical,
          "density matrix has negative eigenvalue " + std::to_string(lo));
}

double DensityMatrix::expectation_diagonal(const DiagonalObservable& observable) const {
  double acc = 0.0;
  for (std::size_t c = 0; c < basis_.size(); ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    acc += entries_(i, i).real() * observable(basis_, c);
  }
  return acc;
}

Complex DensityMatrix::expectation(const LocalOperator& op) const {
  const DenseMatrix m = dense_matrix_of(std::vector<LocalOperator>{op}, basis_,
                                        std::max(basis_.size(), kDefaultOracleCap));
  return (m * entries_).trace();
}

}  // namespace qkcm
