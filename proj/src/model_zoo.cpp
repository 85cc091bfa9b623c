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

#include "qkcm/model_zoo.hpp"

#include <cmath>
#include <sstream>

#include "qkcm/error.hpp"

namespace qkcm {

double kappa_from_ratio(double ratio) {
  require(ratio > 0.0 && std::isfinite(ratio), ErrorCode::InvalidArgument,
          "kappa ratio must be positive and finite");
  return ratio / (1.0 + ratio);
}

void ClassicalKCMSpec::validate() const {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument,
          "lambda must be positive");
  require(kappa > 0.0 && kappa < 1.0, ErrorCode::InvalidArgument,
          "kappa must lie strictly inside (0, 1)");
  require(n_sites >= 1, ErrorCode::InvalidArgument, "n_sites must be positive");
}

std::string ClassicalKCMSpec::describe() const {
  std::ostringstream os;
  os << to_string(constraint.kind) << " N=" << n_sites << " " << to_string(constraint.boundary)
     << " lambda=" << lambda << " kappa=" << kappa;
  return os.str();
}

void QuantumKCMSpec::validate() const {
  kcm.validate();
  require(theta >= 0.0 && theta <= M_PI + 1e-12, ErrorCode::InvalidArgument,
          "theta must lie in [0, pi]");
  if (unitary) {
    require(unitary->rows() == 2 && unitary->cols() == 2, ErrorCode::DimensionMismatch,
            "site unitary must be 2x2");
    const double dev = (*unitary * unitary->adjoint() - DenseMatrix::Identity(2, 2))
                           .cwiseAbs()
                           .maxCoeff();
    require(dev < 1e-10, ErrorCode::InvalidArgument, "site unitary is not unitary");
  }
}

DenseMatrix QuantumKCMSpec::site_unitary() const {
  if (unitary) return *unitary;
  // exp(i theta sigma^y) = cos(theta) 1 + i sin(theta) sigma^y
  DenseMatrix u(2, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  u << c, s, -s, c;
  return u;
}

std::string QuantumKCMSpec::describe() const {
  std::ostringstream os;
  os << "quantum " << kcm.describe() << " theta=" << theta;
  return os.str();
}

void RydbergSpec::validate() const {
  require(x > 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, "x must be positive");
  require(n_sites >= 1, ErrorCode::InvalidArgument, "n_sites must be positive");
  if (three_level) {
    const auto& p = *three_level;
    require(p.omega_c > 0.0 && p.omega_p > 0.0 && p.gamma > 0.0 && p.v > 0.0,
            ErrorCode::InvalidArgument, "three-level rates must be positive");
    require(std::abs(p.omega_p / p.omega_c - x) <= 1e-12 * std::max(1.0, x),
            ErrorCode::InvalidArgument, "x must equal omega_p / omega_c");
  }
}

std::string RydbergSpec::describe() const {
  std::ostringstream os;
  os << "rydberg N=" << n_sites << " " << to_string(boundary) << " x=" << x;
  return os.str();
}

std::vector<ClassicalTransition> classical_transitions(const ClassicalKCMSpec& spec,
                                                       std::size_t ordinal) {
  const Basis basis = spec.basis();
  std::vector<ClassicalTransition> out;
  for (int k = 0; k < spec.n_sites; ++k) {
    if (!spec.constraint.allows(basis, ordinal, k)) continue;
    const bool up = basis.level(ordinal, k) == 0;
    const double rate = up ? spec.lambda * spec.kappa : spec.lambda * (1.0 - spec.kappa);
    out.push_back({k, up ? Direction::Up : Direction::Down, rate,
                   ordinal ^ (std::size_t{1} << k)});
  }
  return out;
}

std::vector<ClassicalTransition> classical_transitions(const ClassicalKCMSpec& spec,
                                                       const SpinConfiguration& config) {
  spec.validate();
  require(config.local_dim() == 2 && config.n_sites() == spec.n_sites,
          ErrorCode::DimensionMismatch,
          "configuration " + config.to_string() + " does not match " + spec.describe());
  return classical_transitions(spec, config.ordinal());
}

std::vector<Complex> bright_vector(double kappa) {
  return {std::sqrt(kappa), -std::sqrt(1.0 - kappa)};
}

std::vector<Complex> dark_vector(double kappa) {
  return {std::sqrt(1.0 - kappa), std::sqrt(kappa)};
}

std::vector<JumpOperator> quantum_jump_operators(const QuantumKCMSpec& spec) {
  spec.validate();
  const auto b = bright_vector(spec.kcm.kappa);
  Eigen::Vector2cd bv(b[0], b[1]);
  const DenseMatrix action = spec.site_unitary() * (bv * bv.adjoint());
  std::vector<JumpOperator> ops;
  ops.reserve(spec.kcm.n_sites);
  for (int k = 0; k < spec.kcm.n_sites; ++k) {
    LocalOperator op{k, action, spec.kcm.constraint, std::sqrt(spec.kcm.lambda)};
    ops.emplace_back(std::move(op), "J_" + std::to_string(k));
  }
  return ops;
}

std::vector<JumpOperator> rydberg_jump_operators(const RydbergSpec& spec) {
  spec.validate();
  const ConstraintSpec blockade{ConstraintKind::ExcludedVolume, spec.boundary};
  std::vector<JumpOperator> ops;
  ops.reserve(spec.n_sites);
  for (int k = 0; k < spec.n_sites; ++k) {
    LocalOperator ground{k, local::ground_projector(), {}, spec.x};
    LocalOperator decay{k, local::sigma_minus(), blockade, -1.0};
    ops.emplace_back(std::vector<LocalOperator>{ground, decay}, "JRyd_" + std::to_string(k));
  }
  return ops;
}

std::vector<JumpOperator> rydberg_kcm_form_operators(const RydbergSpec& spec) {
  spec.validate();
  const auto b = bright_vector(spec.kappa());
  DenseMatrix action = DenseMatrix::Zero(2, 2);
  action(0, 0) = std::conj(b[0]);
  action(0, 1) = std::conj(b[1]);
  const ConstraintSpec blockade{ConstraintKind::ExcludedVolume, spec.boundary};
  std::vector<JumpOperator> ops;
  for (int k = 0; k < spec.n_sites; ++k) {
    ops.emplace_back(LocalOperator{k, action, blockade, std::sqrt(1.0 + spec.x * spec.x)},
                     "JKCM_" + std::to_string(k));
  }
  return ops;
}

ClassicalKCMSpec excluded_volume_classical_spec(const RydbergSpec& spec, double lambda) {
  spec.validate();
  ClassicalKCMSpec out;
  out.lambda = lambda;
  out.kappa = spec.kappa();
  out.constraint = {ConstraintKind::ExcludedVolume, spec.boundary};
  out.n_sites = spec.n_sites;
  return out;
}

RateTable rate_table(const ClassicalKCMSpec& spec, std::size_t cap) {
  spec.validate();
  const Basis basis = spec.basis();
  require(basis.size() <= cap, ErrorCode::CapExceeded,
          "rate table of " + std::to_string(basis.size()) + " states exceeds cap");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  RateTable w = RateTable::Zero(dim, dim);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (const auto& tr : classical_transitions(spec, c)) {
      w(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(tr.target)) = tr.rate;
    }
  }
  return w;
}

void check_detailed_balance(const RateTable& rates, const std::vector<double>& p_eq,
                            double tol) {
  require(rates.rows() == rates.cols() &&
              static_cast<std::size_t>(rates.rows()) == p_eq.size(),
          ErrorCode::DimensionMismatch, "rate table and p_eq sizes differ");
  for (Eigen::Index a = 0; a < rates.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < rates.cols(); ++b) {
      const double flux = p_eq[a] * rates(a, b) - p_eq[b] * rates(b, a);
      if (std::abs(flux) > tol) {
        std::ostringstream os;
        os << "pair (" << a << ", " << b << ") has net stationary flux " << flux;
        fail(ErrorCode::DetailedBalance, os.str());
      }
    }
  }
}

std::vector<GenericJump> generic_jump_operators(const RateTable& rates,
                                                const std::vector<double>& p_eq,
                                                const PairStateChooser& psi_for_pair) {
  check_detailed_balance(rates, p_eq);
  const Eigen::Index dim = rates.rows();
  std::vector<GenericJump> out;
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (a == b || !(rates(a, b) > 0.0)) continue;
      const Eigen::VectorXcd psi = psi_for_pair(a, b);
      require(psi.size() == dim, ErrorCode::DimensionMismatch, "pair state has wrong size");
      Eigen::RowVectorXcd bra = Eigen::RowVectorXcd::Zero(dim);
      bra(a) = std::sqrt(rates(a, b));
      bra(b) = -std::sqrt(rates(b, a));
      out.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), psi * bra});
    }
  }
  return out;
}

std::vector<GenericJump> generic_jump_operators(const RateTable& rates,
                                                const std::vector<double>& p_eq,
                                                const Eigen::VectorXcd& psi) {
  require(std::abs(psi.squaredNorm() - 1.0) < 1e-10, ErrorCode::NotNormalized,
          "generic jump target state must be normalized");
  return generic_jump_operators(rates, p_eq,
                                [&psi](std::size_t, std::size_t) { return psi; });
}

DenseMatrix similarity_hermitian_form(const RateTable& rates, const std::vector<double>& p_eq) {
  check_detailed_balance(rates, p_eq);
  const Eigen::Index dim = rates.rows();
  // W acts on column vectors: W(to, from) = rate(from -> to), W(c, c) = -R_c.
  Eigen::MatrixXd w = rates.transpose();
  for (Eigen::Index c = 0; c < dim; ++c) {
    w(c, c) = 0.0;
    w(c, c) = -w.col(c).sum();
  }
  DenseMatrix h(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      require(p_eq[r] > 0.0, ErrorCode::InvalidArgument,
              "similarity transform needs strictly positive p_eq");
      h(r, c) = -w(r, c) * std::sqrt(p_eq[c] / p_eq[r]);
    }
  }
  return h;
}

DenseMatrix jump_hermitian_form(const std::vector<GenericJump>& jumps, Eigen::Index dim) {
  DenseMatrix h = DenseMatrix::Zero(dim, dim);
  for (const auto& j : jumps) h.noalias() += j.op.adjoint() * j.op;
  return 0.5 * h;
}

DenseMatrix hermitian_form(const RateTable& rates, const std::vector<double>& p_eq,
                           double tol, std::size_t cap) {
  require(static_cast<std::size_t>(rates.rows()) <= cap, ErrorCode::CapExceeded,
          "hermitian form exceeds oracle cap");
  DenseMatrix h = similarity_hermitian_form(rates, p_eq);
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  require(herm <= tol, ErrorCode::Numerical,
          "similarity transform is not Hermitian (deviation " + std::to_string(herm) + ")");
  const Eigen::VectorXcd gs = ground_state_vector(p_eq);
  const DenseMatrix from_jumps =
      jump_hermitian_form(generic_jump_operators(rates, p_eq, gs), rates.rows());
  const double dev = (h - from_jumps).cwiseAbs().maxCoeff();
  require(dev <= tol, ErrorCode::Numerical,
          "similarity and jump-operator Hermitian forms differ by " + std::to_string(dev));
  return h;
}

Eigen::VectorXcd ground_state_vector(const std::vector<double>& p_eq) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(p_eq.size()));
  for (std::size_t c = 0; c < p_eq.size(); ++c) v(static_cast<Eigen::Index>(c)) = std::sqrt(p_eq[c]);
  return v;
}

PureState stationary_product_state(const QuantumKCMSpec& spec) {
  spec.validate();
  return PureState::product(spec.kcm.n_sites, dark_vector(spec.kcm.kappa));
}

PureState stationary_product_state(const RydbergSpec& spec) {
  spec.validate();
  return PureState::product(spec.n_sites, dark_vector(spec.kappa()));
}

std::vector<double> classical_equilibrium(const ClassicalKCMSpec& spec, std::size_t cap) {
  spec.validate();
  const Basis basis = spec.basis();
  require(basis.size() <= cap, ErrorCode::CapExceeded, "equilibrium table exceeds oracle cap");
  std::vector<double> p(basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    double w = 1.0;
    for (int k = 0; k < spec.n_sites; ++k) w *= basis.level(c, k) ? spec.kappa : 1.0 - spec.kappa;
    p[c] = w;
  }
  check_detailed_balance(rate_table(spec, cap), p, 1e-12);
  return p;
}

DenseMatrix dense_effective_generator(const std::vector<JumpOperator>& ops, const Basis& basis,
                                      std::size_t cap) {
  require(basis.size() <= cap, ErrorCode::CapExceeded, "effective generator exceeds oracle cap");
  return DenseMatrix(sparse_effective_generator(ops, basis));
}

SparseMatrix sparse_effective_generator(const std::vector<JumpOperator>& ops, const Basis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  SparseMatrix g(dim, dim);
  for (const auto& op : ops) {
    const SparseMatrix j = sparse_matrix_of(op, basis);
    g += SparseMatrix(j.adjoint() * j);
  }
  return g;
}

}  // namespace qkcm
