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

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qkcm/basis.hpp"

namespace qkcm {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

// Largest basis for which dense matrices are materialized by default.
inline constexpr std::size_t kDefaultOracleCap = 4096;

class PureState {
 public:
  explicit PureState(const Basis& basis);
  PureState(const Basis& basis, std::vector<Complex> amplitudes);

  static PureState basis_state(const SpinConfiguration& config);
  // Product of identical single-site states, amplitudes indexed by level.
  static PureState product(int n_sites, const std::vector<Complex>& site_state);

  const Basis& basis() const noexcept { return basis_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> mutable_amplitudes() noexcept {
    synchronized_ = false;
    return amplitudes_;
  }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  // Cached sum of |amplitude|^2; recomputed lazily after mutation.
  double squared_norm() const;
  bool is_normalized(double tol = 1e-10) const;
  void normalize();

 private:
  Basis basis_;
  std::vector<Complex> amplitudes_;
  mutable double squared_norm_ = 0.0;
  mutable bool synchronized_ = false;
};

// prefactor * f_k (neighbours) (x) local_action (site k) (x) identity.
struct LocalOperator {
  int site = 0;
  DenseMatrix local_action;
  ConstraintSpec constraint;
  Complex prefactor{1.0, 0.0};

  int local_dim() const { return static_cast<int>(local_action.rows()); }
  LocalOperator adjoint() const;
};

// Sum of local terms on the same site; every jump channel is one of these.
struct JumpOperator {
  std::vector<LocalOperator> terms;
  std::string label;

  JumpOperator() = default;
  explicit JumpOperator(LocalOperator op, std::string name = {});
  JumpOperator(std::vector<LocalOperator> ops, std::string name);

  JumpOperator adjoint() const;
};

namespace local {
DenseMatrix identity(int dim = 2);
DenseMatrix sigma_minus();  // |0><1|
DenseMatrix sigma_plus();   // |1><0|
DenseMatrix sigma_x();
DenseMatrix sigma_y();
DenseMatrix number();         // |1><1|
DenseMatrix ground_projector();  // |0><0|
DenseMatrix projector(int dim, int level);
DenseMatrix transition(int dim, int to, int from);  // |to><from|
}  // namespace local

// out += op * in, one pass over the basis, no matrix materialization.
void apply_accumulate(const Basis& basis, const LocalOperator& op,
                      std::span<const Complex> in, std::span<Complex> out);
void apply_accumulate(const Basis& basis, const JumpOperator& op,
                      std::span<const Complex> in, std::span<Complex> out);

PureState apply_local_operator(const PureState& state, const LocalOperator& op);
PureState apply_jump(const PureState& state, const JumpOperator& op);

// ||op psi||^2 without allocating a full output vector per call.
double squared_norm_after(const PureState& state, const JumpOperator& op,
                          std::vector<Complex>& scratch);

using DiagonalObservable = std::function<double(const Basis&, std::size_t)>;

namespace observables {
DiagonalObservable mean_occupation();
DiagonalObservable occupation(int site);
DiagonalObservable density_correlation(int site_a, int site_b);
}  // namespace observables

double expectation_diagonal(const PureState& state, const DiagonalObservable& observable);
Complex expectation_local(const PureState& state, const LocalOperator& op);

// Per-site <n_k> and <sigma^x_k> of a normalized state in one sweep.
struct SiteExpectations {
  std::vector<double> occupation;
  std::vector<double> sigma_x;
};
SiteExpectations site_expectations(std::span<const Complex> amplitudes, const Basis& basis);

DenseMatrix dense_matrix_of(const std::vector<LocalOperator>& sum, const Basis& basis,
                            std::size_t cap = kDefaultOracleCap);
DenseMatrix dense_matrix_of(const JumpOperator& op, const Basis& basis,
                            std::size_t cap = kDefaultOracleCap);
SparseMatrix sparse_matrix_of(const JumpOperator& op, const Basis& basis);

class DensityMatrix {
 public:
  DensityMatrix(const Basis& basis, DenseMatrix entries);
  static DensityMatrix from_pure(const PureState& state);
  static DensityMatrix maximally_mixed(const Basis& basis);

  const Basis& basis() const noexcept { return basis_; }
  const DenseMatrix& entries() const noexcept { return entries_; }

  double hermiticity_error() const;
  Complex trace() const { return entries_.trace(); }
  double min_eigenvalue() const;
  // Throws Numerical if any invariant is violated beyond the given tolerances.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10,
                double psd_tol = 1e-8) const;

  double expectation_diagonal(const DiagonalObservable& observable) const;
  Complex expectation(const LocalOperator& op) const;

 private:
  Basis basis_;
  DenseMatrix entries_;
};

}  // namespace qkcm
