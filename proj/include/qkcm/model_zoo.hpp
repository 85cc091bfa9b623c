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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qkcm/spin_space.hpp"

namespace qkcm {

// kappa/(1-kappa) = ratio.
double kappa_from_ratio(double ratio);

struct ClassicalKCMSpec {
  double lambda = 1.0;
  double kappa = 0.5;
  ConstraintSpec constraint;
  int n_sites = 1;

  void validate() const;
  Basis basis() const { return Basis(n_sites, 2); }
  std::string describe() const;
};

struct QuantumKCMSpec {
  ClassicalKCMSpec kcm;
  double theta = 0.0;
  // Replaces exp(i theta sigma^y) when set; must be a 2x2 unitary.
  std::optional<DenseMatrix> unitary;

  void validate() const;
  Basis basis() const { return kcm.basis(); }
  DenseMatrix site_unitary() const;
  std::string describe() const;
};

struct ThreeLevelParams {
  double omega_c = 1.0;
  double omega_p = 1.0;
  double gamma = 20.0;
  double v = 400.0;
};

struct RydbergSpec {
  double x = 1.0;
  int n_sites = 1;
  Boundary boundary = Boundary::Open;
  std::optional<ThreeLevelParams> three_level;

  void validate() const;
  Basis basis() const { return Basis(n_sites, 2); }
  // Equilibrium occupation of the small-x KCM reading, x^2/(1+x^2).
  double kappa() const { return x * x / (1.0 + x * x); }
  std::string describe() const;
};

enum class Direction { Up, Down };

struct ClassicalTransition {
  int site = 0;
  Direction direction = Direction::Up;
  double rate = 0.0;
  std::size_t target = 0;  // ordinal after the flip

  bool operator==(const ClassicalTransition&) const = default;
};

std::vector<ClassicalTransition> classical_transitions(const ClassicalKCMSpec& spec,
                                                       const SpinConfiguration& config);
std::vector<ClassicalTransition> classical_transitions(const ClassicalKCMSpec& spec,
                                                       std::size_t ordinal);

// Single-site vectors |B> = sqrt(k)|0> - sqrt(1-k)|1> and |S> = sqrt(1-k)|0> + sqrt(k)|1>.
std::vector<Complex> bright_vector(double kappa);
std::vector<Complex> dark_vector(double kappa);

std::vector<JumpOperator> quantum_jump_operators(const QuantumKCMSpec& spec);
std::vector<JumpOperator> rydberg_jump_operators(const RydbergSpec& spec);

// sqrt(1+x^2) |0_k><B_k| p_{k-1} p_{k+1} with kappa/(1-kappa) = x^2.
std::vector<JumpOperator> rydberg_kcm_form_operators(const RydbergSpec& spec);

// Classical hard-rod counterpart of the Rydberg gas at the same x.
ClassicalKCMSpec excluded_volume_classical_spec(const RydbergSpec& spec, double lambda = 1.0);

// W(from, to) = rate of the transition from -> to; the diagonal is unused.
using RateTable = Eigen::MatrixXd;

RateTable rate_table(const ClassicalKCMSpec& spec, std::size_t cap = kDefaultOracleCap);

// Throws DetailedBalance naming the first offending ordered pair.
void check_detailed_balance(const RateTable& rates, const std::vector<double>& p_eq,
                            double tol = 1e-10);

struct GenericJump {
  std::size_t from = 0;
  std::size_t to = 0;
  DenseMatrix op;
};

using PairStateChooser = std::function<Eigen::VectorXcd(std::size_t from, std::size_t to)>;

// One operator per ordered pair with positive rate:
// J = |psi>(sqrt(W[from->to]) <from| - sqrt(W[to->from]) <to|).
std::vector<GenericJump> generic_jump_operators(const RateTable& rates,
                                                const std::vector<double>& p_eq,
                                                const Eigen::VectorXcd& psi);
std::vector<GenericJump> generic_jump_operators(const RateTable& rates,
                                                const std::vector<double>& p_eq,
                                                const PairStateChooser& psi_for_pair);

// -P^{-1} W P with P = diag(sqrt(p_eq)).
DenseMatrix similarity_hermitian_form(const RateTable& rates, const std::vector<double>& p_eq);
// 1/2 sum_mu J_mu^dag J_mu.
DenseMatrix jump_hermitian_form(const std::vector<GenericJump>& jumps, Eigen::Index dim);

// Similarity route, cross-checked elementwise against the jump-operator route.
DenseMatrix hermitian_form(const RateTable& rates, const std::vector<double>& p_eq,
                           double tol = 1e-10, std::size_t cap = kDefaultOracleCap);

Eigen::VectorXcd ground_state_vector(const std::vector<double>& p_eq);

PureState stationary_product_state(const QuantumKCMSpec& spec);
PureState stationary_product_state(const RydbergSpec& spec);

std::vector<double> classical_equilibrium(const ClassicalKCMSpec& spec,
                                          std::size_t cap = kDefaultOracleCap);

// sum_k J_k^dag J_k as a dense or sparse matrix.
DenseMatrix dense_effective_generator(const std::vector<JumpOperator>& ops, const Basis& basis,
                                      std::size_t cap = kDefaultOracleCap);
SparseMatrix sparse_effective_generator(const std::vector<JumpOperator>& ops, const Basis& basis);

}  // namespace qkcm
