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

#include <vector>

#include "qkcm/model_zoo.hpp"
#include "qkcm/ode.hpp"

namespace qkcm {

// Largest basis handled by the dense density-matrix solvers by default:
// eight two-level sites, or four three-level sites with room to spare.
inline constexpr std::size_t kDenseLindbladCap = 256;

// d rho/dt = -i[H, rho] + sum_k J_k rho J_k^dag - 1/2 {J_k^dag J_k, rho}
// with every operator held as a sparse matrix.
class LindbladGenerator {
 public:
  LindbladGenerator(const Basis& basis, std::vector<SparseMatrix> jumps,
                    SparseMatrix hamiltonian);
  LindbladGenerator(const std::vector<JumpOperator>& jumps, const Basis& basis,
                    std::size_t cap = kDenseLindbladCap);

  const Basis& basis() const noexcept { return basis_; }
  void apply(const DenseMatrix& rho, DenseMatrix& drho) const;
  DenseMatrix apply(const DenseMatrix& rho) const;
  // Upper bound on the 1-norm of the superoperator.
  double rate_bound() const;

  // Smallest sorted set of basis states holding the support of rho that every
  // jump and the no-jump kernel map into itself.
  std::vector<std::size_t> invariant_sector(const DenseMatrix& rho) const;
  // The same generator acting on density matrices supported on `states`,
  // written in the coordinates of that list.
  LindbladGenerator restricted(const std::vector<std::size_t>& states) const;

 private:
  Basis basis_;
  std::vector<SparseMatrix> jumps_;
  SparseMatrix kernel_;  // G/2 + iH

  LindbladGenerator(const Basis& basis, std::vector<SparseMatrix> jumps, SparseMatrix kernel,
                    bool);
};

// RungeKutta integrates adaptively. Propagator builds the real superoperator
// on Hermitian coordinates and applies exp(L h 2^k) from repeated squaring,
// which suits stiff generators over long horizons. Auto picks by cost.
enum class DenseMethod { Auto, RungeKutta, Propagator };

struct DenseSolveOptions {
  OdeOptions ode{1e-10, 1e-12};
  DenseMethod method = DenseMethod::Auto;
  // Largest superoperator dimension (states^2) for the propagator.
  std::size_t propagator_cap = 4096;
  bool validate = true;
  // Integrate on invariant_sector(rho0) and embed the results back.
  bool restrict_to_sector = true;
  double herm_tol = 1e-10;
  double trace_tol = 1e-10;
  double psd_tol = 1e-8;
};

std::vector<DensityMatrix> lindblad_solve(const LindbladGenerator& generator,
                                          const DensityMatrix& rho0,
                                          const std::vector<double>& times,
                                          const DenseSolveOptions& options = {});

std::vector<DensityMatrix> lindblad_solve_dense(const std::vector<JumpOperator>& jumps,
                                                const DensityMatrix& rho0,
                                                const std::vector<double>& times,
                                                const DenseSolveOptions& options = {},
                                                std::size_t cap = kDenseLindbladCap);

// Levels per site: 0 = g, 1 = p, 2 = r. Requires spec.three_level.
LindbladGenerator three_level_generator(const RydbergSpec& spec,
                                        std::size_t cap = kDenseLindbladCap);

// 4 omega_c^2 / gamma: multiply physical time by this to get effective time.
double rescaled_time_factor(const ThreeLevelParams& params);

// Integrates the g/p/r master equation on physical times.
std::vector<DensityMatrix> three_level_lindblad(const RydbergSpec& spec,
                                                const DensityMatrix& rho0,
                                                const std::vector<double>& times,
                                                const DenseSolveOptions& options = {});

// Mean occupation per site of the excited level (r for three-level bases).
double mean_excitation(const DensityMatrix& rho);
// (1/N) sum_k <|0_k><top_k| + h.c.>, Pauli normalization.
double mean_sigma_x(const DensityMatrix& rho);

}  // namespace qkcm
