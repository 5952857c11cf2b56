// Copyright 2026 The cavityeit Authors
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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavityeit/hilbert.hpp"
#include "cavityeit/model.hpp"

namespace ceit {

// Density matrix on a composite space. Construction does not validate;
// call validate() where a physical state is required.
class DensityMatrix {
 public:
  DensityMatrix(SpaceDims dims, Eigen::MatrixXcd rho);

  // |index><index|
  static DensityMatrix basis_state(const SpaceDims& dims, int index);

  const SpaceDims& dims() const { return dims_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  int size() const { return static_cast<int>(rho_.rows()); }

  Complex trace() const { return rho_.trace(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  double population(int index) const { return rho_(index, index).real(); }

  // Hermitian within 1e-10, unit trace within 1e-10, eigenvalues >= -1e-8.
  void validate() const;

 private:
  SpaceDims dims_;
  Eigen::MatrixXcd rho_;
};

// Column-stacking superoperator: vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
struct Liouvillian {
  SpaceDims dims;
  SparseMatrix superop;
};

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& vec, int dim);

// −i[H,·] + Σ_k r_k (2A_k·A_k† − A_k†A_k· − ·A_k†A_k). Zero-rate channels are
// skipped.
Liouvillian build_liouvillian(const OperatorMatrix& hamiltonian,
                              std::span<const Channel> channels);

// Solves Lρ = 0 with tr ρ = 1 by sparse LU on L with its first row replaced by
// the vectorized trace functional. Small problems fall back to a dense LU when
// the sparse factorization reports a singular matrix.
// Throws NonUniqueSteadyState for a degenerate null space and SolverError when
// the residual exceeds 1e-9·‖L‖.
DensityMatrix steady_state(const Liouvillian& liouvillian);

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  double initial_step = 1e-3;
};

// Dormand–Prince 5(4) integration of dρ/dt = Lρ; returns ρ at every entry of
// `times` (ascending; times[0] is the time of rho0).
std::vector<DensityMatrix> evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                                  std::span<const double> times, const EvolveOptions& options = {});

// tr(op ρ)
Complex expect(const OperatorMatrix& op, const DensityMatrix& rho);

struct ConvergenceReport {
  SpaceDims base;
  SpaceDims doubled;
  double base_value = 0.0;
  double doubled_value = 0.0;
  double relative_change = 0.0;
  double tolerance = 1e-3;
  bool passed = false;
};

// Re-evaluates `observable` with the photon and phonon cutoffs doubled.
ConvergenceReport convergence_check(const SystemParams& p,
                                    const std::function<double(const SystemParams&)>& observable,
                                    double tolerance = 1e-3);

// Doubles the phonon cutoff, starting from p.dims.n_phonon, until one more
// doubling changes `observable` by less than `tolerance` (relative). The
// returned report's base is the certified cutoff. Throws SolverError once
// the doubled cutoff would exceed max_phonon.
ConvergenceReport certify_phonon_cutoff(SystemParams p,
                                        const std::function<double(const SystemParams&)>& observable,
                                        double tolerance = 1e-3, int max_phonon = 512);

}  // namespace ceit
