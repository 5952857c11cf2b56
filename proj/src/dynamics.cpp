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

#include "cavityeit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "cavityeit/errors.hpp"

namespace ceit {

namespace {

constexpr int kDenseFallbackLimit = 2500;  // Liouvillian rows

SparseMatrix kron(const SparseMatrix& lhs, const SparseMatrix& rhs) {
  return Eigen::kroneckerProduct(lhs, rhs).eval();
}

SparseMatrix sparse_identity(int n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

// L with row 0 replaced by the trace functional Σ_i ρ_ii.
SparseMatrix with_trace_row(const SparseMatrix& superop, int dim) {
  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(superop.nonZeros() + dim));
  for (int k = 0; k < superop.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(superop, k); it; ++it) {
      if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < dim; ++i) entries.emplace_back(0, i * (dim + 1), Complex(1.0));
  SparseMatrix m(superop.rows(), superop.cols());
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

}  // namespace

DensityMatrix::DensityMatrix(SpaceDims dims, Eigen::MatrixXcd rho)
    : dims_(dims), rho_(std::move(rho)) {
  dims_.validate();
  if (rho_.rows() != dims_.total() || rho_.cols() != dims_.total()) {
    throw DimensionMismatch("density matrix is " + std::to_string(rho_.rows()) + "x" +
                            std::to_string(rho_.cols()) + " but the space has dimension " +
                            std::to_string(dims_.total()));
  }
}

DensityMatrix DensityMatrix::basis_state(const SpaceDims& dims, int index) {
  dims.validate();
  if (index < 0 || index >= dims.total()) {
    throw InvalidArgument("basis index " + std::to_string(index) + " outside the space");
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dims.total(), dims.total());
  rho(index, index) = 1.0;
  return DensityMatrix(dims, std::move(rho));
}

double DensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  if (const double defect = hermiticity_defect(); defect > 1e-10) {
    throw InvalidArgument("density matrix is not Hermitian (defect " + std::to_string(defect) +
                          ")");
  }
  if (const Complex tr = trace(); std::abs(tr - 1.0) > 1e-10) {
    throw InvalidArgument("density matrix trace is " + std::to_string(tr.real()) + " not 1");
  }
  if (const double lowest = min_eigenvalue(); lowest < -1e-8) {
    throw InvalidArgument("density matrix has eigenvalue " + std::to_string(lowest));
  }
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& vec, int dim) {
  if (vec.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionMismatch("vector of length " + std::to_string(vec.size()) +
                            " is not a vectorized " + std::to_string(dim) + "x" +
                            std::to_string(dim) + " matrix");
  }
  return Eigen::Map<const Eigen::MatrixXcd>(vec.data(), dim, dim);
}

Liouvillian build_liouvillian(const OperatorMatrix& hamiltonian,
                              std::span<const Channel> channels) {
  const SpaceDims dims = hamiltonian.dims();
  const int d = dims.total();
  const SparseMatrix id = sparse_identity(d);
  const SparseMatrix& h = hamiltonian.matrix();

  SparseMatrix superop =
      Complex(0.0, -1.0) * (kron(id, h) - kron(SparseMatrix(h.transpose()), id));
  for (const Channel& channel : channels) {
    if (!(channel.jump.dims() == dims)) {
      throw DimensionMismatch("channel '" + channel.name + "' acts on a different space");
    }
    if (channel.rate < 0.0) {
      throw InvalidArgument("channel '" + channel.name + "' has a negative rate");
    }
    if (channel.rate == 0.0) continue;
    const SparseMatrix& jump = channel.jump.matrix();
    const SparseMatrix number = SparseMatrix(jump.adjoint()) * jump;
    superop += channel.rate * (2.0 * kron(SparseMatrix(jump.conjugate()), jump) -
                               kron(id, number) - kron(SparseMatrix(number.transpose()), id));
  }
  superop.makeCompressed();
  return {dims, std::move(superop)};
}

DensityMatrix steady_state(const Liouvillian& liouvillian) {
  const int d = liouvillian.dims.total();
  const SparseMatrix& superop = liouvillian.superop;
  if (superop.rows() != static_cast<Eigen::Index>(d) * d) {
    throw DimensionMismatch("Liouvillian size does not match its dimensions");
  }
  const SparseMatrix system = with_trace_row(superop, d);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(system.rows());
  rhs(0) = 1.0;

  Eigen::VectorXcd solution;
  Eigen::UmfPackLU<SparseMatrix> lu;
  lu.compute(system);
  if (lu.info() == Eigen::Success) {
    solution = lu.solve(rhs);
  } else if (system.rows() <= kDenseFallbackLimit) {
    const Eigen::MatrixXcd dense(system);
    Eigen::FullPivLU<Eigen::MatrixXcd> dense_lu(dense);
    if (!dense_lu.isInvertible()) {
      throw NonUniqueSteadyState("non-unique steady state: Liouvillian null space has dimension " +
                                 std::to_string(dense.rows() - dense_lu.rank() + 1));
    }
    solution = dense_lu.solve(rhs);
  } else {
    throw NonUniqueSteadyState(
        "non-unique steady state: trace-constrained Liouvillian is singular");
  }
  if (!solution.allFinite()) {
    throw SolverError("steady-state solve produced non-finite values");
  }

  const double residual = (superop * solution).norm();
  const double scale = superop.norm();
  if (residual > 1e-9 * std::max(scale, 1.0)) {
    throw SolverError("steady-state residual " + std::to_string(residual) +
                      " exceeds tolerance (|L| = " + std::to_string(scale) + ")");
  }
  Eigen::MatrixXcd rho = unvectorize(solution, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  return DensityMatrix(liouvillian.dims, std::move(rho));
}

std::vector<DensityMatrix> evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                                  std::span<const double> times, const EvolveOptions& options) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Complex>;

  if (!(rho0.dims() == liouvillian.dims)) {
    throw DimensionMismatch("initial state and Liouvillian act on different spaces");
  }
  if (times.empty()) return {};
  if (!std::is_sorted(times.begin(), times.end())) {
    throw InvalidArgument("evolve needs ascending sample times");
  }

  const int d = liouvillian.dims.total();
  const Eigen::VectorXcd initial = vectorize(rho0.matrix());
  State state(initial.data(), initial.data() + initial.size());

  std::vector<DensityMatrix> trajectory;
  trajectory.reserve(times.size());
  auto record = [&](const State& x, double /*t*/) {
    const Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), d, d);
    trajectory.emplace_back(liouvillian.dims, Eigen::MatrixXcd(rho));
  };

  if (liouvillian.superop.nonZeros() == 0 || times.front() == times.back()) {
    for (std::size_t k = 0; k < times.size(); ++k) record(state, times[k]);
    return trajectory;
  }

  const SparseMatrix& superop = liouvillian.superop;
  auto rhs = [&superop](const State& x, State& dxdt, double /*t*/) {
    const Eigen::Map<const Eigen::VectorXcd> in(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXcd> out(dxdt.data(), static_cast<Eigen::Index>(dxdt.size()));
    out.noalias() = superop * in;
  };

  const double span_length = times.back() - times.front();
  const double first_step = std::min(options.initial_step, span_length);
  try {
    auto stepper = odeint::make_dense_output(options.atol, options.rtol,
                                             odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, state, times.begin(), times.end(), first_step, record,
                            odeint::max_step_checker(5'000'000));
  } catch (const std::exception& ex) {
    throw SolverError(std::string("time integration failed: ") + ex.what());
  }
  return trajectory;
}

Complex expect(const OperatorMatrix& op, const DensityMatrix& rho) {
  if (!(op.dims() == rho.dims())) {
    throw DimensionMismatch("operator and state act on different spaces");
  }
  const SparseMatrix& m = op.matrix();
  const Eigen::MatrixXcd& r = rho.matrix();
  Complex total = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      total += it.value() * r(it.col(), it.row());
    }
  }
  return total;
}

ConvergenceReport convergence_check(const SystemParams& p,
                                    const std::function<double(const SystemParams&)>& observable,
                                    double tolerance) {
  ConvergenceReport report;
  report.tolerance = tolerance;
  report.base = p.dims;
  SystemParams doubled = p;
  // Factors of size one are structural (mode absent), not truncations.
  if (doubled.dims.n_photon > 1) doubled.dims.n_photon *= 2;
  if (doubled.dims.n_phonon > 1) doubled.dims.n_phonon *= 2;
  report.doubled = doubled.dims;
  report.base_value = observable(p);
  report.doubled_value = observable(doubled);
  const double scale = std::max(std::abs(report.doubled_value), 1e-300);
  report.relative_change = std::abs(report.base_value - report.doubled_value) / scale;
  report.passed = report.relative_change < tolerance;
  return report;
}

ConvergenceReport certify_phonon_cutoff(SystemParams p,
                                        const std::function<double(const SystemParams&)>& observable,
                                        double tolerance, int max_phonon) {
  if (!(tolerance > 0.0)) throw InvalidArgument("certify_phonon_cutoff: tolerance must be positive");
  p.dims.validate();
  double current = observable(p);
  while (2 * p.dims.n_phonon <= max_phonon) {
    SystemParams doubled = p;
    doubled.dims.n_phonon *= 2;
    const double next = observable(doubled);
    const double change = std::abs(current - next) / std::max(std::abs(next), 1e-300);
    if (change < tolerance) {
      return {p.dims, doubled.dims, current, next, change, tolerance, true};
    }
    p = doubled;
    current = next;
  }
  throw SolverError("phonon cutoff not certified at " + std::to_string(tolerance) +
                    " below n_phonon = " + std::to_string(max_phonon));
}

}  // namespace ceit
