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

#include "cavityeit/weak_probe.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "cavityeit/errors.hpp"
#include "sparse_lu.hpp"

namespace ceit {

namespace {

using Triplet = Eigen::Triplet<Complex>;

int excitation(const SpaceDims& dims, int index) {
  const int atom = dims.atom_of(index);
  const bool excited = atom == static_cast<int>(Level::e) || atom == static_cast<int>(Level::u);
  return dims.photon_of(index) + (excited ? 1 : 0);
}

// Sub-block of m with the given global row/column indices.
SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  std::vector<int> row_map(m.rows(), -1);
  std::vector<int> col_map(m.cols(), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) row_map[rows[k]] = static_cast<int>(k);
  for (std::size_t k = 0; k < cols.size(); ++k) col_map[cols[k]] = static_cast<int>(k);
  std::vector<Triplet> entries;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const int r = row_map[it.row()];
      const int c = col_map[it.col()];
      if (r >= 0 && c >= 0 && it.value() != Complex(0.0)) entries.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

struct JumpPair {
  SparseMatrix left;   // 2r·A on the row sector
  SparseMatrix right;  // A on the column sector
};

// Generator restricted to one (P, Q) block of ρ:
//   X ↦ −i Heff_P X + i X Heff_Q† + Σ 2r A_P X A_Q†,  Heff = H − iΣ r A†A.
// Unknown (i, j) has column-stacked index i + |P|·j.
struct BlockGenerator {
  SparseMatrix heff_left;
  SparseMatrix heff_right;
  std::vector<JumpPair> jumps;

  int rows() const { return static_cast<int>(heff_left.rows()); }
  int cols() const { return static_cast<int>(heff_right.rows()); }

  template <typename Visit>
  void for_each_entry(int node, Visit&& visit) const {
    const int p = rows();
    const int i = node % p;
    const int j = node / p;
    for (SparseMatrix::InnerIterator it(heff_left, i); it; ++it) {
      visit(static_cast<int>(it.row()) + p * j, Complex(0.0, -1.0) * it.value());
    }
    for (SparseMatrix::InnerIterator it(heff_right, j); it; ++it) {
      visit(i + p * static_cast<int>(it.row()), Complex(0.0, 1.0) * std::conj(it.value()));
    }
    for (const JumpPair& jump : jumps) {
      for (SparseMatrix::InnerIterator a(jump.left, i); a; ++a) {
        for (SparseMatrix::InnerIterator b(jump.right, j); b; ++b) {
          visit(static_cast<int>(a.row()) + p * static_cast<int>(b.row()),
                a.value() * std::conj(b.value()));
        }
      }
    }
  }

  // Unknowns reachable from the seeds along the generator's action. The
  // block is closed under this set, so the solution vanishes outside it.
  std::vector<int> closure(const std::vector<int>& seeds) const {
    std::vector<char> seen(static_cast<std::size_t>(rows()) * cols(), 0);
    std::deque<int> queue;
    for (int s : seeds) {
      if (!seen[s]) {
        seen[s] = 1;
        queue.push_back(s);
      }
    }
    std::vector<int> nodes;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      nodes.push_back(node);
      for_each_entry(node, [&](int target, Complex) {
        if (!seen[target]) {
          seen[target] = 1;
          queue.push_back(target);
        }
      });
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  }

  // Generator on `nodes`, leaving local row `skip_row` empty.
  SparseMatrix assemble(const std::vector<int>& nodes, std::vector<int>& local,
                        int skip_row = -1) const {
    local.assign(static_cast<std::size_t>(rows()) * cols(), -1);
    for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = static_cast<int>(k);
    std::vector<Triplet> entries;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      for_each_entry(nodes[k], [&](int target, Complex value) {
        const int r = local[target];
        if (r != skip_row) entries.emplace_back(r, static_cast<int>(k), value);
      });
    }
    const auto n = static_cast<Eigen::Index>(nodes.size());
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
  }
};

BlockGenerator make_block(const SparseMatrix& heff, std::span<const Channel> channels,
                          const std::vector<int>& left, const std::vector<int>& right) {
  BlockGenerator gen;
  gen.heff_left = restrict_to(heff, left, left);
  gen.heff_right = restrict_to(heff, right, right);
  for (const Channel& ch : channels) {
    if (ch.rate == 0.0) continue;
    JumpPair pair{restrict_to(ch.jump.matrix(), left, left),
                  restrict_to(ch.jump.matrix(), right, right)};
    if (pair.left.nonZeros() == 0 || pair.right.nonZeros() == 0) continue;
    pair.left *= Complex(2.0 * ch.rate);
    gen.jumps.push_back(std::move(pair));
  }
  return gen;
}

// Solves generator·x = −source on the closure of the source support.
Eigen::MatrixXcd solve_driven_block(const BlockGenerator& gen, const Eigen::MatrixXcd& source,
                                    const char* what, int& unknowns) {
  std::vector<int> seeds;
  const int p = gen.rows();
  for (int j = 0; j < source.cols(); ++j) {
    for (int i = 0; i < p; ++i) {
      if (source(i, j) != Complex(0.0)) seeds.push_back(i + p * j);
    }
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(source.rows(), source.cols());
  unknowns = static_cast<int>(seeds.size());
  if (seeds.empty()) return out;
  const std::vector<int> nodes = gen.closure(seeds);
  unknowns = static_cast<int>(nodes.size());
  std::vector<int> local;
  const SparseMatrix m = gen.assemble(nodes, local);
  Eigen::VectorXcd rhs(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) rhs(k) = -source(nodes[k] % p, nodes[k] / p);
  const Eigen::VectorXcd x = detail::lu_solve(m, rhs, what);
  if (const double residual = (m * x - rhs).norm(); residual > 1e-9 * std::max(rhs.norm(), 1e-300)) {
    throw SolverError(std::string(what) + ": residual " + std::to_string(residual));
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) out(nodes[k] % p, nodes[k] / p) = x(k);
  return out;
}

// Trace-normalized null vector of the K = 0 block.
Eigen::MatrixXcd solve_ground_block(const BlockGenerator& gen) {
  const int p = gen.rows();
  std::vector<int> diagonal(p);
  for (int i = 0; i < p; ++i) diagonal[i] = i * (p + 1);
  const std::vector<int> nodes = gen.closure(diagonal);
  std::vector<int> local;
  // Node 0 is the first diagonal element; its equation is the redundant one.
  SparseMatrix m = gen.assemble(nodes, local, 0);
  std::vector<Triplet> entries;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int d : diagonal) entries.emplace_back(0, local[d], Complex(1.0));
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m.rows());
  rhs(0) = 1.0;
  const Eigen::VectorXcd x = detail::lu_solve(m, rhs, "undriven state");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(p, p);
  for (std::size_t k = 0; k < nodes.size(); ++k) rho(nodes[k] % p, nodes[k] / p) = x(k);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace();
}

void require_graded(const SparseMatrix& m, const SpaceDims& dims, const std::string& name,
                    bool allow_lowering) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      const int shift = excitation(dims, static_cast<int>(it.row())) -
                        excitation(dims, static_cast<int>(it.col()));
      if (shift > 0 || (shift < 0 && !allow_lowering)) {
        throw InvalidArgument(name + " does not respect the excitation grading needed by the "
                                     "weak-probe solver");
      }
    }
  }
}

}  // namespace

WeakProbeResponse weak_probe_response(const OperatorMatrix& h0, std::span<const Channel> channels,
                                      double epsilon) {
  const SpaceDims dims = h0.dims();
  if (dims.n_atom != 3) {
    throw DimensionMismatch("weak-probe solver needs n_atom = 3, got " +
                            std::to_string(dims.n_atom));
  }
  if (dims.n_photon < 2) {
    throw InvalidArgument("weak-probe solver needs n_photon >= 2, got " +
                          std::to_string(dims.n_photon));
  }
  if (!std::isfinite(epsilon)) throw InvalidArgument("probe amplitude must be finite");
  require_graded(h0.matrix(), dims, "probe-free Hamiltonian", false);

  const int d = dims.total();
  SparseMatrix damping(d, d);
  for (const Channel& ch : channels) {
    if (!(ch.jump.dims() == dims)) {
      throw DimensionMismatch("channel '" + ch.name + "' acts on a different space");
    }
    require_graded(ch.jump.matrix(), dims, "channel '" + ch.name + "'", true);
    damping += ch.rate * (SparseMatrix(ch.jump.matrix().adjoint()) * ch.jump.matrix());
  }
  const SparseMatrix heff = h0.matrix() - Complex(0.0, 1.0) * damping;

  std::vector<int> ground_sector;
  std::vector<int> single_sector;
  for (int i = 0; i < d; ++i) {
    const int k = excitation(dims, i);
    if (k == 0) ground_sector.push_back(i);
    if (k == 1) single_sector.push_back(i);
  }

  WeakProbeResponse out;
  out.ground = solve_ground_block(make_block(heff, channels, ground_sector, ground_sector));

  const OperatorSet ops(dims);
  const SparseMatrix& b = ops.b().matrix();
  const SparseMatrix phonon_number = restrict_to(SparseMatrix(b.adjoint()) * b, ground_sector,
                                                 ground_sector);
  out.phonon_number = (phonon_number * out.ground).trace().real();

  const SparseMatrix a_up = restrict_to(ops.a_dag().matrix(), single_sector, ground_sector);
  const SparseMatrix a_down = restrict_to(ops.a().matrix(), ground_sector, single_sector);
  const Complex drive(0.0, -epsilon);

  const Eigen::MatrixXcd first_source = drive * (a_up * out.ground);
  const Eigen::MatrixXcd coherence =
      solve_driven_block(make_block(heff, channels, single_sector, ground_sector), first_source,
                         "first-order coherence", out.coherence_unknowns);

  out.field = (a_down * coherence).trace();

  const Eigen::MatrixXcd second_source =
      drive * (a_up * coherence.adjoint() - coherence * a_down);
  const Eigen::MatrixXcd population =
      solve_driven_block(make_block(heff, channels, single_sector, single_sector), second_source,
                         "second-order population", out.population_unknowns);

  const SparseMatrix number =
      restrict_to(ops.a_dag().matrix() * ops.a().matrix(), single_sector, single_sector);
  Complex total = 0.0;
  for (int k = 0; k < number.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(number, k); it; ++it) {
      total += it.value() * population(it.col(), it.row());
    }
  }
  out.photon_number = total.real();
  return out;
}

}  // namespace ceit
