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

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Sparse>

namespace ceit {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Atomic levels in basis order. Two-level spaces use {u, e} only.
enum class Level : int { u = 0, e = 1, g = 2 };

enum class Slot { atom, photon, phonon };

// Factor sizes of atom ⊗ photon Fock ⊗ phonon Fock.
//
// Basis ordering: the atom index varies slowest and the phonon index fastest,
//   index = (atom * n_photon + photon) * n_phonon + phonon.
struct SpaceDims {
  int n_atom = 3;
  int n_photon = 4;
  int n_phonon = 12;

  int total() const { return n_atom * n_photon * n_phonon; }
  int factor(Slot slot) const;
  int index(int atom, int photon, int phonon) const {
    return (atom * n_photon + photon) * n_phonon + phonon;
  }
  int atom_of(int index) const { return index / (n_photon * n_phonon); }
  int photon_of(int index) const { return (index / n_phonon) % n_photon; }
  int phonon_of(int index) const { return index % n_phonon; }

  // Throws InvalidArgument when any factor is smaller than one.
  void validate() const;

  friend bool operator==(const SpaceDims&, const SpaceDims&) = default;
};

// Square sparse operator on the composite space described by dims().
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(SpaceDims dims, SparseMatrix matrix);

  static OperatorMatrix zero(const SpaceDims& dims);
  static OperatorMatrix identity(const SpaceDims& dims);

  const SpaceDims& dims() const { return dims_; }
  const SparseMatrix& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(matrix_.rows()); }

  Complex element(int row, int col) const { return matrix_.coeff(row, col); }
  OperatorMatrix adjoint() const;
  // max |H_ij - conj(H_ji)|
  double hermiticity_defect() const;
  // Frobenius norm.
  double norm() const { return matrix_.norm(); }

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(Complex scale);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
  friend OperatorMatrix operator*(Complex scale, OperatorMatrix op) { return op *= scale; }
  friend OperatorMatrix operator*(OperatorMatrix op, Complex scale) { return op *= scale; }
  friend OperatorMatrix operator-(OperatorMatrix op) { return op *= -1.0; }

 private:
  void require_same_dims(const OperatorMatrix& other) const;

  SpaceDims dims_{1, 1, 1};
  SparseMatrix matrix_;
};

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

// Truncated single-mode annihilation operator on Fock states 0..n-1.
SparseMatrix annihilation(int n);

// |i><j| on an n-level factor.
SparseMatrix transition(int n, int i, int j);

// 1 ⊗ ... ⊗ op ⊗ ... ⊗ 1 in factor order (atom, photon, phonon).
OperatorMatrix tensor_embed(const SparseMatrix& op, Slot slot, const SpaceDims& dims);

// Elementary operators on one composite space. Immutable once built.
class OperatorSet {
 public:
  explicit OperatorSet(const SpaceDims& dims);

  const SpaceDims& dims() const { return dims_; }
  const OperatorMatrix& a() const { return a_; }
  const OperatorMatrix& a_dag() const { return a_dag_; }
  const OperatorMatrix& b() const { return b_; }
  const OperatorMatrix& b_dag() const { return b_dag_; }
  const OperatorMatrix& identity() const { return identity_; }
  // sigma(i, j) = |i><j| ⊗ 1 ⊗ 1. Throws when a level lies outside n_atom.
  const OperatorMatrix& sigma(Level i, Level j) const;

 private:
  SpaceDims dims_;
  OperatorMatrix a_, a_dag_, b_, b_dag_, identity_;
  std::vector<OperatorMatrix> sigma_;
};

inline OperatorSet build_space(const SpaceDims& dims) { return OperatorSet(dims); }

}  // namespace ceit
