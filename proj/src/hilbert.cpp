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

#include "cavityeit/hilbert.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "cavityeit/errors.hpp"

namespace ceit {

int SpaceDims::factor(Slot slot) const {
  switch (slot) {
    case Slot::atom:
      return n_atom;
    case Slot::photon:
      return n_photon;
    case Slot::phonon:
      return n_phonon;
  }
  return 0;
}

void SpaceDims::validate() const {
  if (n_atom < 1 || n_photon < 1 || n_phonon < 1) {
    throw InvalidArgument("space dimensions must be >= 1, got (" + std::to_string(n_atom) + ", " +
                          std::to_string(n_photon) + ", " + std::to_string(n_phonon) + ")");
  }
}

OperatorMatrix::OperatorMatrix(SpaceDims dims, SparseMatrix matrix)
    : dims_(dims), matrix_(std::move(matrix)) {
  dims_.validate();
  if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total()) {
    throw DimensionMismatch("operator is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + " but the space has dimension " +
                            std::to_string(dims_.total()));
  }
  matrix_.makeCompressed();
}

OperatorMatrix OperatorMatrix::zero(const SpaceDims& dims) {
  return OperatorMatrix(dims, SparseMatrix(dims.total(), dims.total()));
}

OperatorMatrix OperatorMatrix::identity(const SpaceDims& dims) {
  SparseMatrix m(dims.total(), dims.total());
  m.setIdentity();
  return OperatorMatrix(dims, std::move(m));
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(dims_, SparseMatrix(matrix_.adjoint()));
}

double OperatorMatrix::hermiticity_defect() const {
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

void OperatorMatrix::require_same_dims(const OperatorMatrix& other) const {
  if (!(dims_ == other.dims_)) {
    throw DimensionMismatch("operators act on different spaces");
  }
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  require_same_dims(rhs);
  matrix_ += rhs.matrix_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  require_same_dims(rhs);
  matrix_ -= rhs.matrix_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex scale) {
  matrix_ *= scale;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  lhs.require_same_dims(rhs);
  return OperatorMatrix(lhs.dims_, SparseMatrix(lhs.matrix_ * rhs.matrix_));
}

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  return lhs * rhs - rhs * lhs;
}

SparseMatrix annihilation(int n) {
  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int k = 1; k < n; ++k) {
    m.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  m.makeCompressed();
  return m;
}

SparseMatrix transition(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw InvalidArgument("transition |" + std::to_string(i) + "><" + std::to_string(j) +
                          "| outside a " + std::to_string(n) + "-level factor");
  }
  SparseMatrix m(n, n);
  m.insert(i, j) = 1.0;
  m.makeCompressed();
  return m;
}

namespace {

SparseMatrix identity_of(int n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

SparseMatrix kron(const SparseMatrix& lhs, const SparseMatrix& rhs) {
  return Eigen::kroneckerProduct(lhs, rhs).eval();
}

}  // namespace

OperatorMatrix tensor_embed(const SparseMatrix& op, Slot slot, const SpaceDims& dims) {
  dims.validate();
  const int expected = dims.factor(slot);
  if (op.rows() != expected || op.cols() != expected) {
    throw DimensionMismatch("factor operator is " + std::to_string(op.rows()) + "x" +
                            std::to_string(op.cols()) + ", slot expects " +
                            std::to_string(expected));
  }
  const SparseMatrix atom = slot == Slot::atom ? op : identity_of(dims.n_atom);
  const SparseMatrix photon = slot == Slot::photon ? op : identity_of(dims.n_photon);
  const SparseMatrix phonon = slot == Slot::phonon ? op : identity_of(dims.n_phonon);
  return OperatorMatrix(dims, kron(kron(atom, photon), phonon));
}

OperatorSet::OperatorSet(const SpaceDims& dims) : dims_(dims) {
  dims_.validate();
  a_ = tensor_embed(annihilation(dims_.n_photon), Slot::photon, dims_);
  a_dag_ = a_.adjoint();
  b_ = tensor_embed(annihilation(dims_.n_phonon), Slot::phonon, dims_);
  b_dag_ = b_.adjoint();
  identity_ = OperatorMatrix::identity(dims_);
  sigma_.reserve(static_cast<std::size_t>(dims_.n_atom * dims_.n_atom));
  for (int i = 0; i < dims_.n_atom; ++i) {
    for (int j = 0; j < dims_.n_atom; ++j) {
      sigma_.push_back(tensor_embed(transition(dims_.n_atom, i, j), Slot::atom, dims_));
    }
  }
}

const OperatorMatrix& OperatorSet::sigma(Level i, Level j) const {
  const int row = static_cast<int>(i);
  const int col = static_cast<int>(j);
  if (row >= dims_.n_atom || col >= dims_.n_atom) {
    throw InvalidArgument("atomic level outside a " + std::to_string(dims_.n_atom) +
                          "-level atom");
  }
  return sigma_[static_cast<std::size_t>(row * dims_.n_atom + col)];
}

}  // namespace ceit
