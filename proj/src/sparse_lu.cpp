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

#include "sparse_lu.hpp"

#include <string>

#include <Eigen/UmfPackSupport>

#include "cavityeit/errors.hpp"

namespace ceit::detail {

Eigen::VectorXcd lu_solve(const SparseMatrix& m, const Eigen::VectorXcd& rhs, const char* what) {
  Eigen::UmfPackLU<SparseMatrix> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) {
    throw SolverError(std::string(what) + ": sparse factorization failed (singular system of size " +
                      std::to_string(m.rows()) + ")");
  }
  Eigen::VectorXcd x = lu.solve(rhs);
  if (!x.allFinite()) throw SolverError(std::string(what) + ": solve produced non-finite values");
  return x;
}

}  // namespace ceit::detail
