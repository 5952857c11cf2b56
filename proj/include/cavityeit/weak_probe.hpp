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

#include <span>

#include <Eigen/Dense>

#include "cavityeit/hilbert.hpp"
#include "cavityeit/model.hpp"

namespace ceit {

// Steady-state response to a weak probe ε(a + a†), to second order in ε.
//
// The probe-free Hamiltonian and the jump operators must respect the grading
// K = a†a + σ_ee + σ_uu (no term raises K). The undriven state then lives in
// the K = 0 sector {g, 0 photons} ⊗ phonons, the first-order coherence in the
// (K=1, K=0) block and the photon population in the (K=1, K=1) block. Each
// block is solved only on the part of the coherence graph reachable from its
// source, which keeps the linear systems small for large phonon cutoffs.
struct WeakProbeResponse {
  double photon_number = 0.0;  // ⟨a†a⟩ through order ε²
  double phonon_number = 0.0;  // ⟨b†b⟩ of the undriven state
  Complex field = 0.0;         // ⟨a⟩ through order ε
  Eigen::MatrixXcd ground;     // undriven state on the K = 0 sector
  int coherence_unknowns = 0;
  int population_unknowns = 0;
};

// `h0` excludes the probe term. Requires n_atom = 3 and n_photon >= 2.
WeakProbeResponse weak_probe_response(const OperatorMatrix& h0, std::span<const Channel> channels,
                                      double epsilon);

}  // namespace ceit
