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

#include <string>
#include <vector>

#include "cavityeit/hilbert.hpp"

namespace ceit {

// Physical inputs for one simulation. Rates and couplings are plain numbers
// in MHz; time is then measured in microseconds. No factor of 2π is applied
// anywhere except in the temperature conversion (omega_sec).
//
// Defaults are the single-ion cavity-EIT working point: κ = 0.4, g = 3κ,
// effective control ηΩ_c = 2.5κ, γ_eg = γ_eu = κ, γ_b = 0.25κ, n_th = 1 and a
// weak probe ε = 0.05κ.
struct SystemParams {
  double kappa = 0.4;
  double g = 1.2;
  double omega_c = 1.0;
  double gamma_eg = 0.4;
  double gamma_eu = 0.4;
  double gamma_b = 0.1;
  double n_th = 1.0;
  double eta = 1.0;
  double epsilon = 0.02;
  double delta_p = 0.0;
  int n_ions = 1;
  double omega_sec = 10.0;
  SpaceDims dims{3, 4, 12};

  // Collective cavity coupling g·√N.
  double effective_coupling() const;
  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// Phonon Fock cutoff used for thermal scans: max(12, ceil(6·n_th)).
int phonon_cutoff_for(double n_th);

// Copy of `p` with bath occupancy n_th and a phonon cutoff of at least
// phonon_cutoff_for(n_th).
SystemParams with_bath_occupancy(SystemParams p, double n_th);

// Δσ_gg − Δa†a + g_eff(a†σ_ge + aσ_eg) + ηΩ_c(σ_eu b† + σ_ue b) + ε(a† + a)
OperatorMatrix hamiltonian_thermal(const SystemParams& p);

// Δσ_gg − Δa†a + g_eff(a†σ_ge + σ_eg a) + Ω_c(σ_ue + σ_eu) + ε(a† + a).
// The phonon factor is a spectator here and may have size one.
OperatorMatrix hamiltonian_noneit(const SystemParams& p);

enum class Sideband { blue, red };

// Two-level {u, e} ⊗ phonon sideband coupling:
//   blue: ηΩ(σ_eu b† + σ_ue b),  red: ηΩ(σ_eu b + σ_ue b†).
OperatorMatrix hamiltonian_sideband(Sideband kind, double eta, double omega,
                                    const SpaceDims& dims);

// One Lindblad channel r·(2AρA† − A†Aρ − ρA†A).
struct Channel {
  std::string name;
  OperatorMatrix jump;
  double rate = 0.0;
};

// Cavity loss (a, κ), spontaneous decay (σ_ge, γ_eg) and (σ_ue, γ_eu), and the
// phonon bath pair (b, γ_b(n_th+1)) and (b†, γ_b n_th). Always five entries;
// the heating channel carries rate zero when n_th = 0.
std::vector<Channel> dissipators(const SystemParams& p);

}  // namespace ceit
