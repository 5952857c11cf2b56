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

#include "cavityeit/model.hpp"

#include <cmath>
#include <string>

#include "cavityeit/errors.hpp"
#include "cavityeit/thermometry.hpp"

namespace ceit {

namespace {

void require_finite_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidArgument(std::string(name) + " must be finite and >= 0, got " +
                          std::to_string(value));
  }
}

void require_three_level(const SpaceDims& dims) {
  if (dims.n_atom != 3) {
    throw DimensionMismatch("EIT Hamiltonians need n_atom = 3, got " +
                            std::to_string(dims.n_atom));
  }
}

}  // namespace

double SystemParams::effective_coupling() const { return collective_coupling(g, n_ions); }

void SystemParams::validate() const {
  require_finite_nonnegative(kappa, "kappa");
  require_finite_nonnegative(g, "g");
  require_finite_nonnegative(omega_c, "omega_c");
  require_finite_nonnegative(gamma_eg, "gamma_eg");
  require_finite_nonnegative(gamma_eu, "gamma_eu");
  require_finite_nonnegative(gamma_b, "gamma_b");
  require_finite_nonnegative(n_th, "n_th");
  require_finite_nonnegative(eta, "eta");
  require_finite_nonnegative(epsilon, "epsilon");
  require_finite_nonnegative(omega_sec, "omega_sec");
  if (!std::isfinite(delta_p)) throw InvalidArgument("delta_p must be finite");
  if (n_ions < 1) throw InvalidArgument("n_ions must be >= 1");
  dims.validate();
}

int phonon_cutoff_for(double n_th) {
  return std::max(12, static_cast<int>(std::ceil(6.0 * n_th)));
}

SystemParams with_bath_occupancy(SystemParams p, double n_th) {
  p.n_th = n_th;
  p.dims.n_phonon = std::max(p.dims.n_phonon, phonon_cutoff_for(n_th));
  return p;
}

OperatorMatrix hamiltonian_thermal(const SystemParams& p) {
  p.validate();
  require_three_level(p.dims);
  const OperatorSet s(p.dims);
  const double coupling = p.effective_coupling();
  const double control = p.eta * p.omega_c;

  OperatorMatrix h = p.delta_p * s.sigma(Level::g, Level::g);
  h -= p.delta_p * (s.a_dag() * s.a());
  h += coupling * (s.a_dag() * s.sigma(Level::g, Level::e) + s.a() * s.sigma(Level::e, Level::g));
  h += control * (s.sigma(Level::e, Level::u) * s.b_dag() + s.sigma(Level::u, Level::e) * s.b());
  h += p.epsilon * (s.a_dag() + s.a());
  return h;
}

OperatorMatrix hamiltonian_noneit(const SystemParams& p) {
  p.validate();
  require_three_level(p.dims);
  const OperatorSet s(p.dims);
  const double coupling = p.effective_coupling();

  OperatorMatrix h = p.delta_p * s.sigma(Level::g, Level::g);
  h -= p.delta_p * (s.a_dag() * s.a());
  h += coupling * (s.a_dag() * s.sigma(Level::g, Level::e) + s.sigma(Level::e, Level::g) * s.a());
  h += p.omega_c * (s.sigma(Level::u, Level::e) + s.sigma(Level::e, Level::u));
  h += p.epsilon * (s.a_dag() + s.a());
  return h;
}

OperatorMatrix hamiltonian_sideband(Sideband kind, double eta, double omega,
                                    const SpaceDims& dims) {
  dims.validate();
  if (dims.n_atom != 2) {
    throw DimensionMismatch("sideband Hamiltonians act on a two-level atom, got n_atom = " +
                            std::to_string(dims.n_atom));
  }
  if (!std::isfinite(eta) || eta < 0.0 || eta >= 1.0) {
    throw InvalidArgument("sideband coupling needs 0 <= eta < 1, got " + std::to_string(eta));
  }
  if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
  const OperatorSet s(dims);
  const OperatorMatrix& raise = s.sigma(Level::e, Level::u);
  const OperatorMatrix& lower = s.sigma(Level::u, Level::e);
  const double strength = eta * omega;
  if (kind == Sideband::blue) {
    return strength * (raise * s.b_dag() + lower * s.b());
  }
  return strength * (raise * s.b() + lower * s.b_dag());
}

std::vector<Channel> dissipators(const SystemParams& p) {
  p.validate();
  require_three_level(p.dims);
  const OperatorSet s(p.dims);
  std::vector<Channel> channels;
  channels.reserve(5);
  channels.push_back({"cavity", s.a(), p.kappa});
  channels.push_back({"decay_eg", s.sigma(Level::g, Level::e), p.gamma_eg});
  channels.push_back({"decay_eu", s.sigma(Level::u, Level::e), p.gamma_eu});
  channels.push_back({"phonon_cooling", s.b(), p.gamma_b * (p.n_th + 1.0)});
  channels.push_back({"phonon_heating", s.b_dag(), p.gamma_b * p.n_th});
  return channels;
}

}  // namespace ceit
