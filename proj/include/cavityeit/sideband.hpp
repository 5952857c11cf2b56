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
#include <string>
#include <vector>

#include "cavityeit/dynamics.hpp"
#include "cavityeit/hilbert.hpp"

namespace ceit {

// Sideband physics on the two-level {u, e} ⊗ phonon space. The internal
// ground level is u; decay e → u preserves the phonon number.
enum class PulseKind { bsb, rsb, wait };

struct PulseStep {
  PulseKind kind = PulseKind::wait;
  double duration = 0.0;  // μs
};

struct PulseSequence {
  std::vector<PulseStep> steps;
  double eta = 0.2;
  double omega = 2.0;   // MHz
  double gamma = 4.0;   // MHz, decay of e
  int n_phonon = 12;

  // Durations > 0, 0 <= eta < 1, finite omega, gamma >= 0, n_phonon >= 2.
  void validate() const;
  double total_duration() const;
};

SpaceDims sideband_dims(int n_phonon);

// Generator for one pulse kind (wait: decay only).
Liouvillian sideband_liouvillian(PulseKind kind, double eta, double omega, double gamma,
                                 int n_phonon);

// P_e(t) starting from |u, n0⟩ under the blue sideband with decay γ.
// n_phonon = 0 selects n0 + 12.
std::vector<double> bsb_rabi_trace(double eta, double omega, double gamma, int n0,
                                   std::span<const double> times, int n_phonon = 0);

// Excited population under a matched red and blue pulse of length τ
// starting from |u, n⟩, sampled at τ and averaged over [0, τ].
struct SidebandRatio {
  int n = 0;
  double pulse_time = 0.0;
  double p_rsb = 0.0;
  double p_bsb = 0.0;
  double ratio = 0.0;
  double p_rsb_avg = 0.0;
  double p_bsb_avg = 0.0;
  double ratio_avg = 0.0;
  double expected = 0.0;  // n / (n + 1)
};

// Carrier π-time π/(2Ω): independent of η and n.
double default_ratio_pulse_time(double omega);

// pulse_time <= 0 selects default_ratio_pulse_time(omega).
SidebandRatio sideband_ratio(int n, double eta, double omega, double gamma, double pulse_time = 0.0,
                             int n_phonon = 0);

struct CoolingTrajectory {
  SpaceDims dims;
  std::vector<double> times;                      // μs
  std::vector<int> step_index;                    // -1 for the initial sample
  std::vector<std::vector<double>> populations;   // [sample][basis index]
  std::vector<double> mean_phonon;
  std::vector<double> excited_population;

  // "u_0", "e_3", ... in basis order.
  std::vector<std::string> labels() const;
  double ground_motional_population(std::size_t sample) const;  // P(u, 0)
};

// Piecewise-constant evolution through the steps, sampled
// `samples_per_step` times inside each step.
CoolingTrajectory run_cooling_sequence(const PulseSequence& seq, const DensityMatrix& rho0,
                                       int samples_per_step = 8);

// Fit of P(t) = c − A·exp(−λt)·cos(2Ω_R t).
struct RabiFit {
  double rabi_frequency = 0.0;  // Ω_R
  double decay = 0.0;           // λ
  double amplitude = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
};

RabiFit fit_rabi_oscillation(std::span<const double> times, std::span<const double> population);

}  // namespace ceit
