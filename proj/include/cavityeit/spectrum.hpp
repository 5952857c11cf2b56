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

#include "cavityeit/model.hpp"

namespace ceit {

enum class HamiltonianKind { thermal, non_thermal };

// weak_probe: linear response in ε (exact as ε → 0, photon cutoff >= 2).
// full: sparse LU on the complete Liouvillian at the configured ε.
enum class SolverKind { weak_probe, full };

struct SweepOptions {
  HamiltonianKind hamiltonian = HamiltonianKind::thermal;
  SolverKind solver = SolverKind::weak_probe;
  int threads = 0;  // 0: hardware concurrency
};

// Probe sweep result. `transmission` is the cavity output κ⟨a†a⟩;
// `normalized` divides it by the empty-cavity resonant value ε²/κ.
struct Spectrum {
  std::vector<double> detunings;
  std::vector<double> transmission;
  std::vector<double> normalized;
  SystemParams params;

  std::size_t size() const { return detunings.size(); }
  // Strictly increasing detunings, equal lengths, transmission >= 0.
  void validate() const;
};

struct SteadyResponse {
  double photon_number = 0.0;
  double phonon_number = 0.0;
  Complex field = 0.0;
};

// Steady-state ⟨a†a⟩, ⟨b†b⟩ and ⟨a⟩ at p.delta_p.
SteadyResponse steady_response(const SystemParams& p, const SweepOptions& options = {});

// ε²/κ
double empty_cavity_reference(const SystemParams& p);

// Control strength entering the chosen Hamiltonian (ηΩ_c or Ω_c).
double effective_control(const SystemParams& p, HamiltonianKind kind);

// `points` uniform samples over ±2.5·√(g_eff² + Ω²), Ω the effective control.
// Falls back to ±5κ when both couplings vanish.
std::vector<double> default_detuning_grid(const SystemParams& p,
                                          HamiltonianKind kind = HamiltonianKind::thermal,
                                          int points = 401);

// Errors carry the offending detuning.
Spectrum sweep_spectrum(const SystemParams& p, std::span<const double> grid,
                        const SweepOptions& options = {});

// Weak-probe transmission of the three-level model without phonons,
//   T = κ² / |Δ + iκ − g_eff²·χ(Δ)|²,  χ(Δ) = Δ / (Δ² + i(γ_eg + γ_eu)Δ − Ω_c²),
// normalized so that the empty cavity peaks at 1.
double analytic_transmission(const SystemParams& p, double delta_p);

// analytic_transmission on a grid; `transmission` holds T·ε²/κ.
Spectrum analytic_spectrum(const SystemParams& p, std::span<const double> grid);

struct LorentzianFit {
  double center = 0.0;
  double fwhm = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples = 0;
};

// Least-squares fit of A·(w/2)² / ((Δ − Δ₀)² + (w/2)²) + c to the samples in
// [lo, hi]. Needs >= 8 samples and a single local maximum in the window.
LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y, double lo,
                             double hi);
LorentzianFit fit_lorentzian(const Spectrum& s, double lo, double hi);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

// Central transparency window: from the sample nearest Δ = 0 climb to the
// local maximum, walk down to the flanking local minima (or the grid edge)
// and pull each side 10% of its extent towards the peak.
// Throws NoCentralPeak when the sample nearest Δ = 0 is a local minimum.
Window central_window(std::span<const double> x, std::span<const double> y);

// central_window followed by fit_lorentzian on the normalized transmission.
LorentzianFit measure_linewidth(const Spectrum& s);

// Sweep on the default grid and measure the central FWHM (MHz).
LorentzianFit eit_fit(const SystemParams& p, const SweepOptions& options = {});
double eit_linewidth(const SystemParams& p, const SweepOptions& options = {});

// One cell of a linewidth map. fwhm/ratio are NaN and `error` is set when
// the cell failed; ratio is FWHM / 2κ.
struct LinewidthCell {
  double g = 0.0;
  double omega_c = 0.0;
  double n_th = 0.0;
  double fwhm = 0.0;
  double ratio = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

// Thermal-model FWHM over n_th (outer) × g × Ω_c (inner). The phonon cutoff
// of each n_th follows phonon_cutoff_for.
std::vector<LinewidthCell> linewidth_map_2d(const SystemParams& base, std::span<const double> g_grid,
                                            std::span<const double> omega_c_grid,
                                            std::span<const double> n_th_list,
                                            const SweepOptions& options = {});

struct ComparisonRow {
  double omega_c = 0.0;
  double analytic_fwhm = 0.0;
  double nonthermal_fwhm = 0.0;
  std::vector<double> thermal_fwhm;  // one per temperature
  std::vector<std::string> errors;
};

struct ThermalComparison {
  std::vector<double> temperatures;  // K
  std::vector<double> n_th;
  std::vector<ComparisonRow> rows;
};

// For each Ω_c: analytic FWHM, non-thermal numeric FWHM (phonon factor of
// size one) and thermal FWHM at each temperature. Both numeric models receive
// the same Ω_c; the thermal control strength is η·Ω_c.
ThermalComparison compare_thermal_nonthermal(const SystemParams& base,
                                             std::span<const double> omega_c_grid,
                                             std::span<const double> temperatures,
                                             const SweepOptions& options = {});

}  // namespace ceit
