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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cavityeit/model.hpp"
#include "cavityeit/spectrum.hpp"

namespace ceit {

inline constexpr double kHbar = 1.054571817e-34;     // J·s
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K

// Bose occupation 1/(exp(ħω/k_B T) − 1) with ω = 2π·omega_sec·10⁶ rad/s.
double nbar_from_temperature(double temperature, double omega_sec);
// Exact inverse; throws InvalidArgument for nbar <= 0 (ground state).
double temperature_from_nbar(double nbar, double omega_sec);

// g·√n_ions
double collective_coupling(double g, int n_ions);

// Logarithmic grid with `per_decade` points per decade from t_min to t_max
// (both included).
std::vector<double> log_temperature_grid(double t_min = 1e-5, double t_max = 1e-2,
                                         int per_decade = 24);

// Linewidth versus temperature at fixed system parameters. Failed points
// hold NaN and a message in `errors` (empty string when the point succeeded).
struct CalibrationCurve {
  SystemParams params;
  std::vector<double> temperatures;  // K
  std::vector<double> n_th;
  std::vector<double> nbar_steady;
  std::vector<double> linewidths;    // MHz
  std::vector<int> phonon_cutoffs;
  std::vector<std::string> errors;
  // Longest index span [begin, end) with strictly increasing linewidth.
  std::size_t monotone_begin = 0;
  std::size_t monotone_end = 0;

  std::size_t size() const { return temperatures.size(); }
  std::size_t monotone_size() const { return monotone_end - monotone_begin; }
};

// Sets n_th from each temperature, sizes the phonon cutoff with
// phonon_cutoff_for and measures the central linewidth. Needs >= 8
// increasing temperatures; throws FitError when fewer than 4 points are
// monotone.
CalibrationCurve build_calibration(const SystemParams& p, std::span<const double> temperatures,
                                   const SweepOptions& options = {});

// Curve from tabulated values (e.g. a stored calibration). nbar_steady may be
// empty. Applies the same monotone-range rule.
CalibrationCurve make_calibration(const SystemParams& p, std::span<const double> temperatures,
                                  std::span<const double> linewidths,
                                  std::span<const double> nbar_steady = {});

struct Inversion {
  double temperature = 0.0;   // K
  double nbar = 0.0;
  double sensitivity = 0.0;   // dT/dFWHM, K/MHz
  bool low_sensitivity = false;
  double fwhm_lo = 0.0;       // valid span
  double fwhm_hi = 0.0;
};

// Piecewise-linear inversion on the monotone range. Flags segments whose
// log-log slope d ln(FWHM)/d ln(T) is below 0.01 as low sensitivity.
// Throws OutOfRange naming the valid span.
Inversion invert_linewidth(const CalibrationCurve& curve, double measured_fwhm);

struct HeatingRate {
  double slope = 0.0;             // quanta/μs at n̄ = 0
  double single_rate = 0.0;       // γ_b·n_th
  double double_rate = 0.0;       // 2γ_b·n_th
  double factor = 0.0;            // slope / (γ_b·n_th); NaN when n_th = 0
};

// Steady-state ⟨b†b⟩ of the phonon mode under its bath channels alone, at
// the cutoff p.dims.n_phonon.
double phonon_steady_occupation(const SystemParams& p);

// Initial slope of ⟨b†b⟩ from the phonon ground state under the phonon
// channels alone, by Richardson extrapolation of two short evolutions.
HeatingRate heating_rate(const SystemParams& p);

struct MultiIonPoint {
  int n_ions = 1;
  double g_eff = 0.0;
  double fwhm = 0.0;
  double fwhm_ratio = 0.0;  // FWHM / 2κ
  std::string error;
};

std::vector<MultiIonPoint> multiion_linewidth_scan(const SystemParams& p,
                                                   std::span<const int> n_ions,
                                                   const SweepOptions& options = {});

std::vector<CalibrationCurve> multiion_calibration(const SystemParams& p,
                                                   std::span<const int> n_ions,
                                                   std::span<const double> temperatures,
                                                   const SweepOptions& options = {});

}  // namespace ceit
