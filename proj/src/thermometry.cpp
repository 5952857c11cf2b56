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

#include "cavityeit/thermometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cavityeit/dynamics.hpp"
#include "cavityeit/errors.hpp"
#include "parallel.hpp"

namespace ceit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMinCalibrationPoints = 8;
constexpr std::size_t kMinMonotonePoints = 4;
constexpr double kFlatLogSlope = 0.01;

double quantum_energy_ratio(double temperature, double omega_sec) {
  const double omega = 2.0 * std::numbers::pi * omega_sec * 1e6;
  return kHbar * omega / (kBoltzmann * temperature);
}

void assign_monotone_range(CalibrationCurve& curve) {
  std::size_t best_begin = 0;
  std::size_t best_end = 0;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double w = curve.linewidths[k];
    if (!std::isfinite(w)) {
      begin = k + 1;
      continue;
    }
    if (k > begin && !(w > curve.linewidths[k - 1])) begin = k;
    if (k + 1 - begin > best_end - best_begin) {
      best_begin = begin;
      best_end = k + 1;
    }
  }
  curve.monotone_begin = best_begin;
  curve.monotone_end = best_end;
  if (curve.monotone_size() < kMinMonotonePoints) {
    throw FitError("calibration rejected: monotone range holds " +
                   std::to_string(curve.monotone_size()) + " points, need at least " +
                   std::to_string(kMinMonotonePoints));
  }
}

void require_temperatures(std::span<const double> temperatures) {
  if (temperatures.size() < kMinCalibrationPoints) {
    throw InvalidArgument("calibration needs at least " + std::to_string(kMinCalibrationPoints) +
                          " temperatures, got " + std::to_string(temperatures.size()));
  }
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (!(temperatures[k] > 0.0) || !std::isfinite(temperatures[k])) {
      throw InvalidArgument("temperatures must be finite and > 0 (index " + std::to_string(k) + ")");
    }
    if (k > 0 && !(temperatures[k] > temperatures[k - 1])) {
      throw InvalidArgument("temperatures must be strictly increasing (index " +
                            std::to_string(k) + ")");
    }
  }
}

}  // namespace

double nbar_from_temperature(double temperature, double omega_sec) {
  if (!(temperature > 0.0)) {
    throw InvalidArgument("temperature must be > 0, got " + std::to_string(temperature));
  }
  if (!(omega_sec > 0.0)) throw InvalidArgument("omega_sec must be > 0");
  return 1.0 / std::expm1(quantum_energy_ratio(temperature, omega_sec));
}

double temperature_from_nbar(double nbar, double omega_sec) {
  if (!(nbar > 0.0)) throw InvalidArgument("ground state: temperature unresolvable for nbar <= 0");
  if (!(omega_sec > 0.0)) throw InvalidArgument("omega_sec must be > 0");
  const double omega = 2.0 * std::numbers::pi * omega_sec * 1e6;
  return kHbar * omega / (kBoltzmann * std::log1p(1.0 / nbar));
}

double collective_coupling(double g, int n_ions) {
  if (n_ions < 1) throw InvalidArgument("n_ions must be >= 1, got " + std::to_string(n_ions));
  return g * std::sqrt(static_cast<double>(n_ions));
}

std::vector<double> log_temperature_grid(double t_min, double t_max, int per_decade) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw InvalidArgument("temperature grid needs 0 < t_min < t_max");
  }
  if (per_decade < 1) throw InvalidArgument("per_decade must be >= 1");
  const double decades = std::log10(t_max / t_min);
  const int steps = static_cast<int>(std::lround(decades * per_decade));
  std::vector<double> grid;
  for (int k = 0; k <= steps; ++k) {
    grid.push_back(t_min * std::pow(10.0, decades * k / std::max(steps, 1)));
  }
  grid.back() = t_max;
  return grid;
}

CalibrationCurve build_calibration(const SystemParams& p, std::span<const double> temperatures,
                                   const SweepOptions& options) {
  p.validate();
  require_temperatures(temperatures);
  CalibrationCurve curve;
  curve.params = p;
  curve.temperatures.assign(temperatures.begin(), temperatures.end());
  const std::size_t n = temperatures.size();
  curve.n_th.resize(n);
  curve.nbar_steady.assign(n, kNaN);
  curve.linewidths.assign(n, kNaN);
  curve.phonon_cutoffs.resize(n);
  curve.errors.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    curve.n_th[k] = nbar_from_temperature(temperatures[k], p.omega_sec);
    curve.phonon_cutoffs[k] = with_bath_occupancy(p, curve.n_th[k]).dims.n_phonon;
  }

  SweepOptions inner = options;
  inner.threads = 1;
  const auto errors = detail::parallel_for(n, options.threads, [&](std::size_t k) {
    SystemParams point = with_bath_occupancy(p, curve.n_th[k]);
    point.delta_p = 0.0;
    curve.nbar_steady[k] = steady_response(point, inner).phonon_number;
    curve.linewidths[k] = eit_linewidth(point, inner);
  });
  for (std::size_t k = 0; k < n; ++k) {
    if (errors[k]) {
      curve.linewidths[k] = kNaN;
      curve.errors[k] = detail::describe(errors[k]);
    }
  }
  assign_monotone_range(curve);
  return curve;
}

CalibrationCurve make_calibration(const SystemParams& p, std::span<const double> temperatures,
                                  std::span<const double> linewidths,
                                  std::span<const double> nbar_steady) {
  if (linewidths.size() != temperatures.size() ||
      (!nbar_steady.empty() && nbar_steady.size() != temperatures.size())) {
    throw DimensionMismatch("calibration columns have different lengths");
  }
  if (temperatures.size() < kMinMonotonePoints) {
    throw InvalidArgument("calibration table needs at least " +
                          std::to_string(kMinMonotonePoints) + " rows");
  }
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (!(temperatures[k] > 0.0) || (k > 0 && !(temperatures[k] > temperatures[k - 1]))) {
      throw InvalidArgument("temperatures must be > 0 and strictly increasing (index " +
                            std::to_string(k) + ")");
    }
  }
  CalibrationCurve curve;
  curve.params = p;
  curve.temperatures.assign(temperatures.begin(), temperatures.end());
  curve.linewidths.assign(linewidths.begin(), linewidths.end());
  for (double t : temperatures) {
    curve.n_th.push_back(nbar_from_temperature(t, p.omega_sec));
    curve.phonon_cutoffs.push_back(with_bath_occupancy(p, curve.n_th.back()).dims.n_phonon);
  }
  if (nbar_steady.empty()) curve.nbar_steady.assign(temperatures.size(), kNaN);
  else curve.nbar_steady.assign(nbar_steady.begin(), nbar_steady.end());
  curve.errors.assign(temperatures.size(), {});
  assign_monotone_range(curve);
  return curve;
}

Inversion invert_linewidth(const CalibrationCurve& curve, double measured_fwhm) {
  if (curve.monotone_size() < 2 || curve.monotone_end > curve.size()) {
    throw InvalidArgument("calibration curve has no usable monotone range");
  }
  const std::size_t lo = curve.monotone_begin;
  const std::size_t hi = curve.monotone_end - 1;
  Inversion out;
  out.fwhm_lo = curve.linewidths[lo];
  out.fwhm_hi = curve.linewidths[hi];
  if (!std::isfinite(measured_fwhm) || measured_fwhm < out.fwhm_lo || measured_fwhm > out.fwhm_hi) {
    throw OutOfRange("measured FWHM " + std::to_string(measured_fwhm) +
                     " MHz lies outside the calibrated span [" + std::to_string(out.fwhm_lo) +
                     ", " + std::to_string(out.fwhm_hi) + "] MHz");
  }
  std::size_t k = lo;
  while (k + 1 < hi && curve.linewidths[k + 1] < measured_fwhm) ++k;
  const double w0 = curve.linewidths[k];
  const double w1 = curve.linewidths[k + 1];
  const double t0 = curve.temperatures[k];
  const double t1 = curve.temperatures[k + 1];
  const double frac = (measured_fwhm - w0) / (w1 - w0);
  out.temperature = t0 + frac * (t1 - t0);
  out.nbar = nbar_from_temperature(out.temperature, curve.params.omega_sec);
  out.sensitivity = (t1 - t0) / (w1 - w0);
  const double log_slope = std::log(w1 / w0) / std::log(t1 / t0);
  out.low_sensitivity = log_slope < kFlatLogSlope;
  return out;
}

double phonon_steady_occupation(const SystemParams& p) {
  p.validate();
  const SpaceDims dims{1, 1, p.dims.n_phonon};
  const OperatorSet ops(dims);
  if (p.gamma_b == 0.0) throw InvalidArgument("phonon_steady_occupation: gamma_b must be > 0");
  const std::vector<Channel> channels{
      {"phonon_cooling", ops.b(), p.gamma_b * (p.n_th + 1.0)},
      {"phonon_heating", ops.b_dag(), p.gamma_b * p.n_th}};
  const auto rho = steady_state(build_liouvillian(OperatorMatrix::zero(dims), channels));
  return expect(ops.b_dag() * ops.b(), rho).real();
}

HeatingRate heating_rate(const SystemParams& p) {
  p.validate();
  HeatingRate out;
  out.single_rate = p.gamma_b * p.n_th;
  out.double_rate = 2.0 * p.gamma_b * p.n_th;
  out.factor = kNaN;
  if (p.gamma_b == 0.0 || p.n_th == 0.0) {
    out.slope = 0.0;
    return out;
  }
  const SpaceDims dims{1, 1, phonon_cutoff_for(p.n_th)};
  const OperatorSet ops(dims);
  const std::vector<Channel> channels{
      {"phonon_cooling", ops.b(), p.gamma_b * (p.n_th + 1.0)},
      {"phonon_heating", ops.b_dag(), p.gamma_b * p.n_th}};
  const Liouvillian l = build_liouvillian(OperatorMatrix::zero(dims), channels);
  const double h = 0.01 / p.gamma_b;
  const std::vector<double> times{0.0, h, 2.0 * h};
  const auto traj = evolve(l, DensityMatrix::basis_state(dims, 0), times);
  const OperatorMatrix number = ops.b_dag() * ops.b();
  const double n1 = expect(number, traj[1]).real();
  const double n2 = expect(number, traj[2]).real();
  out.slope = (4.0 * n1 - n2) / (2.0 * h);
  out.factor = out.slope / out.single_rate;
  return out;
}

std::vector<MultiIonPoint> multiion_linewidth_scan(const SystemParams& p,
                                                   std::span<const int> n_ions,
                                                   const SweepOptions& options) {
  for (std::size_t k = 0; k < n_ions.size(); ++k) {
    if (n_ions[k] < 1 || (k > 0 && n_ions[k] <= n_ions[k - 1])) {
      throw InvalidArgument("ion counts must be >= 1 and strictly increasing");
    }
  }
  std::vector<MultiIonPoint> out(n_ions.size());
  SweepOptions inner = options;
  inner.threads = 1;
  const auto errors = detail::parallel_for(n_ions.size(), options.threads, [&](std::size_t k) {
    SystemParams point = p;
    point.n_ions = n_ions[k];
    out[k].n_ions = n_ions[k];
    out[k].g_eff = point.effective_coupling();
    out[k].fwhm = eit_linewidth(point, inner);
    out[k].fwhm_ratio = out[k].fwhm / (2.0 * p.kappa);
  });
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (errors[k]) {
      out[k].n_ions = n_ions[k];
      out[k].g_eff = collective_coupling(p.g, n_ions[k]);
      out[k].fwhm = kNaN;
      out[k].fwhm_ratio = kNaN;
      out[k].error = detail::describe(errors[k]);
    }
  }
  return out;
}

std::vector<CalibrationCurve> multiion_calibration(const SystemParams& p,
                                                   std::span<const int> n_ions,
                                                   std::span<const double> temperatures,
                                                   const SweepOptions& options) {
  std::vector<CalibrationCurve> curves;
  for (std::size_t k = 0; k < n_ions.size(); ++k) {
    if (n_ions[k] < 1 || (k > 0 && n_ions[k] <= n_ions[k - 1])) {
      throw InvalidArgument("ion counts must be >= 1 and strictly increasing");
    }
    SystemParams point = p;
    point.n_ions = n_ions[k];
    try {
      curves.push_back(build_calibration(point, temperatures, options));
    } catch (...) {
      detail::rethrow_with_context(std::current_exception(),
                                   "calibration for N = " + std::to_string(n_ions[k]));
    }
  }
  return curves;
}

}  // namespace ceit
