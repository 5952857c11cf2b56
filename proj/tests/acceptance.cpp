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

// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria (capped at 100).

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cavityeit/dynamics.hpp"
#include "cavityeit/errors.hpp"
#include "cavityeit/sideband.hpp"
#include "cavityeit/spectrum.hpp"
#include "cavityeit/thermometry.hpp"

using namespace ceit;

namespace {

// Pinned tolerances.
constexpr double kWorkingFwhm = 0.55;
constexpr double kWorkingFwhmTol = 0.10;
constexpr double kSidePeak = 1.56;
constexpr double kWorkingRuntime = 120.0;  // s
constexpr double kEmptyTol = 0.01;
constexpr double kAnalyticTol = 0.02;
constexpr double kFixedPointTol = 1e-3;
constexpr double kCertifyTol = 1e-5;
constexpr double kRatioTol = 0.05;
constexpr double kRabiTol = 0.02;
constexpr double kCoolingGround = 0.9;
constexpr double kHeatingPhonons = 3.0;
constexpr double kHeatingTol = 0.02;
constexpr double kMultiionFraction = 0.45;  // FWHM / 2κ
constexpr double kRoundTripTol = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& ex) {
    out = {false, std::string("exception: ") + ex.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s  %-34s %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SweepOptions serial(HamiltonianKind h = HamiltonianKind::thermal) {
  SweepOptions o;
  o.hamiltonian = h;
  return o;
}

// Working point: κ = 0.4, g = 3κ, control 2.5κ, γ_eg = γ_eu = κ, γ_b = κ/4, n_th = 1.
SystemParams working_point() { return with_bath_occupancy(SystemParams{}, 1.0); }

Outcome working_point_spectrum() {
  const auto start = std::chrono::steady_clock::now();
  const SystemParams p = working_point();
  const auto grid = default_detuning_grid(p);
  const Spectrum s = sweep_spectrum(p, grid, serial());
  const auto fit = measure_linewidth(s);
  const double step = grid[1] - grid[0];
  // highest local maximum on each side outside the fit window
  double left = std::nan(""), right = std::nan(""), left_y = -1.0, right_y = -1.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double y = s.normalized[i];
    if (!(y > s.normalized[i - 1] && y >= s.normalized[i + 1])) continue;
    if (grid[i] < fit.window_lo && y > left_y) left = grid[i], left_y = y;
    if (grid[i] > fit.window_hi && y > right_y) right = grid[i], right_y = y;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool width_ok = std::abs(fit.fwhm / kWorkingFwhm - 1.0) <= kWorkingFwhmTol;
  const bool peaks_ok = std::abs(left + kSidePeak) <= step && std::abs(right - kSidePeak) <= step;
  return {width_ok && peaks_ok && secs <= kWorkingRuntime,
          fmt("FWHM %.4f MHz (target %.2f +/- %.0f%%); side maxima %.4f, %.4f MHz (target +/-%.2f, step %.4f)",
              fit.fwhm, kWorkingFwhm, 100 * kWorkingFwhmTol, left, right, kSidePeak, step)};
}

Outcome empty_cavity() {
  SystemParams p;
  p.g = 0.0;
  p.omega_c = 0.0;
  p.n_th = 0.0;
  p.dims.n_phonon = 2;
  const auto s = sweep_spectrum(p, default_detuning_grid(p), serial());
  const double fwhm = measure_linewidth(s).fwhm;
  return {std::abs(fwhm / (2.0 * p.kappa) - 1.0) < kEmptyTol,
          fmt("FWHM %.6f MHz vs 2 kappa = %.6f", fwhm, 2.0 * p.kappa)};
}

Outcome analytic_agreement() {
  SystemParams p;
  p.n_th = 0.0;
  p.dims.n_phonon = 1;
  const auto grid = default_detuning_grid(p, HamiltonianKind::non_thermal);
  const auto numeric = sweep_spectrum(p, grid, serial(HamiltonianKind::non_thermal));
  const auto closed = analytic_spectrum(p, grid);
  double worst = 0.0, worst_at = 0.0, worst_field = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dev = std::abs(numeric.normalized[i] / closed.normalized[i] - 1.0);
    if (dev > worst) worst = dev, worst_at = grid[i];
    SystemParams q = p;
    q.delta_p = grid[i];
    const auto r = steady_response(q, serial(HamiltonianKind::non_thermal));
    const double coherent = p.kappa * p.kappa * std::norm(r.field) / (p.epsilon * p.epsilon);
    worst_field = std::max(worst_field, std::abs(coherent / closed.normalized[i] - 1.0));
  }
  return {worst < kAnalyticTol,
          fmt("max rel. deviation of kappa<a+a> %.4g at %.4f MHz (limit %.2g); coherent kappa|<a>|^2 %.2g",
              worst, worst_at, kAnalyticTol, worst_field)};
}

Outcome thermal_fixed_point() {
  std::string detail;
  bool ok = true;
  for (double n_th : {0.5, 1.0, 5.0, 10.0}) {
    const auto r = certify_phonon_cutoff(with_bath_occupancy(SystemParams{}, n_th),
                                         phonon_steady_occupation, kCertifyTol);
    const double rel = std::abs(r.base_value / n_th - 1.0);
    ok = ok && rel < kFixedPointTol;
    detail += fmt("n_th %g: %.3g (cutoff %d); ", n_th, rel, r.base.n_phonon);
  }
  return {ok, detail + fmt("limit %.0e", kFixedPointTol)};
}

Outcome linewidth_monotonicity(const CalibrationCurve& curve) {
  std::vector<double> w;
  for (double n_th : {0.5, 1.0, 5.0, 10.0}) w.push_back(eit_linewidth(with_bath_occupancy(SystemParams{}, n_th), serial()));
  const bool rising = w[0] < w[1] && w[1] < w[2] && w[2] < w[3];
  // |dW/dT| at the three lowest grid temperatures (one-sided differences)
  std::vector<double> slope;
  for (int i = 0; i < 3; ++i) {
    slope.push_back(std::abs((curve.linewidths[i + 1] - curve.linewidths[i]) /
                             (curve.temperatures[i + 1] - curve.temperatures[i])));
  }
  const bool flattens = std::isfinite(slope[0]) && std::isfinite(slope[1]) && std::isfinite(slope[2]) &&
                        slope[0] < slope[1] && slope[1] < slope[2];
  std::string lowest;
  for (int i = 0; i < 3; ++i) {
    lowest += fmt("%.3g K: %s; ", curve.temperatures[i],
                  curve.errors[i].empty() ? fmt("%.4f MHz", curve.linewidths[i]).c_str() : curve.errors[i].c_str());
  }
  const std::size_t b = curve.monotone_begin;
  std::string resolved;
  for (std::size_t i = b; i < b + 3 && i + 1 < curve.monotone_end; ++i) {
    resolved += fmt(" %.4g", (curve.linewidths[i + 1] - curve.linewidths[i]) /
                                 (curve.temperatures[i + 1] - curve.temperatures[i]));
  }
  return {rising && flattens,
          fmt("FWHM at n_th 0.5/1/5/10: %.4f %.4f %.4f %.4f (%s); lowest grid points: %s"
              "dW/dT at lowest resolved points (from %.3g K):%s MHz/K (%s)",
              w[0], w[1], w[2], w[3], rising ? "increasing" : "not increasing", lowest.c_str(),
              curve.temperatures[b], resolved.c_str(), flattens ? "flattens" : "does not flatten")};
}

Outcome thermal_above_nonthermal() {
  const std::vector<double> omega_c{0.6, 0.8, 1.0, 1.2, 1.4};
  const std::vector<double> temps{2e-4, 5e-4, 1e-3};
  const auto cmp = compare_thermal_nonthermal(SystemParams{}, omega_c, temps, serial());
  bool ok = true;
  double margin = 1e300;
  for (const auto& row : cmp.rows) {
    for (double w : row.thermal_fwhm) {
      ok = ok && std::isfinite(w) && std::isfinite(row.nonthermal_fwhm) && w >= row.nonthermal_fwhm;
      margin = std::min(margin, w - row.nonthermal_fwhm);
    }
  }
  return {ok, fmt("%zu control values x %zu temperatures; smallest thermal - non-thermal margin %.4f MHz",
                  omega_c.size(), temps.size(), margin)};
}

Outcome sideband_ratio_check() {
  double worst_small = 0.0;
  std::vector<double> dev;
  for (double eta : {0.05, 0.1, 0.2, 0.4}) {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) worst = std::max(worst, std::abs(sideband_ratio(n, eta, 2.0, 0.0).ratio / (n / (n + 1.0)) - 1.0));
    if (eta == 0.05) worst_small = worst;
    dev.push_back(worst);
  }
  const bool grows = dev[0] < dev[1] && dev[1] < dev[2] && dev[2] < dev[3];
  return {worst_small < kRatioTol && grows,
          fmt("max |ratio/(n/(n+1)) - 1| at eta 0.05/0.1/0.2/0.4: %.4f %.4f %.4f %.4f (limit %.2f at 0.05)",
              dev[0], dev[1], dev[2], dev[3], kRatioTol)};
}

Outcome bsb_rabi() {
  const double eta = 0.202, omega = 2.0 * std::numbers::pi * 0.5, gamma = 0.02;
  std::vector<double> t;
  for (int i = 0; i <= 800; ++i) t.push_back(40.0 * i / 800);
  const auto fit = fit_rabi_oscillation(t, bsb_rabi_trace(eta, omega, gamma, 0, t));
  const double rel = fit.rabi_frequency / (eta * omega) - 1.0;
  return {std::abs(rel) < kRabiTol,
          fmt("fitted %.5f rad/us vs eta*Omega %.5f (rel %.2g, limit %.2f)", fit.rabi_frequency, eta * omega, rel, kRabiTol)};
}

Outcome sideband_cooling() {
  PulseSequence cool;
  cool.eta = 0.2;
  cool.omega = 2.0;
  cool.gamma = 4.0;
  cool.n_phonon = 12;
  for (int c = 0; c < 40; ++c) {
    cool.steps.push_back({PulseKind::rsb, 3.0});
    cool.steps.push_back({PulseKind::wait, 0.5});
  }
  const auto d = sideband_dims(cool.n_phonon);
  const auto a = run_cooling_sequence(cool, DensityMatrix::basis_state(d, d.index(0, 0, 5)));
  const double ground = a.ground_motional_population(a.times.size() - 1);

  PulseSequence heat = cool;
  heat.n_phonon = 24;
  heat.steps.clear();
  for (int c = 0; c < 12; ++c) {
    heat.steps.push_back({PulseKind::bsb, 3.0});
    heat.steps.push_back({PulseKind::wait, 0.5});
  }
  const auto dh = sideband_dims(heat.n_phonon);
  const auto b = run_cooling_sequence(heat, DensityMatrix::basis_state(dh, dh.index(0, 0, 0)));
  const double nbar = b.mean_phonon.back();
  return {ground > kCoolingGround && nbar > kHeatingPhonons,
          fmt("red sequence from |u,5>: P(u,0) = %.4f (> %.1f); blue sequence from |u,0>: nbar = %.3f (> %.0f)",
              ground, kCoolingGround, nbar, kHeatingPhonons)};
}

Outcome heating() {
  SystemParams p;
  const double factor = heating_rate(p).factor;
  const double c = std::abs(factor - 1.0) < std::abs(factor - 2.0) ? 1.0 : 2.0;
  bool ok = true;
  std::string detail = fmt("c = %.0f from factor %.5f; ", c, factor);
  for (auto [gb, nth] : {std::pair{0.1, 0.5}, std::pair{0.05, 2.0}, std::pair{0.3, 4.0}}) {
    SystemParams q;
    q.gamma_b = gb;
    q.n_th = nth;
    const double rel = heating_rate(q).slope / (c * gb * nth) - 1.0;
    ok = ok && std::abs(rel) < kHeatingTol;
    detail += fmt("gamma_b %.2f n_th %.1f: rel %.2g; ", gb, nth, rel);
  }
  return {ok, detail + fmt("limit %.2f", kHeatingTol)};
}

Outcome multiion() {
  const SystemParams p = working_point();
  std::vector<int> ions(10);
  for (int i = 0; i < 10; ++i) ions[i] = i + 1;
  const auto scan = multiion_linewidth_scan(p, ions);
  bool falling = true;
  std::string widths;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    falling = falling && scan[i].error.empty() && (i == 0 || scan[i].fwhm < scan[i - 1].fwhm);
    widths += fmt(" %.4f", scan[i].fwhm);
  }
  const double target = kMultiionFraction * 2.0 * p.kappa;
  const auto curves = multiion_calibration(p, ions, log_temperature_grid(1e-4, 2e-3, 24));
  bool rising = true;
  double previous = 0.0;
  std::string slopes;
  for (const auto& curve : curves) {
    const double s = 1.0 / invert_linewidth(curve, target).sensitivity;
    rising = rising && s > previous;
    previous = s;
    slopes += fmt(" %.4g", s);
  }
  return {falling && rising,
          fmt("FWHM N=1..10:%s (%s); |dW/dT| at FWHM = %.2f x 2kappa:%s MHz/K (%s)", widths.c_str(),
              falling ? "decreasing" : "not decreasing", kMultiionFraction, slopes.c_str(),
              rising ? "increasing" : "not increasing")};
}

Outcome round_trip(const CalibrationCurve& curve) {
  const double lo = curve.temperatures[curve.monotone_begin];
  const double hi = curve.temperatures[curve.monotone_end - 1];
  const double t0 = std::sqrt(lo * hi) * 1.013;  // off the grid
  SystemParams p = with_bath_occupancy(curve.params, nbar_from_temperature(t0, curve.params.omega_sec));
  const double w = eit_linewidth(p, serial());
  const auto inv = invert_linewidth(curve, w);
  const double rel = inv.temperature / t0 - 1.0;
  return {std::abs(rel) < kRoundTripTol,
          fmt("T0 %.4e K -> FWHM %.5f MHz -> T %.4e K (rel %.3g, limit %.2f)", t0, w, inv.temperature, rel, kRoundTripTol)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ceit_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const std::string cfg = std::string(CEIT_CONFIG_DIR) + "/working_point.json";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(CEIT_CLI_PATH) + " spectrum " + cfg + " -o " + (dir / run).string() + " >/dev/null";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      fs::remove_all(dir);
      return {false, "CLI run failed"};
    }
  }
  const std::string a = slurp(dir / "a" / "spectrum.csv");
  const bool same = !a.empty() && a == slurp(dir / "b" / "spectrum.csv") &&
                    slurp(dir / "a" / "meta.json") == slurp(dir / "b" / "meta.json");
  fs::remove_all(dir);
  return {same, fmt("two CLI spectrum runs, %zu-byte CSV %s", a.size(), same ? "identical" : "differ")};
}

}  // namespace

int main() {
  std::printf("acceptance suite, cavityeit\n");
  report("working-point spectrum", working_point_spectrum);
  report("empty-cavity linewidth", empty_cavity);
  report("closed-form vs weak-probe", analytic_agreement);
  report("thermal fixed point", thermal_fixed_point);

  // default calibration grid, shared by the next two criteria
  const auto t0 = std::chrono::steady_clock::now();
  CalibrationCurve curve;
  std::string curve_error;
  try {
    curve = build_calibration(SystemParams{}, log_temperature_grid());
  } catch (const std::exception& ex) {
    curve_error = ex.what();
  }
  std::printf("      calibration grid built in %.1f s, monotone range [%zu, %zu)\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
              curve.monotone_begin, curve.monotone_end);
  report("linewidth vs temperature", [&] {
    if (!curve_error.empty()) return Outcome{false, curve_error};
    return linewidth_monotonicity(curve);
  });
  report("thermal >= non-thermal linewidth", thermal_above_nonthermal);
  report("sideband ratio", sideband_ratio_check);
  report("blue-sideband Rabi frequency", bsb_rabi);
  report("sideband cooling endpoints", sideband_cooling);
  report("heating-rate convention", heating);
  report("collective coupling", multiion);
  report("thermometry round trip", [&] {
    if (!curve_error.empty()) return Outcome{false, curve_error};
    return round_trip(curve);
  });
  report("determinism", determinism);
  std::printf("%d criteria failed\n", failures);
  return std::min(failures, 100);
}
