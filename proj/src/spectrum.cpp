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

#include "cavityeit/spectrum.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cavityeit/dynamics.hpp"
#include "cavityeit/errors.hpp"
#include "cavityeit/thermometry.hpp"
#include "cavityeit/weak_probe.hpp"
#include "parallel.hpp"

namespace ceit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_increasing(std::span<const double> grid, const char* name) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) throw InvalidArgument(std::string(name) + " holds a non-finite value");
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw InvalidArgument(std::string(name) + " must be strictly increasing (index " +
                            std::to_string(k) + ")");
    }
  }
}

OperatorMatrix hamiltonian_for(const SystemParams& p, HamiltonianKind kind) {
  return kind == HamiltonianKind::thermal ? hamiltonian_thermal(p) : hamiltonian_noneit(p);
}

}  // namespace

void Spectrum::validate() const {
  if (transmission.size() != detunings.size() || normalized.size() != detunings.size()) {
    throw DimensionMismatch("spectrum columns have different lengths");
  }
  require_increasing(detunings, "detunings");
  for (std::size_t k = 0; k < transmission.size(); ++k) {
    if (!(transmission[k] >= 0.0)) {
      throw InvalidArgument("transmission at index " + std::to_string(k) + " is negative");
    }
  }
}

double empty_cavity_reference(const SystemParams& p) {
  if (!(p.kappa > 0.0)) throw InvalidArgument("kappa must be > 0 for normalization");
  return p.epsilon * p.epsilon / p.kappa;
}

double effective_control(const SystemParams& p, HamiltonianKind kind) {
  return kind == HamiltonianKind::thermal ? p.eta * p.omega_c : p.omega_c;
}

SteadyResponse steady_response(const SystemParams& p, const SweepOptions& options) {
  const std::vector<Channel> channels = dissipators(p);
  SteadyResponse out;
  if (options.solver == SolverKind::weak_probe) {
    SystemParams undriven = p;
    undriven.epsilon = 0.0;
    const WeakProbeResponse r =
        weak_probe_response(hamiltonian_for(undriven, options.hamiltonian), channels, p.epsilon);
    out.photon_number = r.photon_number;
    out.phonon_number = r.phonon_number;
    out.field = r.field;
    return out;
  }
  const Liouvillian l = build_liouvillian(hamiltonian_for(p, options.hamiltonian), channels);
  const DensityMatrix rho = steady_state(l);
  const OperatorSet ops(p.dims);
  out.photon_number = expect(ops.a_dag() * ops.a(), rho).real();
  out.phonon_number = expect(ops.b_dag() * ops.b(), rho).real();
  out.field = expect(ops.a(), rho);
  return out;
}

std::vector<double> default_detuning_grid(const SystemParams& p, HamiltonianKind kind,
                                          int points) {
  if (points < 2) throw InvalidArgument("detuning grid needs at least 2 points");
  const double g = p.effective_coupling();
  const double control = effective_control(p, kind);
  double span = 2.5 * std::sqrt(g * g + control * control);
  if (!(span > 0.0)) span = 5.0 * p.kappa;
  if (!(span > 0.0)) throw InvalidArgument("cannot size a detuning grid: all couplings and kappa vanish");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = -span + 2.0 * span * k / (points - 1);
  if (points % 2 == 1) grid[points / 2] = 0.0;
  return grid;
}

Spectrum sweep_spectrum(const SystemParams& p, std::span<const double> grid,
                        const SweepOptions& options) {
  p.validate();
  require_increasing(grid, "detuning grid");
  if (grid.empty()) throw InvalidArgument("detuning grid is empty");
  if (!(p.epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0 for a transmission sweep");
  const double reference = empty_cavity_reference(p);

  Spectrum s;
  s.params = p;
  s.detunings.assign(grid.begin(), grid.end());
  s.transmission.assign(grid.size(), 0.0);
  s.normalized.assign(grid.size(), 0.0);
  const auto errors = detail::parallel_for(grid.size(), options.threads, [&](std::size_t k) {
    SystemParams point = p;
    point.delta_p = grid[k];
    const double photons = steady_response(point, options).photon_number;
    s.transmission[k] = std::max(0.0, p.kappa * photons);
    s.normalized[k] = s.transmission[k] / reference;
  });
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k]) {
      detail::rethrow_with_context(errors[k], "at detuning " + std::to_string(grid[k]) +
                                                  " MHz (index " + std::to_string(k) + ")");
    }
  }
  return s;
}

double analytic_transmission(const SystemParams& p, double delta_p) {
  p.validate();
  const Complex i(0.0, 1.0);
  const double g = p.effective_coupling();
  const Complex cavity = delta_p + i * p.kappa;
  Complex response = 0.0;
  if (g != 0.0 && delta_p != 0.0) {
    const Complex den = delta_p * delta_p + i * (p.gamma_eg + p.gamma_eu) * delta_p -
                        p.omega_c * p.omega_c;
    response = delta_p / den;
  }
  if (g != 0.0 && delta_p == 0.0 && p.omega_c == 0.0) {
    // Δ → 0 limit of Δ/(Δ² + iΓΔ) is 1/(iΓ).
    const double gamma = p.gamma_eg + p.gamma_eu;
    if (!(gamma > 0.0)) throw InvalidArgument("resonant response undefined without atomic decay");
    response = 1.0 / (i * gamma);
  }
  const Complex denominator = cavity - g * g * response;
  return p.kappa * p.kappa / std::norm(denominator);
}

Spectrum analytic_spectrum(const SystemParams& p, std::span<const double> grid) {
  require_increasing(grid, "detuning grid");
  const double reference = empty_cavity_reference(p);
  Spectrum s;
  s.params = p;
  s.detunings.assign(grid.begin(), grid.end());
  for (double delta : grid) {
    const double t = analytic_transmission(p, delta);
    s.normalized.push_back(t);
    s.transmission.push_back(t * reference);
  }
  return s;
}

LorentzianFit eit_fit(const SystemParams& p, const SweepOptions& options) {
  const std::vector<double> grid = default_detuning_grid(p, options.hamiltonian);
  return measure_linewidth(sweep_spectrum(p, grid, options));
}

double eit_linewidth(const SystemParams& p, const SweepOptions& options) {
  return eit_fit(p, options).fwhm;
}

std::vector<LinewidthCell> linewidth_map_2d(const SystemParams& base, std::span<const double> g_grid,
                                            std::span<const double> omega_c_grid,
                                            std::span<const double> n_th_list,
                                            const SweepOptions& options) {
  require_increasing(g_grid, "g grid");
  require_increasing(omega_c_grid, "omega_c grid");
  for (double n : n_th_list) {
    if (!std::isfinite(n) || n < 0.0) throw InvalidArgument("n_th values must be finite and >= 0");
  }
  std::vector<LinewidthCell> cells;
  for (double n_th : n_th_list) {
    for (double g : g_grid) {
      for (double oc : omega_c_grid) cells.push_back({g, oc, n_th, kNaN, kNaN, {}});
    }
  }
  SweepOptions inner = options;
  inner.hamiltonian = HamiltonianKind::thermal;
  inner.threads = 1;
  const auto errors = detail::parallel_for(cells.size(), options.threads, [&](std::size_t k) {
    LinewidthCell& cell = cells[k];
    SystemParams p = with_bath_occupancy(base, cell.n_th);
    p.g = cell.g;
    p.omega_c = cell.omega_c;
    cell.fwhm = eit_linewidth(p, inner);
    cell.ratio = cell.fwhm / (2.0 * p.kappa);
  });
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (errors[k]) {
      cells[k].fwhm = kNaN;
      cells[k].ratio = kNaN;
      cells[k].error = detail::describe(errors[k]);
    }
  }
  return cells;
}

ThermalComparison compare_thermal_nonthermal(const SystemParams& base,
                                             std::span<const double> omega_c_grid,
                                             std::span<const double> temperatures,
                                             const SweepOptions& options) {
  require_increasing(omega_c_grid, "omega_c grid");
  ThermalComparison out;
  out.temperatures.assign(temperatures.begin(), temperatures.end());
  for (double t : temperatures) out.n_th.push_back(nbar_from_temperature(t, base.omega_sec));

  const std::size_t columns = 2 + temperatures.size();
  std::vector<double> values(omega_c_grid.size() * columns, kNaN);
  SweepOptions inner = options;
  inner.threads = 1;
  const auto errors =
      detail::parallel_for(values.size(), options.threads, [&](std::size_t k) {
        const std::size_t row = k / columns;
        const std::size_t col = k % columns;
        SystemParams p = base;
        p.omega_c = omega_c_grid[row];
        if (col < 2) {
          p.dims.n_phonon = 1;
          SweepOptions nonthermal = inner;
          nonthermal.hamiltonian = HamiltonianKind::non_thermal;
          const std::vector<double> grid = default_detuning_grid(p, HamiltonianKind::non_thermal);
          values[k] = col == 0 ? measure_linewidth(analytic_spectrum(p, grid)).fwhm
                               : eit_linewidth(p, nonthermal);
        } else {
          p = with_bath_occupancy(p, out.n_th[col - 2]);
          SweepOptions thermal = inner;
          thermal.hamiltonian = HamiltonianKind::thermal;
          values[k] = eit_linewidth(p, thermal);
        }
      });

  static const char* const kFixedColumns[] = {"analytic", "non-thermal"};
  for (std::size_t row = 0; row < omega_c_grid.size(); ++row) {
    ComparisonRow r;
    r.omega_c = omega_c_grid[row];
    for (std::size_t col = 0; col < columns; ++col) {
      const std::size_t k = row * columns + col;
      if (errors[k]) {
        const std::string label =
            col < 2 ? kFixedColumns[col] : "thermal T=" + std::to_string(out.temperatures[col - 2]);
        r.errors.push_back(label + ": " + detail::describe(errors[k]));
      }
      if (col == 0) r.analytic_fwhm = values[k];
      else if (col == 1) r.nonthermal_fwhm = values[k];
      else r.thermal_fwhm.push_back(values[k]);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace ceit
