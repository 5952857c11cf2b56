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

#include "cavityeit/cavityeit.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "cavityeit/dynamics.hpp"
#include "cavityeit/errors.hpp"
#include "cavityeit/sideband.hpp"
#include "cavityeit/spectrum.hpp"
#include "cavityeit/thermometry.hpp"

struct ceit_params {
  ceit::SystemParams value;
};

struct ceit_spectrum {
  ceit::Spectrum value;
};

struct ceit_calibration {
  ceit::CalibrationCurve value;
};

struct ceit_trajectory {
  ceit::CoolingTrajectory value;
  std::vector<std::string> labels;
};

namespace {

thread_local std::string last_error;

ceit_status fail(ceit_status status, const char* message) {
  last_error = message;
  return status;
}

template <typename Body>
ceit_status guarded(Body&& body) {
  try {
    body();
    return CEIT_OK;
  } catch (const ceit::InvalidArgument& ex) {
    return fail(CEIT_ERR_INVALID_ARGUMENT, ex.what());
  } catch (const ceit::SolverError& ex) {
    return fail(CEIT_ERR_SOLVER, ex.what());
  } catch (const ceit::NoCentralPeak& ex) {
    return fail(CEIT_ERR_NO_CENTRAL_PEAK, ex.what());
  } catch (const ceit::FitError& ex) {
    return fail(CEIT_ERR_FIT, ex.what());
  } catch (const ceit::OutOfRange& ex) {
    return fail(CEIT_ERR_OUT_OF_RANGE, ex.what());
  } catch (const std::bad_alloc&) {
    return fail(CEIT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& ex) {
    return fail(CEIT_ERR_INTERNAL, ex.what());
  } catch (...) {
    return fail(CEIT_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) throw ceit::InvalidArgument(std::string(name) + " must not be NULL");
}

ceit::SweepOptions to_options(const ceit_sweep_options* options) {
  ceit::SweepOptions out;
  if (options == nullptr) return out;
  switch (options->model) {
    case CEIT_MODEL_THERMAL: out.hamiltonian = ceit::HamiltonianKind::thermal; break;
    case CEIT_MODEL_NON_THERMAL: out.hamiltonian = ceit::HamiltonianKind::non_thermal; break;
    default: throw ceit::InvalidArgument("unknown model " + std::to_string(options->model));
  }
  switch (options->solver) {
    case CEIT_SOLVER_WEAK_PROBE: out.solver = ceit::SolverKind::weak_probe; break;
    case CEIT_SOLVER_FULL: out.solver = ceit::SolverKind::full; break;
    default: throw ceit::InvalidArgument("unknown solver " + std::to_string(options->solver));
  }
  if (options->threads < 0) throw ceit::InvalidArgument("threads must be >= 0");
  out.threads = options->threads;
  return out;
}

double* real_field(ceit::SystemParams& p, const std::string& name) {
  if (name == "kappa") return &p.kappa;
  if (name == "g") return &p.g;
  if (name == "omega_c") return &p.omega_c;
  if (name == "gamma_eg") return &p.gamma_eg;
  if (name == "gamma_eu") return &p.gamma_eu;
  if (name == "gamma_b") return &p.gamma_b;
  if (name == "n_th") return &p.n_th;
  if (name == "eta") return &p.eta;
  if (name == "epsilon") return &p.epsilon;
  if (name == "delta_p") return &p.delta_p;
  if (name == "omega_sec") return &p.omega_sec;
  throw ceit::InvalidArgument("unknown real parameter '" + name + "'");
}

int* int_field(ceit::SystemParams& p, const std::string& name) {
  if (name == "n_ions") return &p.n_ions;
  if (name == "n_atom") return &p.dims.n_atom;
  if (name == "n_photon") return &p.dims.n_photon;
  if (name == "n_phonon") return &p.dims.n_phonon;
  throw ceit::InvalidArgument("unknown integer parameter '" + name + "'");
}

void fill(const ceit::LorentzianFit& fit, ceit_lorentzian* out) {
  out->center = fit.center;
  out->fwhm = fit.fwhm;
  out->amplitude = fit.amplitude;
  out->offset = fit.offset;
  out->rms_residual = fit.rms_residual;
  out->window_lo = fit.window_lo;
  out->window_hi = fit.window_hi;
  out->samples = fit.samples;
}

template <typename T>
std::span<const T> view(const T* data, size_t n, const char* name) {
  if (n > 0) require(data, name);
  return {data, n};
}

}  // namespace

extern "C" {

const char* ceit_version(void) { return CEIT_VERSION_STRING; }

const char* ceit_last_error(void) { return last_error.c_str(); }

const char* ceit_status_name(ceit_status status) {
  switch (status) {
    case CEIT_OK: return "ok";
    case CEIT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CEIT_ERR_SOLVER: return "solver failure";
    case CEIT_ERR_NO_CENTRAL_PEAK: return "no central peak";
    case CEIT_ERR_FIT: return "fit failure";
    case CEIT_ERR_OUT_OF_RANGE: return "out of range";
    case CEIT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ceit_status ceit_params_create(ceit_params** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ceit_params{};
  });
}

ceit_status ceit_params_copy(const ceit_params* src, ceit_params** out) {
  return guarded([&] {
    require(src, "src");
    require(out, "out");
    *out = new ceit_params{src->value};
  });
}

void ceit_params_destroy(ceit_params* params) { delete params; }

ceit_status ceit_params_set(ceit_params* params, const char* name, double value) {
  return guarded([&] {
    require(params, "params");
    require(name, "name");
    *real_field(params->value, name) = value;
  });
}

ceit_status ceit_params_get(const ceit_params* params, const char* name, double* value) {
  return guarded([&] {
    require(params, "params");
    require(name, "name");
    require(value, "value");
    ceit::SystemParams copy = params->value;
    *value = *real_field(copy, name);
  });
}

ceit_status ceit_params_set_int(ceit_params* params, const char* name, int value) {
  return guarded([&] {
    require(params, "params");
    require(name, "name");
    *int_field(params->value, name) = value;
  });
}

ceit_status ceit_params_get_int(const ceit_params* params, const char* name, int* value) {
  return guarded([&] {
    require(params, "params");
    require(name, "name");
    require(value, "value");
    ceit::SystemParams copy = params->value;
    *value = *int_field(copy, name);
  });
}

ceit_status ceit_params_validate(const ceit_params* params) {
  return guarded([&] {
    require(params, "params");
    params->value.validate();
  });
}

ceit_status ceit_params_set_bath_occupancy(ceit_params* params, double n_th) {
  return guarded([&] {
    require(params, "params");
    if (!std::isfinite(n_th) || n_th < 0.0) throw ceit::InvalidArgument("n_th must be >= 0");
    params->value = ceit::with_bath_occupancy(params->value, n_th);
  });
}

ceit_status ceit_phonon_cutoff_for(double n_th, int* cutoff) {
  return guarded([&] {
    require(cutoff, "cutoff");
    if (!std::isfinite(n_th) || n_th < 0.0) throw ceit::InvalidArgument("n_th must be >= 0");
    *cutoff = ceit::phonon_cutoff_for(n_th);
  });
}

void ceit_sweep_options_init(ceit_sweep_options* options) {
  if (options == nullptr) return;
  options->model = CEIT_MODEL_THERMAL;
  options->solver = CEIT_SOLVER_WEAK_PROBE;
  options->threads = 0;
}

ceit_status ceit_default_grid(const ceit_params* params, int model, int points, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    ceit_sweep_options opts;
    ceit_sweep_options_init(&opts);
    opts.model = model;
    const auto grid =
        ceit::default_detuning_grid(params->value, to_options(&opts).hamiltonian, points);
    std::copy(grid.begin(), grid.end(), out);
  });
}

ceit_status ceit_spectrum_sweep(const ceit_params* params, const double* grid, size_t n,
                                const ceit_sweep_options* options, ceit_spectrum** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    auto s = ceit::sweep_spectrum(params->value, view(grid, n, "grid"), to_options(options));
    *out = new ceit_spectrum{std::move(s)};
  });
}

ceit_status ceit_spectrum_analytic(const ceit_params* params, const double* grid, size_t n,
                                   ceit_spectrum** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = new ceit_spectrum{ceit::analytic_spectrum(params->value, view(grid, n, "grid"))};
  });
}

void ceit_spectrum_destroy(ceit_spectrum* spectrum) { delete spectrum; }

size_t ceit_spectrum_size(const ceit_spectrum* spectrum) {
  return spectrum == nullptr ? 0 : spectrum->value.size();
}

ceit_status ceit_spectrum_data(const ceit_spectrum* spectrum, const double** detunings,
                               const double** raw, const double** normalized) {
  return guarded([&] {
    require(spectrum, "spectrum");
    if (detunings) *detunings = spectrum->value.detunings.data();
    if (raw) *raw = spectrum->value.transmission.data();
    if (normalized) *normalized = spectrum->value.normalized.data();
  });
}

ceit_status ceit_fit_lorentzian(const double* x, const double* y, size_t n, double lo, double hi,
                                ceit_lorentzian* out) {
  return guarded([&] {
    require(out, "out");
    fill(ceit::fit_lorentzian(view(x, n, "x"), view(y, n, "y"), lo, hi), out);
  });
}

ceit_status ceit_spectrum_linewidth(const ceit_spectrum* spectrum, ceit_lorentzian* out) {
  return guarded([&] {
    require(spectrum, "spectrum");
    require(out, "out");
    fill(ceit::measure_linewidth(spectrum->value), out);
  });
}

ceit_status ceit_eit_linewidth(const ceit_params* params, const ceit_sweep_options* options,
                               ceit_lorentzian* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    fill(ceit::eit_fit(params->value, to_options(options)), out);
  });
}

ceit_status ceit_analytic_transmission(const ceit_params* params, double delta_p, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = ceit::analytic_transmission(params->value, delta_p);
  });
}

ceit_status ceit_steady_response(const ceit_params* params, const ceit_sweep_options* options,
                                 ceit_response* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    const auto r = ceit::steady_response(params->value, to_options(options));
    out->photon_number = r.photon_number;
    out->phonon_number = r.phonon_number;
    out->field_re = r.field.real();
    out->field_im = r.field.imag();
  });
}

ceit_status ceit_linewidth_convergence(const ceit_params* params, const ceit_sweep_options* options,
                                       double tolerance, ceit_convergence* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    const ceit::SweepOptions opts = to_options(options);
    const auto report = ceit::convergence_check(
        params->value, [&](const ceit::SystemParams& p) { return ceit::eit_linewidth(p, opts); },
        tolerance);
    out->base_photon = report.base.n_photon;
    out->base_phonon = report.base.n_phonon;
    out->doubled_photon = report.doubled.n_photon;
    out->doubled_phonon = report.doubled.n_phonon;
    out->base_value = report.base_value;
    out->doubled_value = report.doubled_value;
    out->relative_change = report.relative_change;
    out->tolerance = report.tolerance;
    out->passed = report.passed ? 1 : 0;
  });
}

ceit_status ceit_linewidth_map(const ceit_params* params, const double* g, size_t n_g,
                               const double* omega_c, size_t n_omega, const double* n_th,
                               size_t n_nth, const ceit_sweep_options* options,
                               ceit_map_cell* out) {
  return guarded([&] {
    require(params, "params");
    if (n_g * n_omega * n_nth > 0) require(out, "out");
    const auto cells =
        ceit::linewidth_map_2d(params->value, view(g, n_g, "g"), view(omega_c, n_omega, "omega_c"),
                               view(n_th, n_nth, "n_th"), to_options(options));
    for (size_t k = 0; k < cells.size(); ++k) {
      out[k] = {cells[k].g, cells[k].omega_c, cells[k].n_th, cells[k].fwhm, cells[k].ratio,
                cells[k].ok() ? 1 : 0};
    }
  });
}

ceit_status ceit_compare_thermal(const ceit_params* params, const double* omega_c, size_t n_omega,
                                 const double* temperatures, size_t n_temp,
                                 const ceit_sweep_options* options, double* analytic,
                                 double* nonthermal, double* thermal, double* n_th) {
  return guarded([&] {
    require(params, "params");
    if (n_omega > 0) {
      require(analytic, "analytic");
      require(nonthermal, "nonthermal");
    }
    if (n_omega * n_temp > 0) require(thermal, "thermal");
    if (n_temp > 0) require(n_th, "n_th");
    const auto cmp = ceit::compare_thermal_nonthermal(params->value,
                                                      view(omega_c, n_omega, "omega_c"),
                                                      view(temperatures, n_temp, "temperatures"),
                                                      to_options(options));
    for (size_t t = 0; t < n_temp; ++t) n_th[t] = cmp.n_th[t];
    for (size_t r = 0; r < n_omega; ++r) {
      analytic[r] = cmp.rows[r].analytic_fwhm;
      nonthermal[r] = cmp.rows[r].nonthermal_fwhm;
      for (size_t t = 0; t < n_temp; ++t) thermal[r * n_temp + t] = cmp.rows[r].thermal_fwhm[t];
    }
  });
}

ceit_status ceit_nbar_from_temperature(double temperature, double omega_sec, double* nbar) {
  return guarded([&] {
    require(nbar, "nbar");
    *nbar = ceit::nbar_from_temperature(temperature, omega_sec);
  });
}

ceit_status ceit_temperature_from_nbar(double nbar, double omega_sec, double* temperature) {
  return guarded([&] {
    require(temperature, "temperature");
    *temperature = ceit::temperature_from_nbar(nbar, omega_sec);
  });
}

ceit_status ceit_collective_coupling(double g, int n_ions, double* g_eff) {
  return guarded([&] {
    require(g_eff, "g_eff");
    *g_eff = ceit::collective_coupling(g, n_ions);
  });
}

ceit_status ceit_log_temperature_grid(double t_min, double t_max, int per_decade, double* out,
                                      size_t capacity, size_t* count) {
  return guarded([&] {
    require(count, "count");
    const auto grid = ceit::log_temperature_grid(t_min, t_max, per_decade);
    *count = grid.size();
    if (capacity > 0) require(out, "out");
    for (size_t k = 0; k < grid.size() && k < capacity; ++k) out[k] = grid[k];
  });
}

ceit_status ceit_calibration_build(const ceit_params* params, const double* temperatures, size_t n,
                                   const ceit_sweep_options* options, ceit_calibration** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    auto curve = ceit::build_calibration(params->value, view(temperatures, n, "temperatures"),
                                         to_options(options));
    *out = new ceit_calibration{std::move(curve)};
  });
}

ceit_status ceit_calibration_from_table(const ceit_params* params, const double* temperatures,
                                        const double* linewidths, const double* nbar_steady,
                                        size_t n, ceit_calibration** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    std::span<const double> nbar;
    if (nbar_steady != nullptr) nbar = {nbar_steady, n};
    auto curve = ceit::make_calibration(params->value, view(temperatures, n, "temperatures"),
                                        view(linewidths, n, "linewidths"), nbar);
    *out = new ceit_calibration{std::move(curve)};
  });
}

void ceit_calibration_destroy(ceit_calibration* curve) { delete curve; }

size_t ceit_calibration_size(const ceit_calibration* curve) {
  return curve == nullptr ? 0 : curve->value.size();
}

ceit_status ceit_calibration_data(const ceit_calibration* curve, const double** temperatures,
                                  const double** n_th, const double** nbar_steady,
                                  const double** linewidths) {
  return guarded([&] {
    require(curve, "curve");
    if (temperatures) *temperatures = curve->value.temperatures.data();
    if (n_th) *n_th = curve->value.n_th.data();
    if (nbar_steady) *nbar_steady = curve->value.nbar_steady.data();
    if (linewidths) *linewidths = curve->value.linewidths.data();
  });
}

ceit_status ceit_calibration_cutoffs(const ceit_calibration* curve, const int** cutoffs) {
  return guarded([&] {
    require(curve, "curve");
    require(cutoffs, "cutoffs");
    *cutoffs = curve->value.phonon_cutoffs.data();
  });
}

const char* ceit_calibration_error(const ceit_calibration* curve, size_t index) {
  if (curve == nullptr || index >= curve->value.errors.size()) return "";
  return curve->value.errors[index].c_str();
}

ceit_status ceit_calibration_monotone_range(const ceit_calibration* curve, size_t* begin,
                                            size_t* end) {
  return guarded([&] {
    require(curve, "curve");
    require(begin, "begin");
    require(end, "end");
    *begin = curve->value.monotone_begin;
    *end = curve->value.monotone_end;
  });
}

ceit_status ceit_calibration_invert(const ceit_calibration* curve, double fwhm,
                                    ceit_inversion* out) {
  return guarded([&] {
    require(curve, "curve");
    require(out, "out");
    const auto inv = ceit::invert_linewidth(curve->value, fwhm);
    *out = {inv.temperature, inv.nbar, inv.sensitivity, inv.low_sensitivity ? 1 : 0, inv.fwhm_lo,
            inv.fwhm_hi};
  });
}

ceit_status ceit_heating_rate(const ceit_params* params, ceit_heating* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    const auto h = ceit::heating_rate(params->value);
    *out = {h.slope, h.single_rate, h.double_rate, h.factor};
  });
}

ceit_status ceit_multiion_scan(const ceit_params* params, const int* n_ions, size_t n,
                               const ceit_sweep_options* options, ceit_multiion_point* out) {
  return guarded([&] {
    require(params, "params");
    if (n > 0) require(out, "out");
    const auto points =
        ceit::multiion_linewidth_scan(params->value, view(n_ions, n, "n_ions"), to_options(options));
    for (size_t k = 0; k < points.size(); ++k) {
      out[k] = {points[k].n_ions, points[k].g_eff, points[k].fwhm, points[k].fwhm_ratio,
                points[k].error.empty() ? 1 : 0};
    }
  });
}

ceit_status ceit_bsb_rabi_trace(double eta, double omega, double gamma, int n0,
                                const double* times, size_t n, int n_phonon, double* excited) {
  return guarded([&] {
    if (n > 0) require(excited, "excited");
    const auto trace = ceit::bsb_rabi_trace(eta, omega, gamma, n0, view(times, n, "times"), n_phonon);
    std::copy(trace.begin(), trace.end(), excited);
  });
}

ceit_status ceit_fit_rabi(const double* times, const double* population, size_t n,
                          ceit_rabi_fit* out) {
  return guarded([&] {
    require(out, "out");
    const auto fit =
        ceit::fit_rabi_oscillation(view(times, n, "times"), view(population, n, "population"));
    *out = {fit.rabi_frequency, fit.decay, fit.amplitude, fit.offset, fit.rms_residual};
  });
}

ceit_status ceit_sideband_ratio_run(int n, double eta, double omega, double gamma,
                                    double pulse_time, int n_phonon, ceit_sideband_ratio* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = ceit::sideband_ratio(n, eta, omega, gamma, pulse_time, n_phonon);
    *out = {r.n,     r.pulse_time, r.p_rsb,     r.p_bsb,   r.ratio,
            r.p_rsb_avg, r.p_bsb_avg, r.ratio_avg, r.expected};
  });
}

ceit_status ceit_cooling_run(const ceit_pulse_step* steps, size_t n_steps, double eta,
                             double omega, double gamma, int n_phonon, int initial_level,
                             int initial_phonon, int samples_per_step, ceit_trajectory** out) {
  return guarded([&] {
    require(out, "out");
    if (n_steps > 0) require(steps, "steps");
    ceit::PulseSequence seq;
    seq.eta = eta;
    seq.omega = omega;
    seq.gamma = gamma;
    seq.n_phonon = n_phonon;
    for (size_t k = 0; k < n_steps; ++k) {
      if (steps[k].kind < CEIT_PULSE_BSB || steps[k].kind > CEIT_PULSE_WAIT) {
        throw ceit::InvalidArgument("pulse step " + std::to_string(k) + " has an unknown kind");
      }
      seq.steps.push_back({static_cast<ceit::PulseKind>(steps[k].kind), steps[k].duration});
    }
    seq.validate();
    if (initial_level != 0 && initial_level != 1) {
      throw ceit::InvalidArgument("initial_level must be 0 (u) or 1 (e)");
    }
    if (initial_phonon < 0 || initial_phonon >= n_phonon) {
      throw ceit::InvalidArgument("initial_phonon outside the phonon cutoff");
    }
    const ceit::SpaceDims dims = ceit::sideband_dims(n_phonon);
    const auto rho0 =
        ceit::DensityMatrix::basis_state(dims, dims.index(initial_level, 0, initial_phonon));
    auto traj = ceit::run_cooling_sequence(seq, rho0, samples_per_step);
    auto labels = traj.labels();
    *out = new ceit_trajectory{std::move(traj), std::move(labels)};
  });
}

void ceit_trajectory_destroy(ceit_trajectory* trajectory) { delete trajectory; }

size_t ceit_trajectory_samples(const ceit_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : trajectory->value.times.size();
}

size_t ceit_trajectory_states(const ceit_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : trajectory->labels.size();
}

const char* ceit_trajectory_label(const ceit_trajectory* trajectory, size_t state) {
  if (trajectory == nullptr || state >= trajectory->labels.size()) return "";
  return trajectory->labels[state].c_str();
}

ceit_status ceit_trajectory_series(const ceit_trajectory* trajectory, const double** times,
                                   const double** mean_phonon, const double** excited,
                                   const int** step_index) {
  return guarded([&] {
    require(trajectory, "trajectory");
    if (times) *times = trajectory->value.times.data();
    if (mean_phonon) *mean_phonon = trajectory->value.mean_phonon.data();
    if (excited) *excited = trajectory->value.excited_population.data();
    if (step_index) *step_index = trajectory->value.step_index.data();
  });
}

ceit_status ceit_trajectory_populations(const ceit_trajectory* trajectory, size_t sample,
                                        const double** row) {
  return guarded([&] {
    require(trajectory, "trajectory");
    require(row, "row");
    if (sample >= trajectory->value.populations.size()) {
      throw ceit::InvalidArgument("sample index out of range");
    }
    *row = trajectory->value.populations[sample].data();
  });
}

}  // extern "C"
