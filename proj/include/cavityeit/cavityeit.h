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

/* C interface to the cavityeit numerical core.
 *
 * Objects are opaque handles created by *_create / *_build / *_run and
 * released by the matching *_destroy (NULL is accepted). Every fallible call
 * returns a ceit_status; on failure ceit_last_error() holds a message for
 * the calling thread until its next failing call. Pointers returned by
 * accessors stay valid until the owning handle is destroyed.
 *
 * Units: rates and couplings in MHz, time in microseconds, temperature in K.
 */
#ifndef CAVITYEIT_H_
#define CAVITYEIT_H_

#include <stddef.h>

#if defined(CEIT_BUILDING_LIBRARY)
#define CEIT_API __attribute__((visibility("default")))
#else
#define CEIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ceit_status {
  CEIT_OK = 0,
  CEIT_ERR_INVALID_ARGUMENT = 1,
  CEIT_ERR_SOLVER = 2,
  CEIT_ERR_NO_CENTRAL_PEAK = 3,
  CEIT_ERR_FIT = 4,
  CEIT_ERR_OUT_OF_RANGE = 5,
  CEIT_ERR_INTERNAL = 6
} ceit_status;

CEIT_API const char* ceit_version(void);
CEIT_API const char* ceit_last_error(void);
CEIT_API const char* ceit_status_name(ceit_status status);

/* ---- parameters ------------------------------------------------------- */

typedef struct ceit_params ceit_params;

/* Defaults: single-ion working point (kappa 0.4, g 1.2, omega_c 1.0, ...). */
CEIT_API ceit_status ceit_params_create(ceit_params** out);
CEIT_API ceit_status ceit_params_copy(const ceit_params* src, ceit_params** out);
CEIT_API void ceit_params_destroy(ceit_params* params);

/* Real fields: kappa, g, omega_c, gamma_eg, gamma_eu, gamma_b, n_th, eta,
 * epsilon, delta_p, omega_sec. */
CEIT_API ceit_status ceit_params_set(ceit_params* params, const char* name, double value);
CEIT_API ceit_status ceit_params_get(const ceit_params* params, const char* name, double* value);
/* Integer fields: n_ions, n_atom, n_photon, n_phonon. */
CEIT_API ceit_status ceit_params_set_int(ceit_params* params, const char* name, int value);
CEIT_API ceit_status ceit_params_get_int(const ceit_params* params, const char* name, int* value);
CEIT_API ceit_status ceit_params_validate(const ceit_params* params);
/* Sets n_th and raises n_phonon to at least max(12, ceil(6 n_th)). */
CEIT_API ceit_status ceit_params_set_bath_occupancy(ceit_params* params, double n_th);
CEIT_API ceit_status ceit_phonon_cutoff_for(double n_th, int* cutoff);

/* ---- spectra ------------------------------------------------------------ */

typedef enum ceit_model { CEIT_MODEL_THERMAL = 0, CEIT_MODEL_NON_THERMAL = 1 } ceit_model;
typedef enum ceit_solver { CEIT_SOLVER_WEAK_PROBE = 0, CEIT_SOLVER_FULL = 1 } ceit_solver;

typedef struct ceit_sweep_options {
  int model;   /* ceit_model */
  int solver;  /* ceit_solver */
  int threads; /* 0: hardware concurrency */
} ceit_sweep_options;

CEIT_API void ceit_sweep_options_init(ceit_sweep_options* options);

/* Writes `points` detunings (MHz) into out. */
CEIT_API ceit_status ceit_default_grid(const ceit_params* params, int model, int points,
                                       double* out);

typedef struct ceit_spectrum ceit_spectrum;

/* options may be NULL for defaults. */
CEIT_API ceit_status ceit_spectrum_sweep(const ceit_params* params, const double* grid, size_t n,
                                         const ceit_sweep_options* options, ceit_spectrum** out);
CEIT_API ceit_status ceit_spectrum_analytic(const ceit_params* params, const double* grid,
                                            size_t n, ceit_spectrum** out);
CEIT_API void ceit_spectrum_destroy(ceit_spectrum* spectrum);
CEIT_API size_t ceit_spectrum_size(const ceit_spectrum* spectrum);
/* Any output pointer may be NULL. raw = kappa <a^dag a>, normalized = raw / (eps^2/kappa). */
CEIT_API ceit_status ceit_spectrum_data(const ceit_spectrum* spectrum, const double** detunings,
                                        const double** raw, const double** normalized);

typedef struct ceit_lorentzian {
  double center;
  double fwhm;
  double amplitude;
  double offset;
  double rms_residual;
  double window_lo;
  double window_hi;
  int samples;
} ceit_lorentzian;

CEIT_API ceit_status ceit_fit_lorentzian(const double* x, const double* y, size_t n, double lo,
                                         double hi, ceit_lorentzian* out);
/* Central-window fit on the normalized transmission. */
CEIT_API ceit_status ceit_spectrum_linewidth(const ceit_spectrum* spectrum, ceit_lorentzian* out);
/* Default-grid sweep followed by ceit_spectrum_linewidth. */
CEIT_API ceit_status ceit_eit_linewidth(const ceit_params* params,
                                        const ceit_sweep_options* options, ceit_lorentzian* out);
/* Normalized weak-probe transmission of the model without phonons. */
CEIT_API ceit_status ceit_analytic_transmission(const ceit_params* params, double delta_p,
                                                double* out);

typedef struct ceit_response {
  double photon_number;
  double phonon_number;
  double field_re;
  double field_im;
} ceit_response;

CEIT_API ceit_status ceit_steady_response(const ceit_params* params,
                                          const ceit_sweep_options* options, ceit_response* out);

typedef struct ceit_convergence {
  int base_photon;
  int base_phonon;
  int doubled_photon;
  int doubled_phonon;
  double base_value;
  double doubled_value;
  double relative_change;
  double tolerance;
  int passed;
} ceit_convergence;

/* Central FWHM recomputed with the photon and phonon cutoffs doubled. */
CEIT_API ceit_status ceit_linewidth_convergence(const ceit_params* params,
                                                const ceit_sweep_options* options,
                                                double tolerance, ceit_convergence* out);

typedef struct ceit_map_cell {
  double g;
  double omega_c;
  double n_th;
  double fwhm;  /* NaN when ok == 0 */
  double ratio; /* fwhm / (2 kappa) */
  int ok;
} ceit_map_cell;

/* out holds n_nth * n_g * n_omega cells, n_th outermost, omega_c innermost. */
CEIT_API ceit_status ceit_linewidth_map(const ceit_params* params, const double* g, size_t n_g,
                                        const double* omega_c, size_t n_omega, const double* n_th,
                                        size_t n_nth, const ceit_sweep_options* options,
                                        ceit_map_cell* out);

/* analytic/nonthermal: n_omega values; thermal: n_omega * n_temp values
 * (row per omega_c); n_th: n_temp values. Failed cells are NaN. */
CEIT_API ceit_status ceit_compare_thermal(const ceit_params* params, const double* omega_c,
                                          size_t n_omega, const double* temperatures,
                                          size_t n_temp, const ceit_sweep_options* options,
                                          double* analytic, double* nonthermal, double* thermal,
                                          double* n_th);

/* ---- thermometry -------------------------------------------------------- */

CEIT_API ceit_status ceit_nbar_from_temperature(double temperature, double omega_sec,
                                                double* nbar);
CEIT_API ceit_status ceit_temperature_from_nbar(double nbar, double omega_sec,
                                                double* temperature);
CEIT_API ceit_status ceit_collective_coupling(double g, int n_ions, double* g_eff);
/* Writes up to capacity values; *count receives the full grid length. */
CEIT_API ceit_status ceit_log_temperature_grid(double t_min, double t_max, int per_decade,
                                               double* out, size_t capacity, size_t* count);

typedef struct ceit_calibration ceit_calibration;

CEIT_API ceit_status ceit_calibration_build(const ceit_params* params, const double* temperatures,
                                            size_t n, const ceit_sweep_options* options,
                                            ceit_calibration** out);
/* nbar_steady may be NULL. */
CEIT_API ceit_status ceit_calibration_from_table(const ceit_params* params,
                                                 const double* temperatures,
                                                 const double* linewidths,
                                                 const double* nbar_steady, size_t n,
                                                 ceit_calibration** out);
CEIT_API void ceit_calibration_destroy(ceit_calibration* curve);
CEIT_API size_t ceit_calibration_size(const ceit_calibration* curve);
CEIT_API ceit_status ceit_calibration_data(const ceit_calibration* curve,
                                           const double** temperatures, const double** n_th,
                                           const double** nbar_steady, const double** linewidths);
CEIT_API ceit_status ceit_calibration_cutoffs(const ceit_calibration* curve, const int** cutoffs);
/* Empty string for points that succeeded. */
CEIT_API const char* ceit_calibration_error(const ceit_calibration* curve, size_t index);
CEIT_API ceit_status ceit_calibration_monotone_range(const ceit_calibration* curve, size_t* begin,
                                                     size_t* end);

typedef struct ceit_inversion {
  double temperature;
  double nbar;
  double sensitivity; /* dT/dFWHM, K/MHz */
  int low_sensitivity;
  double fwhm_lo;
  double fwhm_hi;
} ceit_inversion;

CEIT_API ceit_status ceit_calibration_invert(const ceit_calibration* curve, double fwhm,
                                             ceit_inversion* out);

typedef struct ceit_heating {
  double slope;
  double single_rate;
  double double_rate;
  double factor;
} ceit_heating;

CEIT_API ceit_status ceit_heating_rate(const ceit_params* params, ceit_heating* out);

typedef struct ceit_multiion_point {
  int n_ions;
  double g_eff;
  double fwhm;
  double fwhm_ratio;
  int ok;
} ceit_multiion_point;

CEIT_API ceit_status ceit_multiion_scan(const ceit_params* params, const int* n_ions, size_t n,
                                        const ceit_sweep_options* options,
                                        ceit_multiion_point* out);

/* ---- sideband physics --------------------------------------------------- */

CEIT_API ceit_status ceit_bsb_rabi_trace(double eta, double omega, double gamma, int n0,
                                         const double* times, size_t n, int n_phonon,
                                         double* excited);

typedef struct ceit_rabi_fit {
  double rabi_frequency;
  double decay;
  double amplitude;
  double offset;
  double rms_residual;
} ceit_rabi_fit;

CEIT_API ceit_status ceit_fit_rabi(const double* times, const double* population, size_t n,
                                   ceit_rabi_fit* out);

typedef struct ceit_sideband_ratio {
  int n;
  double pulse_time;
  double p_rsb;
  double p_bsb;
  double ratio;
  double p_rsb_avg;
  double p_bsb_avg;
  double ratio_avg;
  double expected;
} ceit_sideband_ratio;

/* pulse_time <= 0 selects the carrier pi-time pi/(2 omega); n_phonon <= 0
 * selects n + 12. */
CEIT_API ceit_status ceit_sideband_ratio_run(int n, double eta, double omega, double gamma,
                                             double pulse_time, int n_phonon,
                                             ceit_sideband_ratio* out);

typedef enum ceit_pulse_kind { CEIT_PULSE_BSB = 0, CEIT_PULSE_RSB = 1, CEIT_PULSE_WAIT = 2 } ceit_pulse_kind;

typedef struct ceit_pulse_step {
  int kind; /* ceit_pulse_kind */
  double duration;
} ceit_pulse_step;

typedef struct ceit_trajectory ceit_trajectory;

/* Starts from |level, phonon> with level 0 = u (internal ground), 1 = e. */
CEIT_API ceit_status ceit_cooling_run(const ceit_pulse_step* steps, size_t n_steps, double eta,
                                      double omega, double gamma, int n_phonon,
                                      int initial_level, int initial_phonon,
                                      int samples_per_step, ceit_trajectory** out);
CEIT_API void ceit_trajectory_destroy(ceit_trajectory* trajectory);
CEIT_API size_t ceit_trajectory_samples(const ceit_trajectory* trajectory);
CEIT_API size_t ceit_trajectory_states(const ceit_trajectory* trajectory);
CEIT_API const char* ceit_trajectory_label(const ceit_trajectory* trajectory, size_t state);
CEIT_API ceit_status ceit_trajectory_series(const ceit_trajectory* trajectory,
                                            const double** times, const double** mean_phonon,
                                            const double** excited, const int** step_index);
/* Row of ceit_trajectory_states() populations for one sample. */
CEIT_API ceit_status ceit_trajectory_populations(const ceit_trajectory* trajectory, size_t sample,
                                                 const double** row);

#ifdef __cplusplus
}
#endif

#endif /* CAVITYEIT_H_ */
