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

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "cavityeit/cavityeit.h"
#include "doctest.h"

namespace {

struct Params {
  ceit_params* p = nullptr;
  Params() { REQUIRE(ceit_params_create(&p) == CEIT_OK); }
  ~Params() { ceit_params_destroy(p); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ceit_version()).find('.') != std::string::npos);
  CHECK(std::string(ceit_status_name(CEIT_ERR_OUT_OF_RANGE)) == "out of range");
  CHECK(std::string(ceit_status_name(static_cast<ceit_status>(42))) == "unknown status");
}

TEST_CASE("parameters: defaults, setters and errors") {
  Params h;
  double kappa = 0.0;
  CHECK(ceit_params_get(h.p, "kappa", &kappa) == CEIT_OK);
  CHECK(kappa == 0.4);
  CHECK(ceit_params_set(h.p, "g", 2.0) == CEIT_OK);
  double g = 0.0;
  CHECK(ceit_params_get(h.p, "g", &g) == CEIT_OK);
  CHECK(g == 2.0);
  CHECK(ceit_params_set(h.p, "gee", 2.0) == CEIT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ceit_last_error()).find("gee") != std::string::npos);
  CHECK(ceit_params_set_int(h.p, "n_phonon", 5) == CEIT_OK);
  int n = 0;
  CHECK(ceit_params_get_int(h.p, "n_phonon", &n) == CEIT_OK);
  CHECK(n == 5);
  CHECK(ceit_params_set_bath_occupancy(h.p, 3.0) == CEIT_OK);
  CHECK(ceit_params_get_int(h.p, "n_phonon", &n) == CEIT_OK);
  CHECK(n == 18);
  CHECK(ceit_params_set(h.p, "kappa", -1.0) == CEIT_OK);
  CHECK(ceit_params_validate(h.p) == CEIT_ERR_INVALID_ARGUMENT);
  CHECK(ceit_params_get(nullptr, "kappa", &kappa) == CEIT_ERR_INVALID_ARGUMENT);
  ceit_params* copy = nullptr;
  CHECK(ceit_params_copy(h.p, &copy) == CEIT_OK);
  CHECK(ceit_params_get(copy, "g", &g) == CEIT_OK);
  CHECK(g == 2.0);
  ceit_params_destroy(copy);
}

TEST_CASE("empty-cavity spectrum through the C API") {
  Params h;
  ceit_params_set(h.p, "g", 0.0);
  ceit_params_set(h.p, "omega_c", 0.0);
  ceit_params_set_int(h.p, "n_phonon", 2);
  std::vector<double> grid(101);
  for (int i = 0; i < 101; ++i) grid[i] = -2.0 + 0.04 * i;
  ceit_sweep_options opts;
  ceit_sweep_options_init(&opts);
  opts.threads = 1;
  ceit_spectrum* s = nullptr;
  REQUIRE(ceit_spectrum_sweep(h.p, grid.data(), grid.size(), &opts, &s) == CEIT_OK);
  CHECK(ceit_spectrum_size(s) == 101);
  const double *x = nullptr, *y = nullptr, *yn = nullptr;
  CHECK(ceit_spectrum_data(s, &x, &y, &yn) == CEIT_OK);
  CHECK(yn[50] == doctest::Approx(1.0).epsilon(1e-10));
  ceit_lorentzian fit{};
  CHECK(ceit_spectrum_linewidth(s, &fit) == CEIT_OK);
  CHECK(fit.fwhm == doctest::Approx(0.8).epsilon(1e-6));
  ceit_spectrum_destroy(s);
  ceit_spectrum_destroy(nullptr);
}

TEST_CASE("exceptions become status codes") {
  Params h;
  ceit_sweep_options opts;
  ceit_sweep_options_init(&opts);
  opts.model = 7;
  ceit_lorentzian fit{};
  CHECK(ceit_eit_linewidth(h.p, &opts, &fit) == CEIT_ERR_INVALID_ARGUMENT);

  // a dip at the origin
  std::vector<double> x(41), y(41);
  for (int i = 0; i < 41; ++i) {
    x[i] = -2.0 + 0.1 * i;
    y[i] = 1.0 - 1.0 / (1.0 + x[i] * x[i]);
  }
  ceit_map_cell cell{};
  const double nth = 1e-4, g = 1.2, oc = 1.0;
  ceit_sweep_options_init(&opts);
  opts.threads = 1;
  CHECK(ceit_linewidth_map(h.p, &g, 1, &oc, 1, &nth, 1, &opts, &cell) == CEIT_OK);
  CHECK(cell.ok == 0);
  CHECK(std::isnan(cell.fwhm));
  CHECK(ceit_fit_lorentzian(x.data(), y.data(), 41, -2.0, 2.0, &fit) == CEIT_ERR_FIT);

  double t = 0.0;
  CHECK(ceit_temperature_from_nbar(0.0, 10.0, &t) == CEIT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ceit_last_error()).find("ground state") != std::string::npos);
}

TEST_CASE("calibration table inversion and out-of-range status") {
  Params h;
  std::vector<double> temps, widths;
  for (int i = 0; i < 8; ++i) {
    temps.push_back(1e-4 * (i + 1));
    widths.push_back(0.3 + 200.0 * temps.back());
  }
  ceit_calibration* c = nullptr;
  REQUIRE(ceit_calibration_from_table(h.p, temps.data(), widths.data(), nullptr, 8, &c) == CEIT_OK);
  CHECK(ceit_calibration_size(c) == 8);
  size_t begin = 9, end = 9;
  CHECK(ceit_calibration_monotone_range(c, &begin, &end) == CEIT_OK);
  CHECK(begin == 0);
  CHECK(end == 8);
  ceit_inversion inv{};
  CHECK(ceit_calibration_invert(c, 0.3 + 200.0 * 2.5e-4, &inv) == CEIT_OK);
  CHECK(inv.temperature == doctest::Approx(2.5e-4).epsilon(1e-12));
  CHECK(ceit_calibration_invert(c, 5.0, &inv) == CEIT_ERR_OUT_OF_RANGE);
  CHECK(std::string(ceit_last_error()).find("calibrated span") != std::string::npos);
  CHECK(std::string(ceit_calibration_error(c, 3)).empty());
  ceit_calibration_destroy(c);
}

TEST_CASE("temperature grid with a capacity query") {
  size_t count = 0;
  CHECK(ceit_log_temperature_grid(1e-5, 1e-2, 24, nullptr, 0, &count) == CEIT_OK);
  CHECK(count == 73);
  std::vector<double> grid(count);
  CHECK(ceit_log_temperature_grid(1e-5, 1e-2, 24, grid.data(), grid.size(), &count) == CEIT_OK);
  CHECK(grid.back() == doctest::Approx(1e-2));
}

TEST_CASE("sideband entry points") {
  ceit_sideband_ratio r{};
  CHECK(ceit_sideband_ratio_run(1, 0.05, 2.0, 0.0, 0.0, 0, &r) == CEIT_OK);
  CHECK(r.ratio == doctest::Approx(0.5).epsilon(0.01));

  const ceit_pulse_step steps[] = {{CEIT_PULSE_RSB, 2.0}, {CEIT_PULSE_WAIT, 0.5}};
  ceit_trajectory* t = nullptr;
  REQUIRE(ceit_cooling_run(steps, 2, 0.2, 2.0, 4.0, 6, 0, 2, 4, &t) == CEIT_OK);
  CHECK(ceit_trajectory_samples(t) == 9);
  CHECK(ceit_trajectory_states(t) == 12);
  CHECK(std::string(ceit_trajectory_label(t, 7)) == "e_1");
  const double* row = nullptr;
  CHECK(ceit_trajectory_populations(t, 0, &row) == CEIT_OK);
  CHECK(row[2] == 1.0);
  CHECK(ceit_trajectory_populations(t, 99, &row) == CEIT_ERR_INVALID_ARGUMENT);
  ceit_trajectory_destroy(t);

  const ceit_pulse_step bad[] = {{9, 1.0}};
  CHECK(ceit_cooling_run(bad, 1, 0.2, 2.0, 4.0, 6, 0, 2, 4, &t) == CEIT_ERR_INVALID_ARGUMENT);
  CHECK(ceit_cooling_run(steps, 2, 0.2, 2.0, 4.0, 6, 0, 6, 4, &t) == CEIT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("heating slope") {
  Params h;
  ceit_heating out{};
  CHECK(ceit_heating_rate(h.p, &out) == CEIT_OK);
  CHECK(out.factor == doctest::Approx(2.0).epsilon(1e-3));
}
