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
#include <vector>

#include "cavityeit/errors.hpp"
#include "cavityeit/spectrum.hpp"
#include "doctest.h"

using namespace ceit;

namespace {

double lorentzian(double x, double center, double fwhm, double amplitude, double offset) {
  const double u = 2.0 * (x - center) / fwhm;
  return offset + amplitude / (1.0 + u * u);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

SystemParams empty_cavity() {
  SystemParams p;
  p.g = 0.0;
  p.omega_c = 0.0;
  p.n_th = 0.0;
  p.dims = {3, 2, 2};
  return p;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("exact Lorentzian data is recovered") {
    const auto x = linspace(-2.0, 2.0, 201);
    std::vector<double> y;
    for (double v : x) y.push_back(lorentzian(v, 0.07, 0.43, 1.3, 0.2));
    const auto fit = fit_lorentzian(x, y, -1.0, 1.0);
    CHECK(fit.center == doctest::Approx(0.07).epsilon(1e-9));
    CHECK(fit.fwhm == doctest::Approx(0.43).epsilon(1e-9));
    CHECK(fit.amplitude == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(fit.offset == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(fit.rms_residual < 1e-10);
    CHECK(fit.samples == 101);
  }

  TEST_CASE("central window stops at the flanking minima") {
    // central peak between two dips and two outer maxima
    const auto x = linspace(-3.0, 3.0, 601);
    std::vector<double> y;
    for (double v : x) {
      y.push_back(lorentzian(v, 0.0, 0.5, 1.0, 0.0) + lorentzian(v, -1.6, 0.4, 0.8, 0.0) +
                  lorentzian(v, 1.6, 0.4, 0.8, 0.0));
    }
    const Window w = central_window(x, y);
    CHECK(w.lo == doctest::Approx(-w.hi).epsilon(1e-9));
    CHECK(w.hi > 0.5);
    CHECK(w.hi < 1.6 * 0.9);
    const auto fit = fit_lorentzian(x, y, w.lo, w.hi);
    CHECK(std::abs(fit.center) < 1e-9);
    CHECK(fit.fwhm == doctest::Approx(0.5).epsilon(0.1));
  }

  TEST_CASE("a dip at the origin has no central peak") {
    const auto x = linspace(-3.0, 3.0, 301);
    std::vector<double> y;
    for (double v : x) y.push_back(1.0 - lorentzian(v, 0.0, 0.5, 0.8, 0.0));
    CHECK_THROWS_AS(central_window(x, y), NoCentralPeak);
  }

  TEST_CASE("fit input checks") {
    const auto x = linspace(-1.0, 1.0, 21);
    std::vector<double> y;
    for (double v : x) y.push_back(lorentzian(v, 0.0, 0.3, 1.0, 0.0));
    CHECK_THROWS_AS(fit_lorentzian(x, y, -0.1, 0.1), FitError);
    std::vector<double> bad(y.begin(), y.end() - 1);
    CHECK_THROWS_AS(fit_lorentzian(x, bad, -1.0, 1.0), InvalidArgument);
  }

  TEST_CASE("empty cavity transmits a Lorentzian of width 2 kappa") {
    const SystemParams p = empty_cavity();
    const auto grid = linspace(-2.0, 2.0, 201);
    const auto s = sweep_spectrum(p, grid);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = grid[i];
      CHECK(s.normalized[i] == doctest::Approx(p.kappa * p.kappa / (d * d + p.kappa * p.kappa)).epsilon(1e-10));
      CHECK(s.transmission[i] == doctest::Approx(s.normalized[i] * empty_cavity_reference(p)).epsilon(1e-14));
    }
    CHECK(measure_linewidth(s).fwhm == doctest::Approx(2.0 * p.kappa).epsilon(1e-6));
  }

  TEST_CASE("closed form at the two-photon resonance") {
    SystemParams p;
    CHECK(analytic_transmission(p, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    p.omega_c = 0.0;
    const double gamma = p.gamma_eg + p.gamma_eu;
    const double coop = p.kappa + p.g * p.g / gamma;
    CHECK(analytic_transmission(p, 0.0) == doctest::Approx(p.kappa * p.kappa / (coop * coop)).epsilon(1e-14));
  }

  TEST_CASE("default detuning grid") {
    SystemParams p;
    const auto grid = default_detuning_grid(p, HamiltonianKind::thermal, 401);
    REQUIRE(grid.size() == 401);
    CHECK(grid[200] == 0.0);
    const double span = 2.5 * std::hypot(p.g, p.omega_c);
    CHECK(grid.front() == doctest::Approx(-span));
    CHECK(grid.back() == doctest::Approx(span));
    for (int i = 0; i < 401; ++i) CHECK(grid[i] == doctest::Approx(-grid[400 - i]).epsilon(1e-12));
    const auto fallback = default_detuning_grid(empty_cavity(), HamiltonianKind::thermal, 11);
    CHECK(fallback.back() == doctest::Approx(5.0 * 0.4));
  }

  TEST_CASE("sweep results do not depend on the thread count") {
    SystemParams p;
    p.dims = {3, 2, 8};
    const auto grid = linspace(-2.0, 2.0, 41);
    SweepOptions one;
    one.threads = 1;
    SweepOptions many;
    many.threads = 4;
    const auto a = sweep_spectrum(p, grid, one);
    const auto b = sweep_spectrum(p, grid, many);
    CHECK(a.transmission == b.transmission);
  }

  TEST_CASE("sweep rejects an unordered grid") {
    const std::vector<double> grid{0.0, 0.5, 0.2};
    CHECK_THROWS_AS(sweep_spectrum(SystemParams{}, grid), InvalidArgument);
  }

  TEST_CASE("linewidth map order, ratio and failed cells") {
    SystemParams p;
    const std::vector<double> g{1.0, 1.2};
    const std::vector<double> oc{0.8, 1.0};
    const std::vector<double> nth{0.0001, 1.0};
    SweepOptions opts;
    opts.threads = 1;
    const auto cells = linewidth_map_2d(p, g, oc, nth, opts);
    REQUIRE(cells.size() == 8);
    CHECK(cells[1].n_th == 0.0001);
    CHECK(cells[1].g == 1.0);
    CHECK(cells[1].omega_c == 1.0);
    CHECK(cells[6].n_th == 1.0);
    CHECK(cells[6].g == 1.2);
    CHECK(cells[6].omega_c == 0.8);
    for (int k = 0; k < 4; ++k) {
      CHECK_FALSE(cells[k].ok());
      CHECK(std::isnan(cells[k].fwhm));
    }
    for (int k = 4; k < 8; ++k) {
      REQUIRE(cells[k].ok());
      CHECK(cells[k].ratio == doctest::Approx(cells[k].fwhm / (2.0 * p.kappa)));
    }
    SystemParams q = with_bath_occupancy(p, 1.0);
    q.g = 1.2;
    q.omega_c = 1.0;
    CHECK(cells[7].fwhm == doctest::Approx(eit_linewidth(q, opts)).epsilon(1e-12));
  }
}
