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
#include <numbers>
#include <vector>

#include "cavityeit/errors.hpp"
#include "cavityeit/sideband.hpp"
#include "doctest.h"

using namespace ceit;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

double sin2(double x) { return std::sin(x) * std::sin(x); }

}  // namespace

TEST_SUITE("sideband") {
  TEST_CASE("undamped blue sideband flops at eta Omega sqrt(n+1)") {
    const double eta = 0.1, omega = 2.0;
    const auto times = linspace(0.0, 20.0, 81);
    for (int n0 : {0, 3}) {
      const auto pe = bsb_rabi_trace(eta, omega, 0.0, n0, times);
      for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(pe[k] - sin2(eta * omega * std::sqrt(n0 + 1.0) * times[k])) < 1e-7);
      }
    }
  }

  TEST_CASE("undamped sideband ratio against two-level formulas") {
    const double eta = 0.3, omega = 2.0;
    const double tau = std::numbers::pi / (2.0 * omega);
    for (int n : {1, 4}) {
      const auto r = sideband_ratio(n, eta, omega, 0.0);
      CHECK(r.pulse_time == doctest::Approx(tau));
      CHECK(r.p_rsb == doctest::Approx(sin2(eta * omega * std::sqrt(n) * tau)).epsilon(1e-7));
      CHECK(r.p_bsb == doctest::Approx(sin2(eta * omega * std::sqrt(n + 1.0) * tau)).epsilon(1e-7));
      CHECK(r.expected == doctest::Approx(n / (n + 1.0)));
    }
    CHECK_THROWS_AS(sideband_ratio(5, eta, omega, 0.0, 0.0, 6), InvalidArgument);
  }

  TEST_CASE("red sideband leaves the motional ground state dark") {
    PulseSequence seq;
    seq.steps = {{PulseKind::rsb, 5.0}};
    seq.n_phonon = 4;
    const auto dims = sideband_dims(4);
    const auto traj = run_cooling_sequence(seq, DensityMatrix::basis_state(dims, dims.index(0, 0, 0)));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      CHECK(traj.ground_motional_population(k) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("cooling trajectory bookkeeping") {
    PulseSequence seq;
    seq.steps = {{PulseKind::rsb, 1.0}, {PulseKind::wait, 0.5}, {PulseKind::rsb, 1.0}};
    seq.n_phonon = 6;
    const auto dims = sideband_dims(6);
    const auto traj = run_cooling_sequence(seq, DensityMatrix::basis_state(dims, dims.index(0, 0, 3)), 4);
    REQUIRE(traj.times.size() == 13);
    CHECK(traj.step_index.front() == -1);
    CHECK(traj.step_index.back() == 2);
    CHECK(traj.times.back() == doctest::Approx(2.5));
    CHECK(traj.mean_phonon.front() == doctest::Approx(3.0));
    const auto labels = traj.labels();
    CHECK(labels.front() == "u_0");
    CHECK(labels.back() == "e_5");
    for (const auto& row : traj.populations) {
      double sum = 0.0;
      for (double v : row) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(traj.mean_phonon.back() < 3.0);
  }

  TEST_CASE("sequence validation") {
    PulseSequence seq;
    seq.steps = {{PulseKind::rsb, -1.0}};
    CHECK_THROWS_AS(seq.validate(), InvalidArgument);
    seq.steps = {{PulseKind::rsb, 1.0}};
    seq.eta = 1.0;
    CHECK_THROWS_AS(seq.validate(), InvalidArgument);
    seq.eta = 0.2;
    CHECK(seq.total_duration() == 1.0);
  }

  TEST_CASE("damped Rabi fit recovers synthetic parameters") {
    const auto t = linspace(0.0, 30.0, 600);
    std::vector<double> y;
    for (double v : t) y.push_back(0.5 - 0.45 * std::exp(-0.03 * v) * std::cos(2.0 * 0.61 * v));
    const auto fit = fit_rabi_oscillation(t, y);
    CHECK(fit.rabi_frequency == doctest::Approx(0.61).epsilon(1e-8));
    CHECK(fit.decay == doctest::Approx(0.03).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(0.45).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(0.5).epsilon(1e-6));
  }
}
