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

#include "cavityeit/sideband.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "cavityeit/errors.hpp"
#include "cavityeit/model.hpp"

namespace ceit {

namespace {

constexpr int kExtraPhonons = 12;
constexpr int kAverageSamples = 257;

void require_sideband_inputs(double eta, double omega, double gamma) {
  if (!std::isfinite(eta) || eta < 0.0 || eta >= 1.0) {
    throw InvalidArgument("eta must satisfy 0 <= eta < 1, got " + std::to_string(eta));
  }
  if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
  if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("gamma must be >= 0");
}

std::vector<Channel> decay_channel(const SpaceDims& dims, double gamma) {
  const OperatorSet ops(dims);
  return {{"decay_eu", ops.sigma(Level::u, Level::e), gamma}};
}

double excited_population(const DensityMatrix& rho) {
  const SpaceDims& dims = rho.dims();
  double total = 0.0;
  for (int n = 0; n < dims.n_phonon; ++n) {
    total += rho.population(dims.index(static_cast<int>(Level::e), 0, n));
  }
  return total;
}

// P_e at τ and averaged over [0, τ] (trapezoid rule).
std::pair<double, double> pulse_response(const Liouvillian& l, const DensityMatrix& rho0,
                                         double tau) {
  std::vector<double> times(kAverageSamples);
  for (int k = 0; k < kAverageSamples; ++k) times[k] = tau * k / (kAverageSamples - 1);
  const auto traj = evolve(l, rho0, times);
  double sum = 0.0;
  for (int k = 0; k < kAverageSamples; ++k) {
    const double w = (k == 0 || k == kAverageSamples - 1) ? 0.5 : 1.0;
    sum += w * excited_population(traj[k]);
  }
  return {excited_population(traj.back()), sum / (kAverageSamples - 1)};
}

// Parameters: (c, A, λ, Ω_R).
struct RabiResidual : Eigen::DenseFunctor<double> {
  RabiResidual(const Eigen::VectorXd& t, const Eigen::VectorXd& y)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(t.size())), t_(t), y_(y) {}

  int operator()(const Eigen::VectorXd& q, Eigen::VectorXd& f) const {
    for (Eigen::Index k = 0; k < t_.size(); ++k) {
      f(k) = q(0) - q(1) * std::exp(-q(2) * t_(k)) * std::cos(2.0 * q(3) * t_(k)) - y_(k);
    }
    return 0;
  }

  int df(const Eigen::VectorXd& q, Eigen::MatrixXd& jac) const {
    for (Eigen::Index k = 0; k < t_.size(); ++k) {
      const double t = t_(k);
      const double e = std::exp(-q(2) * t);
      const double c = std::cos(2.0 * q(3) * t);
      const double s = std::sin(2.0 * q(3) * t);
      jac(k, 0) = 1.0;
      jac(k, 1) = -e * c;
      jac(k, 2) = q(1) * t * e * c;
      jac(k, 3) = q(1) * e * 2.0 * t * s;
    }
    return 0;
  }

  Eigen::VectorXd t_;
  Eigen::VectorXd y_;
};

}  // namespace

void PulseSequence::validate() const {
  require_sideband_inputs(eta, omega, gamma);
  if (n_phonon < 2) throw InvalidArgument("pulse sequence needs n_phonon >= 2");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(steps[k].duration > 0.0) || !std::isfinite(steps[k].duration)) {
      throw InvalidArgument("pulse step " + std::to_string(k) + " needs a finite duration > 0");
    }
  }
}

double PulseSequence::total_duration() const {
  double total = 0.0;
  for (const PulseStep& s : steps) total += s.duration;
  return total;
}

SpaceDims sideband_dims(int n_phonon) {
  SpaceDims dims{2, 1, n_phonon};
  dims.validate();
  return dims;
}

Liouvillian sideband_liouvillian(PulseKind kind, double eta, double omega, double gamma,
                                 int n_phonon) {
  require_sideband_inputs(eta, omega, gamma);
  const SpaceDims dims = sideband_dims(n_phonon);
  const OperatorMatrix h = kind == PulseKind::wait
                               ? OperatorMatrix::zero(dims)
                               : hamiltonian_sideband(
                                     kind == PulseKind::bsb ? Sideband::blue : Sideband::red, eta,
                                     omega, dims);
  return build_liouvillian(h, decay_channel(dims, gamma));
}

std::vector<double> bsb_rabi_trace(double eta, double omega, double gamma, int n0,
                                   std::span<const double> times, int n_phonon) {
  if (n0 < 0) throw InvalidArgument("initial phonon number must be >= 0");
  if (n_phonon <= 0) n_phonon = n0 + kExtraPhonons;
  if (n0 + 1 >= n_phonon) throw InvalidArgument("phonon cutoff too small for the initial state");
  const Liouvillian l = sideband_liouvillian(PulseKind::bsb, eta, omega, gamma, n_phonon);
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(l.dims, l.dims.index(static_cast<int>(Level::u), 0, n0));
  std::vector<double> out;
  for (const DensityMatrix& rho : evolve(l, rho0, times)) out.push_back(excited_population(rho));
  return out;
}

double default_ratio_pulse_time(double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("omega must be > 0 for the default pulse time");
  return std::numbers::pi / (2.0 * omega);
}

SidebandRatio sideband_ratio(int n, double eta, double omega, double gamma, double pulse_time,
                             int n_phonon) {
  if (n < 0) throw InvalidArgument("phonon number must be >= 0");
  if (n_phonon <= 0) n_phonon = n + kExtraPhonons;
  if (n + 1 >= n_phonon) throw InvalidArgument("phonon cutoff too small for the initial state");
  SidebandRatio out;
  out.n = n;
  out.pulse_time = pulse_time > 0.0 ? pulse_time : default_ratio_pulse_time(omega);
  out.expected = static_cast<double>(n) / (n + 1.0);
  const SpaceDims dims = sideband_dims(n_phonon);
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(dims, dims.index(static_cast<int>(Level::u), 0, n));
  const auto red = pulse_response(
      sideband_liouvillian(PulseKind::rsb, eta, omega, gamma, n_phonon), rho0, out.pulse_time);
  const auto blue = pulse_response(
      sideband_liouvillian(PulseKind::bsb, eta, omega, gamma, n_phonon), rho0, out.pulse_time);
  out.p_rsb = red.first;
  out.p_rsb_avg = red.second;
  out.p_bsb = blue.first;
  out.p_bsb_avg = blue.second;
  if (!(out.p_bsb > 0.0) || !(out.p_bsb_avg > 0.0)) {
    throw SolverError("blue sideband population vanished; ratio undefined");
  }
  out.ratio = out.p_rsb / out.p_bsb;
  out.ratio_avg = out.p_rsb_avg / out.p_bsb_avg;
  return out;
}

std::vector<std::string> CoolingTrajectory::labels() const {
  std::vector<std::string> out;
  for (int i = 0; i < dims.total(); ++i) {
    out.push_back(std::string(dims.atom_of(i) == static_cast<int>(Level::u) ? "u_" : "e_") +
                  std::to_string(dims.phonon_of(i)));
  }
  return out;
}

double CoolingTrajectory::ground_motional_population(std::size_t sample) const {
  return populations.at(sample).at(dims.index(static_cast<int>(Level::u), 0, 0));
}

CoolingTrajectory run_cooling_sequence(const PulseSequence& seq, const DensityMatrix& rho0,
                                       int samples_per_step) {
  seq.validate();
  if (samples_per_step < 1) throw InvalidArgument("samples_per_step must be >= 1");
  const SpaceDims dims = sideband_dims(seq.n_phonon);
  if (!(rho0.dims() == dims)) {
    throw DimensionMismatch("initial state does not live on the two-level ⊗ phonon space");
  }
  rho0.validate();

  const OperatorSet ops(dims);
  const OperatorMatrix number = ops.b_dag() * ops.b();
  CoolingTrajectory traj;
  traj.dims = dims;
  auto record = [&](const DensityMatrix& rho, double t, int step) {
    std::vector<double> pops(dims.total());
    for (int i = 0; i < dims.total(); ++i) pops[i] = rho.population(i);
    traj.times.push_back(t);
    traj.step_index.push_back(step);
    traj.populations.push_back(std::move(pops));
    traj.mean_phonon.push_back(expect(number, rho).real());
    traj.excited_population.push_back(excited_population(rho));
  };

  const Liouvillian generators[] = {
      sideband_liouvillian(PulseKind::bsb, seq.eta, seq.omega, seq.gamma, seq.n_phonon),
      sideband_liouvillian(PulseKind::rsb, seq.eta, seq.omega, seq.gamma, seq.n_phonon),
      sideband_liouvillian(PulseKind::wait, seq.eta, seq.omega, seq.gamma, seq.n_phonon)};

  DensityMatrix rho = rho0;
  double clock = 0.0;
  record(rho, clock, -1);
  for (std::size_t k = 0; k < seq.steps.size(); ++k) {
    const PulseStep& step = seq.steps[k];
    std::vector<double> times(samples_per_step + 1);
    for (int j = 0; j <= samples_per_step; ++j) times[j] = step.duration * j / samples_per_step;
    const auto samples = evolve(generators[static_cast<int>(step.kind)], rho, times);
    for (int j = 1; j <= samples_per_step; ++j) {
      record(samples[j], clock + times[j], static_cast<int>(k));
    }
    rho = samples.back();
    clock += step.duration;
  }
  return traj;
}

RabiFit fit_rabi_oscillation(std::span<const double> times, std::span<const double> population) {
  if (times.size() != population.size()) throw DimensionMismatch("times and population differ");
  const auto n = static_cast<Eigen::Index>(times.size());
  if (n < 16) throw FitError("Rabi fit needs at least 16 samples");
  const Eigen::Map<const Eigen::VectorXd> t(times.data(), n);
  const Eigen::Map<const Eigen::VectorXd> y(population.data(), n);
  const double span = t(n - 1) - t(0);
  if (!(span > 0.0)) throw FitError("Rabi fit needs a positive time span");

  // Coarse periodogram for the oscillation frequency 2Ω_R.
  const double mean = y.mean();
  const double nyquist = std::numbers::pi * (n - 1) / span;
  const double resolution = std::numbers::pi / span;
  double best_omega = resolution;
  double best_power = -1.0;
  for (double w = resolution; w <= nyquist; w += 0.05 * resolution) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) acc += (y(k) - mean) * std::polar(1.0, -w * t(k));
    if (std::norm(acc) > best_power) {
      best_power = std::norm(acc);
      best_omega = w;
    }
  }

  Eigen::VectorXd q(4);
  q << mean, 0.5 * (y.maxCoeff() - y.minCoeff()), 0.0, 0.5 * best_omega;
  RabiResidual residual(t, y);
  Eigen::LevenbergMarquardt<RabiResidual> lm(residual);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(q);
  using Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      !q.allFinite()) {
    throw FitError("Rabi fit did not converge (status " + std::to_string(static_cast<int>(status)) +
                   ")");
  }
  Eigen::VectorXd f(n);
  residual(q, f);
  RabiFit fit;
  fit.offset = q(0);
  fit.amplitude = q(1);
  fit.decay = q(2);
  fit.rabi_frequency = std::abs(q(3));
  fit.rms_residual = std::sqrt(f.squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace ceit
