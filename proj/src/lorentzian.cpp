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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "cavityeit/errors.hpp"
#include "cavityeit/spectrum.hpp"

namespace ceit {

namespace {

constexpr int kMinWindowSamples = 8;

// Parameters: (A, Δ₀, w, c).
struct LorentzianResidual : Eigen::DenseFunctor<double> {
  LorentzianResidual(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(x.size())), x_(x), y_(y) {}

  int operator()(const Eigen::VectorXd& q, Eigen::VectorXd& f) const {
    const double hw2 = 0.25 * q(2) * q(2);
    for (Eigen::Index k = 0; k < x_.size(); ++k) {
      const double u = x_(k) - q(1);
      f(k) = q(0) * hw2 / (u * u + hw2) + q(3) - y_(k);
    }
    return 0;
  }

  int df(const Eigen::VectorXd& q, Eigen::MatrixXd& jac) const {
    const double hw2 = 0.25 * q(2) * q(2);
    for (Eigen::Index k = 0; k < x_.size(); ++k) {
      const double u = x_(k) - q(1);
      const double den = u * u + hw2;
      jac(k, 0) = hw2 / den;
      jac(k, 1) = q(0) * hw2 * 2.0 * u / (den * den);
      jac(k, 2) = q(0) * 0.5 * q(2) * u * u / (den * den);
      jac(k, 3) = 1.0;
    }
    return 0;
  }

  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
};

// Width between the outermost half-maximum crossings around `peak`.
double half_max_width(const std::vector<double>& x, const std::vector<double>& y, std::size_t peak,
                      double floor) {
  const double half = floor + 0.5 * (y[peak] - floor);
  auto crossing = [&](std::size_t from, std::size_t to) {
    const double t = (half - y[from]) / (y[to] - y[from]);
    return x[from] + t * (x[to] - x[from]);
  };
  double left = x.front();
  for (std::size_t k = peak; k > 0; --k) {
    if (y[k - 1] <= half) {
      left = crossing(k - 1, k);
      break;
    }
  }
  double right = x.back();
  for (std::size_t k = peak; k + 1 < x.size(); ++k) {
    if (y[k + 1] <= half) {
      right = crossing(k, k + 1);
      break;
    }
  }
  return right - left;
}

// Extremum position refined by the parabola through the three samples
// around interior index k; edge samples are returned as is.
double vertex(std::span<const double> x, std::span<const double> y, std::size_t k) {
  if (k == 0 || k + 1 >= x.size()) return x[k];
  const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
  const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0) return x1;
  const double v = x1 - 0.5 * num / den;
  return std::clamp(v, x0, x2);
}

}  // namespace

LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y, double lo,
                             double hi) {
  if (x.size() != y.size()) throw DimensionMismatch("fit needs equally long x and y");
  if (!(lo < hi)) throw InvalidArgument("fit window must satisfy lo < hi");

  std::vector<double> wx;
  std::vector<double> wy;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] >= lo && x[k] <= hi) {
      wx.push_back(x[k]);
      wy.push_back(y[k]);
    }
  }
  const int n = static_cast<int>(wx.size());
  if (n < kMinWindowSamples) {
    throw FitError("fit window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] holds " +
                   std::to_string(n) + " samples, need at least " +
                   std::to_string(kMinWindowSamples));
  }
  int maxima = 0;
  for (int k = 1; k + 1 < n; ++k) {
    if (wy[k] > wy[k - 1] && wy[k] >= wy[k + 1]) ++maxima;
  }
  if (maxima > 1) {
    throw FitError("fit window holds " + std::to_string(maxima) + " local maxima");
  }

  // Argmax with ties resolved towards the smallest |Δ|.
  std::size_t peak = 0;
  for (std::size_t k = 1; k < wx.size(); ++k) {
    if (wy[k] > wy[peak] || (wy[k] == wy[peak] && std::abs(wx[k]) < std::abs(wx[peak]))) peak = k;
  }
  const double floor = *std::min_element(wy.begin(), wy.end());
  double width = half_max_width(wx, wy, peak, floor);
  if (!(width > 0.0)) width = 0.5 * (wx.back() - wx.front());

  Eigen::VectorXd q(4);
  q << wy[peak] - floor, wx[peak], width, floor;
  LorentzianResidual residual(Eigen::Map<const Eigen::VectorXd>(wx.data(), n),
                              Eigen::Map<const Eigen::VectorXd>(wy.data(), n));
  Eigen::LevenbergMarquardt<LorentzianResidual> lm(residual);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(q);
  using Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      status == Status::UserAsked || !q.allFinite()) {
    throw FitError("Lorentzian fit did not converge (status " +
                   std::to_string(static_cast<int>(status)) + ")");
  }

  Eigen::VectorXd f(n);
  Eigen::MatrixXd jac(n, 4);
  residual(q, f);
  residual.df(q, jac);
  const Eigen::Map<const Eigen::VectorXd> ydata(wy.data(), n);
  const double gradient = (jac.transpose() * f).norm();
  const double scale = jac.norm() * std::max(ydata.norm(), std::numeric_limits<double>::min());
  if (gradient > 1e-10 * scale) {
    throw FitError("Lorentzian fit stalled with relative gradient " +
                   std::to_string(gradient / scale));
  }

  LorentzianFit fit;
  fit.amplitude = q(0);
  fit.center = q(1);
  fit.fwhm = std::abs(q(2));
  fit.offset = q(3);
  fit.rms_residual = std::sqrt(f.squaredNorm() / n);
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.samples = n;
  if (!(fit.fwhm > 0.0) || fit.center < lo || fit.center > hi) {
    throw FitError("Lorentzian fit left the window (center " + std::to_string(fit.center) +
                   ", fwhm " + std::to_string(fit.fwhm) + ")");
  }
  return fit;
}

LorentzianFit fit_lorentzian(const Spectrum& s, double lo, double hi) {
  s.validate();
  return fit_lorentzian(s.detunings, s.normalized, lo, hi);
}

Window central_window(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("window search needs equally long x and y");
  const std::size_t n = x.size();
  if (n < 3) throw FitError("spectrum too short to locate a central peak");

  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(x[i]) < std::abs(x[k])) k = i;
  }
  const bool left_higher = k > 0 && y[k - 1] > y[k];
  const bool right_higher = k + 1 < n && y[k + 1] > y[k];
  if (left_higher && right_higher) {
    throw NoCentralPeak("transmission at detuning " + std::to_string(x[k]) +
                        " is a local minimum: no central transparency peak");
  }
  while (k > 0 && y[k - 1] > y[k]) --k;
  while (k + 1 < n && y[k + 1] > y[k]) ++k;
  const std::size_t peak = k;

  std::size_t left = peak;
  while (left > 0 && y[left - 1] <= y[left]) --left;
  std::size_t right = peak;
  while (right + 1 < n && y[right + 1] <= y[right]) ++right;

  const double center = vertex(x, y, peak);
  Window w;
  w.lo = center - 0.9 * (center - vertex(x, y, left));
  w.hi = center + 0.9 * (vertex(x, y, right) - center);
  return w;
}

LorentzianFit measure_linewidth(const Spectrum& s) {
  s.validate();
  const Window w = central_window(s.detunings, s.normalized);
  return fit_lorentzian(s.detunings, s.normalized, w.lo, w.hi);
}

}  // namespace ceit
