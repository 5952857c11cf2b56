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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numbers>

#include "cavityeit/cavityeit.h"
#include "config.hpp"
#include "output.hpp"

namespace ceit_cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kRealParams[] = {"kappa",    "g",       "omega_c", "gamma_eg",
                                       "gamma_eu", "gamma_b", "n_th",    "eta",
                                       "epsilon",  "delta_p", "omega_sec"};

int exit_code_for(ceit_status status) {
  switch (status) {
    case CEIT_ERR_INVALID_ARGUMENT: return kExitConfig;
    case CEIT_ERR_OUT_OF_RANGE: return kExitOutOfRange;
    default: return kExitSolver;
  }
}

void check(ceit_status status, const std::string& context) {
  if (status == CEIT_OK) return;
  throw CommandError(exit_code_for(status),
                     context + ": " + ceit_status_name(status) + ": " + ceit_last_error());
}

struct ParamsDeleter {
  void operator()(ceit_params* p) const { ceit_params_destroy(p); }
};
struct SpectrumDeleter {
  void operator()(ceit_spectrum* s) const { ceit_spectrum_destroy(s); }
};
struct CalibrationDeleter {
  void operator()(ceit_calibration* c) const { ceit_calibration_destroy(c); }
};
struct TrajectoryDeleter {
  void operator()(ceit_trajectory* t) const { ceit_trajectory_destroy(t); }
};
using Params = std::unique_ptr<ceit_params, ParamsDeleter>;
using SpectrumPtr = std::unique_ptr<ceit_spectrum, SpectrumDeleter>;
using CalibrationPtr = std::unique_ptr<ceit_calibration, CalibrationDeleter>;
using TrajectoryPtr = std::unique_ptr<ceit_trajectory, TrajectoryDeleter>;

double get(const ceit_params* p, const char* name) {
  double v = 0.0;
  check(ceit_params_get(p, name, &v), name);
  return v;
}

int get_int(const ceit_params* p, const char* name) {
  int v = 0;
  check(ceit_params_get_int(p, name, &v), name);
  return v;
}

json params_json(const ceit_params* p) {
  json out = json::object();
  for (const char* name : kRealParams) out[name] = get(p, name);
  out["n_ions"] = get_int(p, "n_ions");
  out["dims"] = {{"n_atom", get_int(p, "n_atom")},
                 {"n_photon", get_int(p, "n_photon")},
                 {"n_phonon", get_int(p, "n_phonon")}};
  return out;
}

// params.{kappa, g, ...} and params.dims.{n_photon, n_phonon}. Without an
// explicit phonon cutoff the thermal-scan rule for params.n_th applies.
Params read_params(Section& root) {
  Section s = root.child("params");
  ceit_params* raw = nullptr;
  check(ceit_params_create(&raw), "params");
  Params p(raw);
  for (const char* name : kRealParams) {
    if (auto v = s.optional_number(name)) check(ceit_params_set(p.get(), name, *v), s.path());
  }
  if (auto n = s.optional_integer("n_ions")) check(ceit_params_set_int(p.get(), "n_ions", *n), s.path());
  Section dims = s.child("dims");
  const auto photon = dims.optional_integer("n_photon");
  const auto phonon = dims.optional_integer("n_phonon");
  dims.finish();
  s.finish();
  if (photon) check(ceit_params_set_int(p.get(), "n_photon", *photon), dims.path());
  if (phonon) check(ceit_params_set_int(p.get(), "n_phonon", *phonon), dims.path());
  if (ceit_params_validate(p.get()) != CEIT_OK) s.fail("", ceit_last_error());
  if (!phonon) check(ceit_params_set_bath_occupancy(p.get(), get(p.get(), "n_th")), s.path());
  return p;
}

ceit_sweep_options read_options(Section& root) {
  ceit_sweep_options opts;
  ceit_sweep_options_init(&opts);
  opts.model = root.choice("model", "thermal", {"thermal", "non_thermal"}) == "thermal"
                   ? CEIT_MODEL_THERMAL
                   : CEIT_MODEL_NON_THERMAL;
  opts.solver = root.choice("solver", "weak_probe", {"weak_probe", "full"}) == "weak_probe"
                    ? CEIT_SOLVER_WEAK_PROBE
                    : CEIT_SOLVER_FULL;
  opts.threads = root.integer("threads", 0);
  if (opts.threads < 0) root.fail("threads", "must be >= 0");
  return opts;
}

json options_json(const ceit_sweep_options& opts) {
  return {{"model", opts.model == CEIT_MODEL_THERMAL ? "thermal" : "non_thermal"},
          {"solver", opts.solver == CEIT_SOLVER_WEAK_PROBE ? "weak_probe" : "full"}};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

void require_increasing(Section& s, const std::string& key, const std::vector<double>& v) {
  if (v.empty()) s.fail(key, "must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) s.fail(key, "must be strictly increasing");
  }
}

// grid: {values: [...]} | {min, max, points} | {points} (default span).
std::vector<double> read_grid(Section& root, const ceit_params* p, int model) {
  Section g = root.child("grid");
  std::vector<double> out;
  if (g.has("values")) {
    if (g.has("min") || g.has("max") || g.has("points")) g.fail("values", "cannot be combined with min/max/points");
    out = g.numbers("values");
  } else {
    const int points = g.integer("points", 401);
    if (points < 2) g.fail("points", "must be >= 2");
    const auto lo = g.optional_number("min");
    const auto hi = g.optional_number("max");
    if (lo.has_value() != hi.has_value()) g.fail(lo ? "max" : "min", "min and max go together");
    if (lo) {
      if (!(*hi > *lo)) g.fail("max", "must exceed min");
      out = linspace(*lo, *hi, points);
    } else {
      out.resize(points);
      check(ceit_default_grid(p, model, points, out.data()), "grid");
    }
  }
  g.finish();
  require_increasing(g, "values", out);
  return out;
}

// temperatures: {values: [...]} | {min, max, per_decade}, kelvin.
std::vector<double> read_temperatures(Section& root, const std::string& key, double t_min,
                                      double t_max) {
  Section s = root.child(key);
  std::vector<double> out;
  if (s.has("values")) {
    if (s.has("min") || s.has("max") || s.has("per_decade")) s.fail("values", "cannot be combined with min/max/per_decade");
    out = s.numbers("values");
  } else {
    const double lo = s.number("min", t_min);
    const double hi = s.number("max", t_max);
    const int per_decade = s.integer("per_decade", 24);
    std::size_t count = 0;
    check(ceit_log_temperature_grid(lo, hi, per_decade, nullptr, 0, &count), s.path());
    out.resize(count);
    check(ceit_log_temperature_grid(lo, hi, per_decade, out.data(), count, &count), s.path());
  }
  s.finish();
  require_increasing(s, "values", out);
  return out;
}

json fit_json(const ceit_lorentzian& fit) {
  return {{"fwhm_mhz", fit.fwhm},           {"center_mhz", fit.center},
          {"amplitude", fit.amplitude},     {"offset", fit.offset},
          {"rms_residual", fit.rms_residual}, {"window_mhz", {fit.window_lo, fit.window_hi}},
          {"samples", fit.samples}};
}

json base_meta(const Invocation& inv, const json& config) {
  return {{"command", inv.command}, {"version", ceit_version()}, {"config", config}};
}

std::string output_dir(const Invocation& inv, Section& root) {
  const std::string configured = root.string("output_dir", "");
  const std::string dir = inv.output_dir.empty() ? configured : inv.output_dir;
  if (dir.empty()) root.fail("output_dir", "required (or pass --output)");
  return dir;
}

SpectrumPtr make_spectrum(ceit_status status, ceit_spectrum* raw) {
  SpectrumPtr s(raw);
  check(status, "spectrum");
  return s;
}

void write_spectrum(const Invocation& inv, const json& config, Section& root, bool analytic) {
  const std::string dir = output_dir(inv, root);
  Params p = read_params(root);
  ceit_sweep_options opts;
  ceit_sweep_options_init(&opts);
  bool convergence = false;
  double tolerance = 1e-3;
  if (!analytic) {
    opts = read_options(root);
    convergence = root.boolean("convergence_check", false);
    tolerance = root.number("convergence_tolerance", 1e-3);
    if (!(tolerance > 0.0)) root.fail("convergence_tolerance", "must be positive");
  } else {
    opts.model = CEIT_MODEL_NON_THERMAL;
  }
  const auto grid = read_grid(root, p.get(), opts.model);
  root.finish();

  ceit_spectrum* raw = nullptr;
  const ceit_status status = analytic
                                 ? ceit_spectrum_analytic(p.get(), grid.data(), grid.size(), &raw)
                                 : ceit_spectrum_sweep(p.get(), grid.data(), grid.size(), &opts, &raw);
  SpectrumPtr spectrum = make_spectrum(status, raw);
  const double *x = nullptr, *y = nullptr, *yn = nullptr;
  check(ceit_spectrum_data(spectrum.get(), &x, &y, &yn), "spectrum");

  CsvTable table({"detuning_mhz", "transmission_raw", "transmission_normalized"});
  for (std::size_t i = 0; i < grid.size(); ++i) table.cell(x[i]).cell(y[i]).cell(yn[i]).end_row();

  json meta = base_meta(inv, config);
  meta["params"] = params_json(p.get());
  if (!analytic) meta["options"] = options_json(opts);
  meta["grid"] = {{"points", grid.size()}, {"min_mhz", grid.front()}, {"max_mhz", grid.back()}};
  meta["cutoffs"] = {{"n_photon", get_int(p.get(), "n_photon")},
                     {"n_phonon", get_int(p.get(), "n_phonon")}};
  const double eps = get(p.get(), "epsilon");
  const double kappa = get(p.get(), "kappa");
  meta["normalization"] = {{"empty_cavity_reference", eps * eps / kappa},
                           {"normalized", "transmission_raw / empty_cavity_reference"},
                           {"linewidth_reference_mhz", 2.0 * kappa}};
  ceit_lorentzian fit{};
  if (ceit_spectrum_linewidth(spectrum.get(), &fit) == CEIT_OK) {
    meta["fit"] = fit_json(fit);
    meta["fit"]["fwhm_ratio"] = fit.fwhm / (2.0 * kappa);
  } else {
    meta["fit"] = {{"error", ceit_last_error()}};
  }
  if (convergence) {
    ceit_convergence c{};
    check(ceit_linewidth_convergence(p.get(), &opts, tolerance, &c), "convergence check");
    meta["convergence"] = {{"quantity", "fwhm_mhz"},
                           {"base_cutoffs", {c.base_photon, c.base_phonon}},
                           {"doubled_cutoffs", {c.doubled_photon, c.doubled_phonon}},
                           {"base_value", c.base_value},
                           {"doubled_value", c.doubled_value},
                           {"relative_change", c.relative_change},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed != 0}};
  } else {
    meta["convergence"] = nullptr;
  }

  OutputSet out(dir);
  out.add("spectrum.csv", table.str());
  out.add_json("meta.json", meta);
  out.commit();
  if (meta["fit"].contains("fwhm_mhz")) {
    std::printf("fwhm_mhz %s\n", format_double(fit.fwhm).c_str());
  }
}

json calibration_meta(const ceit_calibration* curve) {
  const std::size_t n = ceit_calibration_size(curve);
  std::size_t begin = 0, end = 0;
  check(ceit_calibration_monotone_range(curve, &begin, &end), "calibration");
  const double *t = nullptr, *w = nullptr;
  check(ceit_calibration_data(curve, &t, nullptr, nullptr, &w), "calibration");
  const int* cutoffs = nullptr;
  check(ceit_calibration_cutoffs(curve, &cutoffs), "calibration");
  json errors = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string e = ceit_calibration_error(curve, i);
    if (!e.empty()) errors.push_back({{"index", i}, {"temperature_k", t[i]}, {"error", e}});
  }
  json monotone = {{"begin", begin}, {"end", end}};
  if (end > begin) {
    monotone["temperature_k"] = {t[begin], t[end - 1]};
    monotone["fwhm_mhz"] = {w[begin], w[end - 1]};
  }
  return {{"points", n},
          {"monotone_range", monotone},
          {"phonon_cutoffs", std::vector<int>(cutoffs, cutoffs + n)},
          {"failed_points", errors}};
}

void append_calibration(CsvTable& table, const ceit_calibration* curve, int n_ions) {
  const double *t = nullptr, *nth = nullptr, *nbar = nullptr, *w = nullptr;
  check(ceit_calibration_data(curve, &t, &nth, &nbar, &w), "calibration");
  for (std::size_t i = 0; i < ceit_calibration_size(curve); ++i) {
    if (n_ions > 0) table.cell(n_ions);
    table.cell(t[i]).cell(nth[i]).cell(nbar[i]).cell(w[i]).end_row();
  }
}

CalibrationPtr build_curve(const ceit_params* p, const std::vector<double>& temps,
                           const ceit_sweep_options& opts) {
  ceit_calibration* raw = nullptr;
  const ceit_status status = ceit_calibration_build(p, temps.data(), temps.size(), &opts, &raw);
  CalibrationPtr curve(raw);
  check(status, "calibration");
  return curve;
}

void cmd_calibrate(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  Params p = read_params(root);
  const auto opts = read_options(root);
  const auto temps = read_temperatures(root, "temperatures", 1e-5, 1e-2);
  root.finish();
  CalibrationPtr curve = build_curve(p.get(), temps, opts);

  CsvTable table({"temperature_k", "n_th", "nbar_steady", "fwhm_mhz"});
  append_calibration(table, curve.get(), 0);
  json meta = base_meta(inv, config);
  meta["params"] = params_json(p.get());
  meta["options"] = options_json(opts);
  meta["calibration"] = calibration_meta(curve.get());
  meta["normalization"] = {{"linewidth_reference_mhz", 2.0 * get(p.get(), "kappa")}};

  OutputSet out(dir);
  out.add("calibration.csv", table.str());
  out.add_json("meta.json", meta);
  out.commit();
}

void cmd_invert(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  std::string source = root.string("calibration", "");
  if (source.empty()) root.fail("calibration", "required: directory written by 'calibrate'");
  const auto measured = root.optional_number("measured_fwhm");
  if (!measured) root.fail("measured_fwhm", "required");
  root.finish();

  fs::path base(source);
  if (fs::is_directory(base)) base /= "calibration.csv";
  const fs::path meta_path = base.parent_path() / "meta.json";
  CsvData data;
  json source_meta;
  try {
    data = read_csv(base.string());
    source_meta = load_config(meta_path.string());
  } catch (const std::exception& ex) {
    root.fail("calibration", ex.what());
  }
  const std::vector<std::string> expected{"temperature_k", "n_th", "nbar_steady", "fwhm_mhz"};
  if (data.header != expected) root.fail("calibration", base.string() + ": unexpected header");
  if (!source_meta.contains("params")) root.fail("calibration", meta_path.string() + ": no params");
  json params_doc = {{"params", source_meta["params"]}};
  json& dims = params_doc["params"]["dims"];
  if (dims.is_object()) dims.erase("n_atom");
  if (dims.is_null()) params_doc["params"].erase("dims");
  Section params_root(params_doc, "calibration.params");
  Params p = read_params(params_root);
  params_root.finish();

  ceit_calibration* raw = nullptr;
  const ceit_status status = ceit_calibration_from_table(
      p.get(), data.columns[0].data(), data.columns[3].data(), data.columns[2].data(),
      data.columns[0].size(), &raw);
  CalibrationPtr curve(raw);
  check(status, "calibration");
  ceit_inversion r{};
  check(ceit_calibration_invert(curve.get(), *measured, &r), "inversion");

  json result = {{"measured_fwhm_mhz", *measured},
                 {"temperature_k", r.temperature},
                 {"nbar", r.nbar},
                 {"sensitivity_k_per_mhz", r.sensitivity},
                 {"flags", {{"low_sensitivity", r.low_sensitivity != 0}}},
                 {"calibrated_fwhm_mhz", {r.fwhm_lo, r.fwhm_hi}}};
  json meta = base_meta(inv, config);
  meta["params"] = params_json(p.get());
  meta["calibration_source"] = base.string();
  meta["calibration"] = calibration_meta(curve.get());

  OutputSet out(dir);
  out.add_json("inversion.json", result);
  out.add_json("meta.json", meta);
  out.commit();
  std::cout << result.dump(2) << "\n";
}

void cmd_map2d(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  Params p = read_params(root);
  const auto opts = read_options(root);
  const auto g = root.numbers("g");
  const auto omega_c = root.numbers("omega_c");
  const auto n_th = root.has("n_th") ? root.numbers("n_th") : std::vector<double>{get(p.get(), "n_th")};
  root.finish();
  if (g.empty() || omega_c.empty() || n_th.empty()) root.fail("", "g, omega_c and n_th need at least one value");

  std::vector<ceit_map_cell> cells(g.size() * omega_c.size() * n_th.size());
  check(ceit_linewidth_map(p.get(), g.data(), g.size(), omega_c.data(), omega_c.size(), n_th.data(),
                           n_th.size(), &opts, cells.data()),
        "map2d");
  CsvTable table({"g_mhz", "omega_c_mhz", "n_th", "fwhm_mhz", "fwhm_ratio"});
  json failed = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& c = cells[k];
    table.cell(c.g).cell(c.omega_c).cell(c.n_th).cell(c.fwhm).cell(c.ratio).end_row();
    if (!c.ok) failed.push_back({{"row", k}, {"g_mhz", c.g}, {"omega_c_mhz", c.omega_c}, {"n_th", c.n_th}});
  }
  json meta = base_meta(inv, config);
  meta["params"] = params_json(p.get());
  meta["options"] = options_json(opts);
  meta["order"] = "n_th outer, then g, then omega_c";
  meta["normalization"] = {{"fwhm_ratio", "fwhm_mhz / (2 kappa)"},
                           {"linewidth_reference_mhz", 2.0 * get(p.get(), "kappa")}};
  meta["failed_cells"] = failed;

  OutputSet out(dir);
  out.add("map2d.csv", table.str());
  out.add_json("meta.json", meta);
  out.commit();
}

void cmd_multiion(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  Params p = read_params(root);
  const auto opts = read_options(root);
  const auto ions = root.has("n_ions") ? root.integers("n_ions") : std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const bool calibrate = root.has("temperatures");
  std::vector<double> temps;
  if (calibrate) temps = read_temperatures(root, "temperatures", 1e-4, 2e-3);
  root.finish();
  if (ions.empty()) root.fail("n_ions", "must not be empty");

  std::vector<ceit_multiion_point> points(ions.size());
  check(ceit_multiion_scan(p.get(), ions.data(), ions.size(), &opts, points.data()), "multiion");
  CsvTable table({"n_ions", "g_eff_mhz", "fwhm_mhz", "fwhm_ratio"});
  for (const auto& pt : points) table.cell(pt.n_ions).cell(pt.g_eff).cell(pt.fwhm).cell(pt.fwhm_ratio).end_row();

  json meta = base_meta(inv, config);
  meta["params"] = params_json(p.get());
  meta["options"] = options_json(opts);
  meta["normalization"] = {{"fwhm_ratio", "fwhm_mhz / (2 kappa)"}};
  OutputSet out(dir);
  out.add("multiion.csv", table.str());
  if (calibrate) {
    CsvTable cal({"n_ions", "temperature_k", "n_th", "nbar_steady", "fwhm_mhz"});
    json curves = json::array();
    for (int n : ions) {
      Params q;
      {
        ceit_params* raw = nullptr;
        check(ceit_params_copy(p.get(), &raw), "params");
        q.reset(raw);
      }
      check(ceit_params_set_int(q.get(), "n_ions", n), "params.n_ions");
      CalibrationPtr curve = build_curve(q.get(), temps, opts);
      append_calibration(cal, curve.get(), n);
      json c = calibration_meta(curve.get());
      c["n_ions"] = n;
      curves.push_back(c);
    }
    out.add("multiion_calibration.csv", cal.str());
    meta["calibrations"] = curves;
  }
  out.add_json("meta.json", meta);
  out.commit();
}

void cmd_compare(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  Params p = read_params(root);
  auto opts = read_options(root);
  const auto omega_c = root.numbers("omega_c");
  const auto temps = root.numbers("temperatures");
  root.finish();
  if (omega_c.empty()) root.fail("omega_c", "must not be empty");

  const std::size_t nt = temps.size();
  std::vector<double> analytic(omega_c.size()), nonthermal(omega_c.size()),
      thermal(omega_c.size() * nt), nth(nt);
  check(ceit_compare_thermal(p.get(), omega_c.data(), omega_c.size(), temps.data(), nt, &opts,
                             analytic.data(), nonthermal.data(), thermal.data(), nth.data()),
        "compare");
  const double nan = std::nan("");
  CsvTable table({"omega_c_mhz", "model", "temperature_k", "n_th", "fwhm_mhz"});
  for (std::size_t r = 0; r < omega_c.size(); ++r) {
    table.cell(omega_c[r]).cell(std::string("analytic")).cell(nan).cell(nan).cell(analytic[r]).end_row();
    table.cell(omega_c[r]).cell(std::string("non_thermal")).cell(nan).cell(nan).cell(nonthermal[r]).end_row();
    for (std::size_t t = 0; t < nt; ++t) {
      table.cell(omega_c[r]).cell(std::string("thermal")).cell(temps[t]).cell(nth[t]).cell(thermal[r * nt + t]).end_row();
    }
  }
  json meta = base_meta(inv, config);
  meta["params"] = params_json(p.get());
  meta["options"] = options_json(opts);
  meta["note"] = "non_thermal rows use a single phonon level; nan marks a failed fit";

  OutputSet out(dir);
  out.add("compare.csv", table.str());
  out.add_json("meta.json", meta);
  out.commit();
}

std::vector<double> read_times(Section& root, double default_max) {
  Section s = root.child("times");
  std::vector<double> out;
  if (s.has("values")) {
    if (s.has("max") || s.has("samples")) s.fail("values", "cannot be combined with max/samples");
    out = s.numbers("values");
  } else {
    const double t_max = s.number("max", default_max);
    const int samples = s.integer("samples", 401);
    if (!(t_max > 0.0)) s.fail("max", "must be positive");
    if (samples < 2) s.fail("samples", "must be >= 2");
    out = linspace(0.0, t_max, samples);
  }
  s.finish();
  if (out.empty()) s.fail("values", "must not be empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) s.fail("values", "must be strictly increasing");
  }
  return out;
}

void cmd_rabi(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  const double eta = root.number("eta", 0.202);
  const double omega = root.number("omega", std::numbers::pi);
  const double gamma = root.number("gamma", 0.02);
  const int n0 = root.integer("n0", 0);
  const int n_phonon = root.integer("n_phonon", 0);
  const bool fit = root.boolean("fit", true);
  if (n0 < 0) root.fail("n0", "must be >= 0");
  if (!(eta > 0.0) || !(omega > 0.0)) root.fail("", "eta and omega must be positive");
  const double rabi = eta * omega * std::sqrt(n0 + 1.0);
  const auto times = read_times(root, 4.0 * std::numbers::pi / rabi);
  root.finish();

  std::vector<double> pe(times.size());
  check(ceit_bsb_rabi_trace(eta, omega, gamma, n0, times.data(), times.size(), n_phonon, pe.data()),
        "rabi");
  CsvTable table({"time_us", "p_e"});
  for (std::size_t i = 0; i < times.size(); ++i) table.cell(times[i]).cell(pe[i]).end_row();
  json meta = base_meta(inv, config);
  meta["resolved"] = {{"eta", eta}, {"omega", omega}, {"gamma", gamma}, {"n0", n0},
                      {"n_phonon", n_phonon > 0 ? n_phonon : n0 + 12}};
  meta["expected_rabi_frequency"] = rabi;
  if (fit) {
    ceit_rabi_fit f{};
    check(ceit_fit_rabi(times.data(), pe.data(), times.size(), &f), "rabi fit");
    meta["fit"] = {{"rabi_frequency", f.rabi_frequency}, {"decay", f.decay}, {"amplitude", f.amplitude},
                   {"offset", f.offset}, {"rms_residual", f.rms_residual},
                   {"relative_error", f.rabi_frequency / rabi - 1.0}};
  }
  OutputSet out(dir);
  out.add("sideband_trace.csv", table.str());
  out.add_json("meta.json", meta);
  out.commit();
}

void cmd_ratio(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  const auto etas = root.has("eta") ? root.numbers("eta") : std::vector<double>{0.05};
  const auto ns = root.has("n") ? root.integers("n") : std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8};
  const double omega = root.number("omega", 2.0);
  const double gamma = root.number("gamma", 0.0);
  const double pulse_time = root.number("pulse_time", 0.0);
  const int n_phonon = root.integer("n_phonon", 0);
  root.finish();
  if (etas.empty() || ns.empty()) root.fail("", "eta and n need at least one value");

  CsvTable table({"eta", "n", "pulse_time_us", "p_rsb", "p_bsb", "ratio", "expected", "p_rsb_avg",
                  "p_bsb_avg", "ratio_avg"});
  json deviations = json::array();
  for (double eta : etas) {
    double worst = 0.0;
    for (int n : ns) {
      ceit_sideband_ratio r{};
      check(ceit_sideband_ratio_run(n, eta, omega, gamma, pulse_time, n_phonon, &r), "ratio");
      table.cell(eta).cell(r.n).cell(r.pulse_time).cell(r.p_rsb).cell(r.p_bsb).cell(r.ratio)
          .cell(r.expected).cell(r.p_rsb_avg).cell(r.p_bsb_avg).cell(r.ratio_avg).end_row();
      worst = std::max(worst, std::abs(r.ratio / r.expected - 1.0));
    }
    deviations.push_back({{"eta", eta}, {"max_relative_deviation", worst}});
  }
  json meta = base_meta(inv, config);
  meta["resolved"] = {{"omega", omega}, {"gamma", gamma}, {"pulse_time", pulse_time},
                      {"n_phonon", n_phonon}};
  meta["deviation"] = deviations;
  OutputSet out(dir);
  out.add("sideband_ratio.csv", table.str());
  out.add_json("meta.json", meta);
  out.commit();
}

void cmd_cool(const Invocation& inv, const json& config, Section& root) {
  const std::string dir = output_dir(inv, root);
  const double eta = root.number("eta", 0.2);
  const double omega = root.number("omega", 2.0);
  const double gamma = root.number("gamma", 4.0);
  const int n_phonon = root.integer("n_phonon", 12);
  const int samples = root.integer("samples_per_step", 8);
  const int cycles = root.integer("cycles", 1);
  if (cycles < 1) root.fail("cycles", "must be >= 1");
  Section initial = root.child("initial");
  const int level = initial.choice("level", "u", {"u", "e"}) == "u" ? 0 : 1;
  const int phonon = initial.integer("phonon", 5);
  initial.finish();

  std::vector<ceit_pulse_step> block;
  if (root.has("sequence")) {
    for (auto& step : root.children("sequence")) {
      const std::string kind = step.choice("pulse", "rsb", {"bsb", "rsb", "wait"});
      const auto duration = step.optional_number("duration");
      if (!duration) step.fail("duration", "required");
      const int repeat = step.integer("repeat", 1);
      if (repeat < 1) step.fail("repeat", "must be >= 1");
      step.finish();
      const int k = kind == "bsb" ? CEIT_PULSE_BSB : kind == "rsb" ? CEIT_PULSE_RSB : CEIT_PULSE_WAIT;
      for (int r = 0; r < repeat; ++r) block.push_back({k, *duration});
    }
  } else {
    block = {{CEIT_PULSE_RSB, 3.0}, {CEIT_PULSE_WAIT, 0.5}};
  }
  root.finish();
  if (block.empty()) root.fail("sequence", "must not be empty");
  std::vector<ceit_pulse_step> steps;
  for (int c = 0; c < cycles; ++c) steps.insert(steps.end(), block.begin(), block.end());

  ceit_trajectory* raw = nullptr;
  const ceit_status status = ceit_cooling_run(steps.data(), steps.size(), eta, omega, gamma, n_phonon,
                                              level, phonon, samples, &raw);
  TrajectoryPtr traj(raw);
  check(status, "cooling");

  const std::size_t n_samples = ceit_trajectory_samples(traj.get());
  const std::size_t n_states = ceit_trajectory_states(traj.get());
  std::vector<std::string> header{"time_us"};
  for (std::size_t s = 0; s < n_states; ++s) header.emplace_back(ceit_trajectory_label(traj.get(), s));
  CsvTable trace(header);
  CsvTable summary({"time_us", "step", "mean_phonon", "excited_population"});
  const double *t = nullptr, *nbar = nullptr, *pe = nullptr;
  const int* step = nullptr;
  check(ceit_trajectory_series(traj.get(), &t, &nbar, &pe, &step), "cooling");
  double ground = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double* row = nullptr;
    check(ceit_trajectory_populations(traj.get(), i, &row), "cooling");
    trace.cell(t[i]);
    for (std::size_t s = 0; s < n_states; ++s) trace.cell(row[s]);
    trace.end_row();
    summary.cell(t[i]).cell(step[i]).cell(nbar[i]).cell(pe[i]).end_row();
    ground = row[0];  // u_0 leads the basis order
  }
  json meta = base_meta(inv, config);
  meta["resolved"] = {{"eta", eta},     {"omega", omega},   {"gamma", gamma},
                      {"n_phonon", n_phonon}, {"cycles", cycles}, {"steps", steps.size()},
                      {"initial", {{"level", level == 0 ? "u" : "e"}, {"phonon", phonon}}}};
  meta["final"] = {{"time_us", t[n_samples - 1]},
                   {"ground_motional_population", ground},
                   {"mean_phonon", nbar[n_samples - 1]}};
  OutputSet out(dir);
  out.add("sideband_trace.csv", trace.str());
  out.add("sideband_summary.csv", summary.str());
  out.add_json("meta.json", meta);
  out.commit();
}

}  // namespace

void run(const Invocation& inv) {
  const json config = load_config(inv.config);
  Section root(config, "");
  if (inv.command == "spectrum") return write_spectrum(inv, config, root, false);
  if (inv.command == "analytic") return write_spectrum(inv, config, root, true);
  if (inv.command == "calibrate") return cmd_calibrate(inv, config, root);
  if (inv.command == "invert") return cmd_invert(inv, config, root);
  if (inv.command == "map2d") return cmd_map2d(inv, config, root);
  if (inv.command == "multiion") return cmd_multiion(inv, config, root);
  if (inv.command == "compare") return cmd_compare(inv, config, root);
  if (inv.command == "sideband rabi") return cmd_rabi(inv, config, root);
  if (inv.command == "sideband ratio") return cmd_ratio(inv, config, root);
  if (inv.command == "sideband cool") return cmd_cool(inv, config, root);
  throw CommandError(kExitConfig, "unknown command '" + inv.command + "'");
}

}  // namespace ceit_cli
