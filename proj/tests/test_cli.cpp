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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("ceit_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(CEIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

const char* kSmallSpectrum = R"({
  "params": {"n_th": 0.5, "dims": {"n_photon": 2, "n_phonon": 6}},
  "grid": {"min": -2.0, "max": 2.0, "points": 81},
  "threads": 1
})";

}  // namespace

TEST_CASE("spectrum writes csv and meta") {
  Scratch s;
  const auto cfg = s.write("spectrum.json", kSmallSpectrum);
  REQUIRE(run("spectrum " + cfg.string() + " -o " + (s.dir / "out").string()) == 0);
  CHECK(first_line(s.dir / "out" / "spectrum.csv") == "detuning_mhz,transmission_raw,transmission_normalized");
  const auto meta = nlohmann::json::parse(slurp(s.dir / "out" / "meta.json"));
  CHECK(meta["params"]["dims"]["n_phonon"] == 6);
  CHECK(meta["normalization"]["empty_cavity_reference"].get<double>() == doctest::Approx(0.001));
  CHECK(meta["fit"]["fwhm_mhz"].get<double>() > 0.0);
  CHECK(meta["version"].is_string());
  // second line: 17 significant digits, lowercase exponent
  std::ifstream in(s.dir / "out" / "spectrum.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.substr(0, line.find(',')) == "-2.0000000000000000e+00");
}

TEST_CASE("identical runs are byte-identical") {
  Scratch s;
  const auto cfg = s.write("spectrum.json", kSmallSpectrum);
  REQUIRE(run("spectrum " + cfg.string() + " -o " + (s.dir / "a").string()) == 0);
  REQUIRE(run("spectrum " + cfg.string() + " -o " + (s.dir / "b").string()) == 0);
  CHECK(slurp(s.dir / "a" / "spectrum.csv") == slurp(s.dir / "b" / "spectrum.csv"));
  CHECK(slurp(s.dir / "a" / "meta.json") == slurp(s.dir / "b" / "meta.json"));
}

TEST_CASE("config errors exit 2 and leave nothing behind") {
  Scratch s;
  const auto out = (s.dir / "out").string();
  CHECK(run("spectrum " + s.write("a.json", R"({"params": {"kapa": 1}})").string() + " -o " + out) == 2);
  CHECK(run("spectrum " + s.write("b.json", R"({"params": {"kappa": "x"}})").string() + " -o " + out) == 2);
  CHECK(run("spectrum " + s.write("c.json", R"({"params": )").string() + " -o " + out) == 2);
  CHECK(run("spectrum " + s.write("d.json", R"({"grid": {"values": [1, 0]}})").string() + " -o " + out) == 2);
  CHECK(run("spectrum " + s.write("e.json", R"({"params": {}})").string()) == 2);
  CHECK(run("sideband cool " + s.write("f.json", R"({"sequence": [{"pulse": "zap", "duration": 1}]})").string() + " -o " + out) == 2);
  CHECK(run("nonsense") == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("invert: success and out-of-range exit code") {
  Scratch s;
  const fs::path cal = s.dir / "cal";
  fs::create_directories(cal);
  std::ofstream(cal / "calibration.csv") << "temperature_k,n_th,nbar_steady,fwhm_mhz\n"
                                         << "1e-4,0.1,0.1,0.20\n2e-4,0.2,0.2,0.30\n3e-4,0.3,0.3,0.40\n"
                                         << "4e-4,0.4,0.4,0.50\n5e-4,0.5,0.5,0.60\n";
  std::ofstream(cal / "meta.json") << R"({"params": {"kappa": 0.4, "omega_sec": 10.0}})";
  const auto ok = s.write("inv.json", R"({"calibration": ")" + cal.string() + R"(", "measured_fwhm": 0.35})");
  REQUIRE(run("invert " + ok.string() + " -o " + (s.dir / "inv").string()) == 0);
  const auto result = nlohmann::json::parse(slurp(s.dir / "inv" / "inversion.json"));
  CHECK(result["temperature_k"].get<double>() == doctest::Approx(2.5e-4));
  CHECK(result["flags"]["low_sensitivity"] == false);
  const auto far = s.write("far.json", R"({"calibration": ")" + cal.string() + R"(", "measured_fwhm": 0.9})");
  CHECK(run("invert " + far.string() + " -o " + (s.dir / "far").string()) == 4);
  CHECK_FALSE(fs::exists(s.dir / "far"));
}

TEST_CASE("map2d, sideband and analytic headers") {
  Scratch s;
  const auto map = s.write("map.json", R"({
    "params": {"dims": {"n_photon": 2, "n_phonon": 8}},
    "g": [1.2], "omega_c": [1.0], "n_th": [0.5], "threads": 1})");
  REQUIRE(run("map2d " + map.string() + " -o " + (s.dir / "map").string()) == 0);
  CHECK(first_line(s.dir / "map" / "map2d.csv") == "g_mhz,omega_c_mhz,n_th,fwhm_mhz,fwhm_ratio");

  const auto rabi = s.write("rabi.json", R"({"times": {"max": 10.0, "samples": 101}, "n_phonon": 4})");
  REQUIRE(run("sideband rabi " + rabi.string() + " -o " + (s.dir / "rabi").string()) == 0);
  CHECK(first_line(s.dir / "rabi" / "sideband_trace.csv") == "time_us,p_e");

  const auto cool = s.write("cool.json", R"({"n_phonon": 3, "initial": {"phonon": 1}, "cycles": 2})");
  REQUIRE(run("sideband cool " + cool.string() + " -o " + (s.dir / "cool").string()) == 0);
  CHECK(first_line(s.dir / "cool" / "sideband_trace.csv") == "time_us,u_0,u_1,u_2,e_0,e_1,e_2");

  const auto an = s.write("an.json", R"({"grid": {"points": 51}})");
  REQUIRE(run("analytic " + an.string() + " -o " + (s.dir / "an").string()) == 0);
  CHECK(first_line(s.dir / "an" / "spectrum.csv") == "detuning_mhz,transmission_raw,transmission_normalized");
}

TEST_CASE("bundled empty-cavity config") {
  Scratch s;
  const std::string empty = std::string(CEIT_CONFIG_DIR) + "/empty_cavity.json";
  REQUIRE(run("spectrum " + empty + " -o " + (s.dir / "empty").string()) == 0);
  const auto meta = nlohmann::json::parse(slurp(s.dir / "empty" / "meta.json"));
  CHECK(meta["fit"]["fwhm_mhz"].get<double>() == doctest::Approx(0.8).epsilon(1e-6));
  // a spectrum config is not a sideband config
  CHECK(run("sideband ratio " + empty + " -o " + (s.dir / "x").string()) == 2);
}
