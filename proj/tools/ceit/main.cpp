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

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "cavityeit/cavityeit.h"
#include "commands.hpp"
#include "config.hpp"

namespace {

void add_run(CLI::App& parent, const std::string& name, const std::string& description,
             const std::string& command, ceit_cli::Invocation& inv) {
  CLI::App* sub = parent.add_subcommand(name, description);
  sub->add_option("config", inv.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--output", inv.output_dir, "output directory (overrides output_dir)");
  sub->callback([&inv, command] { inv.command = command; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavity-EIT thermometry simulator"};
  app.set_version_flag("--version", std::string(ceit_version()));
  app.require_subcommand(1);
  ceit_cli::Invocation inv;
  add_run(app, "spectrum", "steady-state transmission sweep", "spectrum", inv);
  add_run(app, "analytic", "closed-form transmission", "analytic", inv);
  add_run(app, "calibrate", "linewidth vs temperature calibration curve", "calibrate", inv);
  add_run(app, "invert", "measured linewidth to temperature", "invert", inv);
  add_run(app, "map2d", "linewidth over g x omega_c x n_th", "map2d", inv);
  add_run(app, "multiion", "linewidth vs ion number", "multiion", inv);
  add_run(app, "compare", "thermal vs non-thermal linewidths", "compare", inv);
  CLI::App* sideband = app.add_subcommand("sideband", "sideband physics");
  sideband->require_subcommand(1);
  add_run(*sideband, "rabi", "blue-sideband Rabi flopping", "sideband rabi", inv);
  add_run(*sideband, "ratio", "red/blue sideband excitation ratio", "sideband ratio", inv);
  add_run(*sideband, "cool", "pulsed sideband cooling sequence", "sideband cool", inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ceit_cli::kExitConfig;
  }

  try {
    ceit_cli::run(inv);
  } catch (const ceit_cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return ceit_cli::kExitConfig;
  } catch (const ceit_cli::CommandError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ceit_cli::kExitSolver;
  }
  return 0;
}
