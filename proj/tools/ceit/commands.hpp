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

#pragma once

#include <stdexcept>
#include <string>

namespace ceit_cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3, kExitOutOfRange = 4 };

// A failed library call, already mapped onto a process exit code.
class CommandError : public std::runtime_error {
 public:
  CommandError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

struct Invocation {
  std::string command;     // spectrum, analytic, ..., "sideband rabi"
  std::string config;      // path to the JSON document
  std::string output_dir;  // overrides the config's output_dir when set
};

// Runs one command and publishes its files. Throws ConfigError or
// CommandError; returns normally only after a successful commit.
void run(const Invocation& inv);

}  // namespace ceit_cli
