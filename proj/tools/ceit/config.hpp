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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ceit_cli {

using nlohmann::json;

// Raised for anything wrong with the run configuration. The message starts
// with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Read-once view of one JSON object. Every key must be consumed by a typed
// accessor before finish(); leftovers are reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path);

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;

  double number(const std::string& key, double fallback);
  std::optional<double> optional_number(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::optional<int> optional_integer(const std::string& key);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, const std::string& fallback);
  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed);

  std::vector<double> numbers(const std::string& key);
  std::vector<int> integers(const std::string& key);

  // Missing key yields an empty section.
  Section child(const std::string& key);
  std::vector<Section> children(const std::string& key);

  void finish() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const json& require(const std::string& key, bool (json::*check)() const noexcept,
                      const char* expected);
  std::string field(const std::string& key) const;

  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Parses the whole file; syntax errors become ConfigError.
json load_config(const std::string& file);

}  // namespace ceit_cli
