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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ceit_cli {

namespace {
const json& empty_object() {
  static const json value = json::object();
  return value;
}
}  // namespace

Section::Section(const json& node, std::string path) : node_(&node), path_(std::move(path)) {
  if (!node.is_object()) throw ConfigError(field("") + ": expected an object");
}

std::string Section::field(const std::string& key) const {
  if (key.empty()) return path_.empty() ? "<root>" : path_;
  return path_.empty() ? key : path_ + "." + key;
}

void Section::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(field(key) + ": " + message);
}

bool Section::has(const std::string& key) const { return node_->contains(key); }

const json& Section::require(const std::string& key, bool (json::*check)() const noexcept,
                             const char* expected) {
  seen_.insert(key);
  const json& value = node_->at(key);
  if (!(value.*check)()) fail(key, std::string("expected ") + expected);
  return value;
}

std::optional<double> Section::optional_number(const std::string& key) {
  if (!has(key)) return std::nullopt;
  const double v = require(key, &json::is_number, "a number").get<double>();
  if (!std::isfinite(v)) fail(key, "must be finite");
  return v;
}

double Section::number(const std::string& key, double fallback) {
  return optional_number(key).value_or(fallback);
}

std::optional<int> Section::optional_integer(const std::string& key) {
  if (!has(key)) return std::nullopt;
  const json& v = require(key, &json::is_number_integer, "an integer");
  const auto wide = v.get<long long>();
  if (wide < -1000000000LL || wide > 1000000000LL) fail(key, "integer out of range");
  return static_cast<int>(wide);
}

int Section::integer(const std::string& key, int fallback) {
  return optional_integer(key).value_or(fallback);
}

bool Section::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  return require(key, &json::is_boolean, "true or false").get<bool>();
}

std::string Section::string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return require(key, &json::is_string, "a string").get<std::string>();
}

std::string Section::choice(const std::string& key, const std::string& fallback,
                            const std::vector<std::string>& allowed) {
  const std::string value = string(key, fallback);
  for (const auto& a : allowed) {
    if (a == value) return value;
  }
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  fail(key, "'" + value + "' is not one of " + list);
}

std::vector<double> Section::numbers(const std::string& key) {
  const json& arr = require(key, &json::is_array, "an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::vector<int> Section::integers(const std::string& key) {
  const json& arr = require(key, &json::is_array, "an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) fail(key + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(arr[i].get<int>());
  }
  return out;
}

Section Section::child(const std::string& key) {
  if (!has(key)) return Section(empty_object(), field(key));
  return Section(require(key, &json::is_object, "an object"), field(key));
}

std::vector<Section> Section::children(const std::string& key) {
  const json& arr = require(key, &json::is_array, "an array of objects");
  std::vector<Section> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.emplace_back(arr[i], field(key) + "[" + std::to_string(i) + "]");
  }
  return out;
}

void Section::finish() const {
  for (const auto& item : node_->items()) {
    if (!seen_.count(item.key())) fail(item.key(), "unknown key");
  }
}

json load_config(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(file + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& ex) {
    throw ConfigError(file + ": " + ex.what());
  }
}

}  // namespace ceit_cli
