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

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ceit_cli {

// Lowercase scientific notation with 17 significant digits; "nan" otherwise.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& cell(double value);
  CsvTable& cell(int value);
  CsvTable& cell(const std::string& value);
  void end_row();

  std::string str() const;

 private:
  std::size_t columns_;
  std::size_t pending_ = 0;
  std::string text_;
};

// Files collected in memory and published together. Nothing touches the
// output directory before commit().
class OutputSet {
 public:
  explicit OutputSet(std::string directory) : directory_(std::move(directory)) {}

  void add(const std::string& name, std::string content);
  void add_json(const std::string& name, const nlohmann::json& document);
  void commit() const;

  const std::string& directory() const { return directory_; }

 private:
  std::string directory_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

// Numeric CSV with a header line; "nan" cells are accepted.
CsvData read_csv(const std::string& file);

}  // namespace ceit_cli
