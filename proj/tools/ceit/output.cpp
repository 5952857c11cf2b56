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

#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace ceit_cli {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    text_ += (i ? "," : "") + header[i];
  }
  text_ += '\n';
}

CsvTable& CsvTable::cell(const std::string& value) {
  if (pending_ == columns_) throw std::logic_error("csv row overflow");
  text_ += (pending_ ? "," : "") + value;
  ++pending_;
  return *this;
}

CsvTable& CsvTable::cell(double value) { return cell(format_double(value)); }

CsvTable& CsvTable::cell(int value) { return cell(std::to_string(value)); }

void CsvTable::end_row() {
  if (pending_ != columns_) throw std::logic_error("csv row has missing cells");
  text_ += '\n';
  pending_ = 0;
}

std::string CsvTable::str() const { return text_; }

void OutputSet::add(const std::string& name, std::string content) {
  files_.emplace_back(name, std::move(content));
}

void OutputSet::add_json(const std::string& name, const nlohmann::json& document) {
  add(name, document.dump(2) + "\n");
}

void OutputSet::commit() const {
  const fs::path dir(directory_);
  fs::create_directories(dir);
  const std::string suffix = ".partial-" + std::to_string(::getpid());
  std::vector<fs::path> staged;
  try {
    for (const auto& [name, content] : files_) {
      const fs::path tmp = dir / (name + suffix);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      staged.push_back(tmp);
    }
  } catch (...) {
    for (const auto& p : staged) fs::remove(p);
    throw;
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    fs::rename(staged[i], dir / files_[i].first);
  }
}

CsvData read_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error(file + ": cannot open");
  CsvData data;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(file + ": empty file");
  std::stringstream head(line);
  for (std::string name; std::getline(head, name, ',');) data.header.push_back(name);
  data.columns.resize(data.header.size());
  for (int row = 2; std::getline(in, line); ++row) {
    if (line.empty()) continue;
    std::stringstream cells(line);
    std::size_t col = 0;
    for (std::string cell; std::getline(cells, cell, ','); ++col) {
      if (col >= data.columns.size()) {
        throw std::runtime_error(file + ":" + std::to_string(row) + ": too many cells");
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0') {
        throw std::runtime_error(file + ":" + std::to_string(row) + ": bad number '" + cell + "'");
      }
      data.columns[col].push_back(v);
    }
    if (col != data.columns.size()) {
      throw std::runtime_error(file + ":" + std::to_string(row) + ": expected " +
                               std::to_string(data.columns.size()) + " cells");
    }
  }
  return data;
}

}  // namespace ceit_cli
