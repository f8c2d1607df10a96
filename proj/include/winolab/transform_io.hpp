// Copyright 2026 The winolab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// TransformSet persistence.
//
// JSON: {"n_h", "n_o", "mu", "moduli": [...], "G": [[...]], "B": [[...]], "A": [[...]]}
// with "num/den" string entries, in the A^T (G H G^T .* B^T X B) A
// orientation: G is mu x n_h, B is n_x x mu, A is mu x n_o.
// CSV: G.csv, B.csv, A.csv in the same orientation, entries lowered to fp64.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "winolab/matrix.hpp"
#include "winolab/polynomial.hpp"
#include "winolab/transform_set.hpp"

namespace winolab {

inline nlohmann::json matrix_to_json(const RationalMatrix& m) {
  auto j = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    j.push_back(std::move(row));
  }
  return j;
}

inline RationalMatrix matrix_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) throw std::invalid_argument(name + ": expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  RationalMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw std::invalid_argument(name + ": ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<Rational>();
  }
  return m;
}

inline nlohmann::json transform_set_to_json(const TransformSet& ts) {
  nlohmann::json j;
  j["n_h"] = ts.n_h;
  j["n_o"] = ts.n_o;
  j["mu"] = ts.mu;
  j["moduli"] = ts.moduli;
  j["G"] = matrix_to_json(ts.kernel_transform);
  j["B"] = matrix_to_json(ts.input_transform.transpose());
  j["A"] = matrix_to_json(ts.output_transform.transpose());
  return j;
}

inline TransformSet transform_set_from_json(const nlohmann::json& j) {
  TransformSet ts;
  ts.n_h = j.at("n_h").get<std::size_t>();
  ts.n_o = j.at("n_o").get<std::size_t>();
  ts.mu = j.at("mu").get<std::size_t>();
  if (j.contains("moduli")) ts.moduli = j["moduli"].get<std::vector<std::string>>();
  ts.kernel_transform = matrix_from_json(j.at("G"), "G");
  ts.input_transform = matrix_from_json(j.at("B"), "B").transpose();
  ts.output_transform = matrix_from_json(j.at("A"), "A").transpose();
  ts.check_shapes();
  return ts;
}

/// %.17g: round-trips every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const std::filesystem::path& file, const Matrix<double>& m) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
    out << "\n";
  }
}

inline Matrix<double> read_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        data.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      ++n;
    }
    if (rows == 0) cols = n;
    if (n != cols)
      throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                               " columns, got " + std::to_string(n));
    ++rows;
  }
  return Matrix<double>(rows, cols, std::move(data));
}

inline void write_transform_set_json(const std::filesystem::path& file, const TransformSet& ts) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << transform_set_to_json(ts).dump(2) << "\n";
}

inline void write_transform_set_csv(const std::filesystem::path& dir, const TransformSet& ts) {
  write_csv(dir / "G.csv", to_double(ts.kernel_transform));
  write_csv(dir / "B.csv", to_double(ts.input_transform.transpose()));
  write_csv(dir / "A.csv", to_double(ts.output_transform.transpose()));
}

/// True when load_transform_set(dir) would read the exact JSON form.
inline bool has_exact_transforms(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path json_file = fs::is_directory(dir) ? dir / "transforms.json" : dir;
  return fs::exists(json_file) && !fs::is_directory(json_file);
}

/// Loads transforms.json from `dir` (exact), else G/B/A.csv (exact binary
/// values of the fp64 entries). `dir` may also name the JSON file directly.
inline TransformSet load_transform_set(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (has_exact_transforms(dir)) {
    const fs::path json_file = fs::is_directory(dir) ? dir / "transforms.json" : dir;
    std::ifstream in(json_file);
    return transform_set_from_json(nlohmann::json::parse(in));
  }
  auto lift = [](const Matrix<double>& m) { return m.map([](double v) { return Rational::from_double(v); }); };
  const auto G = lift(read_csv(dir / "G.csv"));
  const auto B = lift(read_csv(dir / "B.csv"));
  const auto A = lift(read_csv(dir / "A.csv"));
  TransformSet ts;
  ts.n_h = G.cols();
  ts.n_o = A.cols();
  ts.mu = G.rows();
  ts.kernel_transform = G;
  ts.input_transform = B.transpose();
  ts.output_transform = A.transpose();
  ts.check_shapes();
  return ts;
}

}  // namespace winolab
