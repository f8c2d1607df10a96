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

// JSON algorithm configuration files.
//
//   {
//     "n_h": 3, "n_o": 2,
//     "moduli": ["0", {"quadratic": ["1", "0", "1"]}, "inf"],
//     "sub_points": ["0", "-1", "inf"],
//     "mode": "fp32", "trials": 100, "seed": 1
//   }
//
// A modulus is a root literal ("0", "-1/2"), "inf", {"linear": "p"},
// {"infinity": true}, or {"quadratic": [c0, c1, c2]} with coefficients
// constant term first and an optional per-modulus "sub_points". Instead of
// "moduli", {"n_quadratic": k} selects the standard family config.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "winolab/precision.hpp"
#include "winolab/winograd.hpp"

namespace winolab {

/// Parse failure addressed by JSON field path or by line:column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigFile {
  std::string id;
  AlgorithmConfig config;
  std::optional<NumberMode> mode;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::string at(const std::string& path, const std::string& field) {
  return path.empty() ? field : path + "." + field;
}

template <typename F>
auto field_guard(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline std::size_t get_count(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline Rational get_rational(const nlohmann::json& j, const std::string& where) {
  return field_guard(where, [&] { return j.get<Rational>(); });
}

inline PointSet get_points(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of points");
  PointSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (j[i].is_string())
      out.push_back(field_guard(w, [&] { return RootPoint::parse(j[i].get<std::string>()); }));
    else
      out.emplace_back(get_rational(j[i], w));
  }
  return out;
}

inline Modulus get_modulus(const nlohmann::json& j, const std::string& where, const PointSet& default_sub) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "\xE2\x88\x9E") return Modulus::infinity();
    return Modulus::linear(get_rational(j, where));
  }
  if (j.is_number_integer()) return Modulus::linear(get_rational(j, where));
  if (!j.is_object()) throw ParseError(where + ": expected a root literal, \"inf\" or an object");
  if (j.contains("linear")) return Modulus::linear(get_rational(j["linear"], at(where, "linear")));
  if (j.contains("infinity")) return Modulus::infinity();
  if (j.contains("quadratic") || j.contains("poly")) {
    const char* key = j.contains("quadratic") ? "quadratic" : "poly";
    const auto& c = j[key];
    const std::string w = at(where, key);
    if (!c.is_array() || c.empty()) throw ParseError(w + ": expected coefficients, constant term first");
    std::vector<Rational> coeffs;
    for (std::size_t i = 0; i < c.size(); ++i) coeffs.push_back(get_rational(c[i], w + "[" + std::to_string(i) + "]"));
    Polynomial p(std::move(coeffs));
    if (p.is_zero()) throw ParseError(w + ": zero polynomial");
    PointSet sub = j.contains("sub_points") ? get_points(j["sub_points"], at(where, "sub_points")) : default_sub;
    return Modulus::superlinear(p, std::move(sub));
  }
  throw ParseError(where + ": unknown modulus object (expected linear, quadratic or infinity)");
}

}  // namespace detail

inline ConfigFile parse_config(const nlohmann::json& j, const std::string& path = "") {
  if (!j.is_object()) throw ParseError((path.empty() ? "config" : path) + ": expected an object");
  ConfigFile out;
  if (j.contains("id")) out.id = j["id"].get<std::string>();
  auto& cfg = out.config;
  if (!j.contains("n_h")) throw ParseError(detail::at(path, "n_h") + ": required");
  if (!j.contains("n_o")) throw ParseError(detail::at(path, "n_o") + ": required");
  cfg.n_h = detail::get_count(j["n_h"], detail::at(path, "n_h"));
  cfg.n_o = detail::get_count(j["n_o"], detail::at(path, "n_o"));

  PointSet default_sub;
  if (j.contains("sub_points")) default_sub = detail::get_points(j["sub_points"], detail::at(path, "sub_points"));

  if (j.contains("moduli")) {
    const auto& mods = j["moduli"];
    const std::string w = detail::at(path, "moduli");
    if (!mods.is_array()) throw ParseError(w + ": expected an array");
    for (std::size_t i = 0; i < mods.size(); ++i)
      cfg.moduli.push_back(detail::get_modulus(mods[i], w + "[" + std::to_string(i) + "]", default_sub));
    if (j.value("infinity", false) && !cfg.has_infinity()) cfg.moduli.push_back(Modulus::infinity());
  } else if (j.contains("n_quadratic")) {
    const std::string w = detail::at(path, "n_quadratic");
    const std::size_t q = detail::get_count(j["n_quadratic"], w);
    const auto& cand = candidate_quadratics();
    if (q > cand.size()) throw ParseError(w + ": at most " + std::to_string(cand.size()) + " quadratics");
    cfg = detail::field_guard(w, [&] {
      return make_config(cfg.n_h, cfg.n_o, std::vector<Polynomial>(cand.begin(), cand.begin() + static_cast<long>(q)),
                         default_sub);
    });
  } else {
    throw ParseError(detail::at(path, "moduli") + ": required (or n_quadratic)");
  }

  if (j.contains("mode"))
    out.mode = detail::field_guard(detail::at(path, "mode"), [&] { return parse_number_mode(j["mode"].get<std::string>()); });
  if (j.contains("trials")) out.trials = detail::get_count(j["trials"], detail::at(path, "trials"));
  if (j.contains("seed")) out.seed = detail::get_count(j["seed"], detail::at(path, "seed"));
  return out;
}

/// Reads a JSON document; // and /* */ comments are allowed. Syntax errors
/// are reported as file:line:column.
inline nlohmann::json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline ConfigFile load_config_file(const std::string& file) {
  const auto j = read_json_file(file);
  try {
    return parse_config(j);
  } catch (const ParseError& e) {
    throw ParseError(file + ": " + e.what());
  }
}

/// Inverse of parse_config for the algorithm part.
inline nlohmann::json config_to_json(const AlgorithmConfig& cfg) {
  nlohmann::json j;
  j["n_h"] = cfg.n_h;
  j["n_o"] = cfg.n_o;
  j["moduli"] = nlohmann::json::array();
  for (const auto& m : cfg.moduli) {
    if (m.is_infinity()) {
      j["moduli"].push_back("inf");
    } else if (m.is_linear()) {
      j["moduli"].push_back(m.root().to_string());
    } else {
      nlohmann::json q;
      q["quadratic"] = m.polynomial();
      q["sub_points"] = nlohmann::json::array();
      for (const auto& p : m.sub_points()) q["sub_points"].push_back(p.to_string());
      j["moduli"].push_back(q);
    }
  }
  return j;
}

}  // namespace winolab
