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

// Random-data error experiments.
//
// Each trial draws a kernel and one input tile sized for the largest n_x in
// the spec; every config reads the leading block of that tile, so configs
// are compared on paired samples. The reference is direct correlation in
// fp64 (exact direct correlation when the mode itself is exact).

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "winolab/config_file.hpp"
#include "winolab/convolve.hpp"
#include "winolab/precision.hpp"
#include "winolab/transform_io.hpp"
#include "winolab/winograd.hpp"

#ifndef WINOLAB_VERSION
#define WINOLAB_VERSION "0.1.0-unknown"
#endif

namespace winolab {

struct NamedConfig {
  std::string id;
  AlgorithmConfig config;
};

struct ExperimentSpec {
  int dims = 2;
  std::size_t n_h = 3;
  std::vector<NamedConfig> configs;
  std::size_t trials = 5000;
  std::uint64_t seed = 1;
  NumberMode mode = NumberMode::fp32;
  Bf16Rounding bf16 = Bf16Rounding::truncate;
  double sigma = 1.0 / 3.0;  // normal(0, sigma), resampled until inside (-1, 1)
  unsigned threads = 1;

  [[nodiscard]] std::size_t max_n_x() const {
    std::size_t m = 0;
    for (const auto& c : configs) m = std::max(m, c.config.n_x());
    return m;
  }
};

struct ErrorReport {
  std::string config_id;
  std::size_t n_o = 0;
  std::size_t n_quadratic = 0;
  Rational ratio;
  NumberMode mode = NumberMode::fp32;
  std::size_t trials = 0;
  double mean_error = 0.0;
  double max_error = 0.0;
  std::size_t overflow_count = 0;
  std::uint64_t seed = 0;
};

struct Samples {
  std::vector<double> h;  // n_h^dims, row-major
  std::vector<double> x;  // max_n_x^dims, row-major
};

/// Deterministic in (spec.seed, trial); the kernel is drawn before the input.
inline Samples sample_inputs(const ExperimentSpec& spec, std::size_t trial) {
  const auto s = spec.seed;
  const auto t = static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32), static_cast<std::uint32_t>(t),
                    static_cast<std::uint32_t>(t >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, spec.sigma);
  auto draw = [&] {
    for (;;) {
      const double v = normal(rng);
      if (v > -1.0 && v < 1.0) return v;
    }
  };
  auto power = [&](std::size_t n) { return spec.dims == 2 ? n * n : n; };
  Samples out;
  out.h.resize(power(spec.n_h));
  out.x.resize(power(spec.max_n_x()));
  for (auto& v : out.h) v = draw();
  for (auto& v : out.x) v = draw();
  return out;
}

/// Rejects specs that cannot run; config problems are reported per id.
inline void check_spec(const ExperimentSpec& spec) {
  if (spec.dims != 1 && spec.dims != 2) throw std::invalid_argument("experiment: dims must be 1 or 2");
  if (spec.trials == 0) throw std::invalid_argument("experiment: trials must be >= 1");
  if (spec.configs.empty()) throw std::invalid_argument("experiment: no configs");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("experiment: sigma must be positive");
  for (const auto& c : spec.configs) {
    if (c.config.n_h != spec.n_h)
      throw std::invalid_argument("experiment: config " + c.id + " has n_h=" + std::to_string(c.config.n_h) +
                                  ", spec has n_h=" + std::to_string(spec.n_h));
    const auto v = validate_config(c.config);
    if (!v.empty()) throw ConfigError(v);
  }
}

/// errors[config][trial]; +inf marks a trial whose output overflowed.
inline std::vector<std::vector<double>> run_error_trials(const ExperimentSpec& spec) {
  check_spec(spec);
  std::vector<TransformSet> sets;
  for (const auto& c : spec.configs) {
    sets.push_back(build_transform_set(c.config));
    if (!verify_exact(sets.back(), 10, spec.seed))
      throw std::logic_error("experiment: config " + c.id + " fails the exact oracle");
  }

  const FloatArithmetic fa{spec.mode, spec.bf16, nullptr};
  const FloatArithmetic ref64{NumberMode::fp64, spec.bf16, nullptr};
  const ExactArithmetic exact;
  const bool is_exact = spec.mode == NumberMode::exact;
  std::vector<LoweredTransforms<FloatArithmetic>> lowered;
  std::vector<LoweredTransforms<ExactArithmetic>> lowered_exact;
  for (const auto& ts : sets) {
    if (is_exact)
      lowered_exact.emplace_back(ts, exact);
    else
      lowered.emplace_back(ts, fa);
  }

  const std::size_t nx_max = spec.max_n_x(), n_h = spec.n_h;
  std::vector<std::vector<double>> errors(spec.configs.size(), std::vector<double>(spec.trials, 0.0));

  auto one_trial = [&](std::size_t t) {
    const Samples s = sample_inputs(spec, t);
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const std::size_t n_x = sets[k].n_x();
      std::vector<double> y, ref;
      if (spec.dims == 1) {
        const std::span<const double> h(s.h), x(s.x.data(), n_x);
        if (is_exact) {
          const auto hq = detail::lift_all(exact, h), xq = detail::lift_all(exact, x);
          for (const auto& v : winograd_conv_1d(lowered_exact[k], exact, std::span<const Rational>(hq),
                                                std::span<const Rational>(xq)))
            y.push_back(v.to_double());
          for (const auto& v : direct_conv_1d(hq, xq)) ref.push_back(v.to_double());
        } else {
          const auto hl = detail::lift_all(fa, h), xl = detail::lift_all(fa, x);
          y = winograd_conv_1d(lowered[k], fa, std::span<const double>(hl), std::span<const double>(xl));
          ref = direct_conv_1d(ref64, h, x);
        }
      } else {
        const Matrix<double> H(n_h, n_h, s.h);
        const Matrix<double> X = Matrix<double>(nx_max, nx_max, s.x).block(0, 0, n_x, n_x);
        if (is_exact) {
          const auto Hq = detail::lift_all(exact, H), Xq = detail::lift_all(exact, X);
          const auto Yq = winograd_conv_2d(lowered_exact[k], exact, Hq, Xq);
          const auto Rq = direct_conv_2d(Hq, Xq);
          for (const auto& v : Yq.data()) y.push_back(v.to_double());
          for (const auto& v : Rq.data()) ref.push_back(v.to_double());
        } else {
          y = winograd_conv_2d(lowered[k], fa, detail::lift_all(fa, H), detail::lift_all(fa, X)).data();
          ref = direct_conv_2d(ref64, H, X).data();
        }
      }
      errors[k][t] = euclidean_error(y, ref).value;
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(spec.threads ? spec.threads : 1u, static_cast<unsigned>(spec.trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < spec.trials; ++t) one_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < spec.trials; t += workers) one_trial(t);
      });
    for (auto& th : pool) th.join();
  }
  return errors;
}

/// Aggregates in trial-index order, so results do not depend on threading.
inline std::vector<ErrorReport> summarize(const ExperimentSpec& spec, const std::vector<std::vector<double>>& errors) {
  std::vector<ErrorReport> out;
  for (std::size_t k = 0; k < spec.configs.size(); ++k) {
    const auto& cfg = spec.configs[k].config;
    ErrorReport r;
    r.config_id = spec.configs[k].id;
    r.n_o = cfg.n_o;
    r.n_quadratic = cfg.quadratic_count();
    r.ratio = ratio(cfg, spec.dims);
    r.mode = spec.mode;
    r.trials = errors[k].size();
    r.seed = spec.seed;
    double sum = 0.0;
    for (double e : errors[k]) {
      if (std::isinf(e)) ++r.overflow_count;
      sum += e;
      r.max_error = std::max(r.max_error, e);
    }
    r.mean_error = sum / static_cast<double>(r.trials);
    out.push_back(r);
  }
  return out;
}

inline std::vector<ErrorReport> run_error_experiment(const ExperimentSpec& spec) {
  return summarize(spec, run_error_trials(spec));
}

inline const char* error_report_csv_header() {
  return "config_id,n_o,n_quadratic,ratio,mode,trials,mean_err,max_err,overflow_count,seed";
}

inline void write_error_reports_csv(std::ostream& out, const std::vector<ErrorReport>& reports) {
  out << error_report_csv_header() << "\n";
  for (const auto& r : reports)
    out << r.config_id << "," << r.n_o << "," << r.n_quadratic << "," << format_double(r.ratio.to_double()) << ","
        << to_string(r.mode) << "," << r.trials << "," << format_double(r.mean_error) << ","
        << format_double(r.max_error) << "," << r.overflow_count << "," << r.seed << "\n";
}

struct ParetoRow {
  ErrorReport report;
  bool dominated = false;
};

/// Sorted by ratio; a row is dominated when another is no worse in both
/// ratio and mean error and strictly better in one.
inline std::vector<ParetoRow> pareto_table(const std::vector<ErrorReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("pareto_table: no reports");
  std::vector<ParetoRow> rows;
  for (const auto& r : reports) rows.push_back({r, false});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ParetoRow& a, const ParetoRow& b) { return a.report.ratio < b.report.ratio; });
  for (auto& a : rows)
    for (const auto& b : rows) {
      const bool no_worse = b.report.ratio <= a.report.ratio && b.report.mean_error <= a.report.mean_error;
      const bool better = b.report.ratio < a.report.ratio || b.report.mean_error < a.report.mean_error;
      if (no_worse && better) {
        a.dominated = true;
        break;
      }
    }
  return rows;
}

/// Parses {"dims", "n_h", "trials", "seed", "mode", "sigma", "bf16_rounding",
/// "threads", "configs": [config objects with "id"]}.
inline ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("spec: expected an object");
  ExperimentSpec spec;
  spec.dims = j.value("dims", 2);
  spec.n_h = j.contains("n_h") ? detail::get_count(j["n_h"], "n_h") : 3;
  if (j.contains("trials")) spec.trials = detail::get_count(j["trials"], "trials");
  if (j.contains("seed")) spec.seed = detail::get_count(j["seed"], "seed");
  if (j.contains("mode"))
    spec.mode = detail::field_guard("mode", [&] { return parse_number_mode(j["mode"].get<std::string>()); });
  if (j.contains("sigma")) {
    const auto& s = j["sigma"];
    spec.sigma = s.is_number() ? s.get<double>() : detail::get_rational(s, "sigma").to_double();
  }
  if (j.contains("bf16_rounding")) {
    const auto r = j["bf16_rounding"].get<std::string>();
    if (r == "truncate")
      spec.bf16 = Bf16Rounding::truncate;
    else if (r == "nearest_even")
      spec.bf16 = Bf16Rounding::nearest_even;
    else
      throw ParseError("bf16_rounding: expected truncate or nearest_even");
  }
  if (j.contains("threads")) spec.threads = static_cast<unsigned>(detail::get_count(j["threads"], "threads"));
  if (!j.contains("configs") || !j["configs"].is_array()) throw ParseError("configs: required array");
  for (std::size_t i = 0; i < j["configs"].size(); ++i) {
    auto c = j["configs"][i];
    const std::string where = "configs[" + std::to_string(i) + "]";
    if (c.is_object() && !c.contains("n_h")) c["n_h"] = spec.n_h;
    auto parsed = parse_config(c, where);
    if (parsed.id.empty()) parsed.id = "c" + std::to_string(i);
    spec.configs.push_back({parsed.id, parsed.config});
  }
  return spec;
}

inline nlohmann::json experiment_spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["dims"] = spec.dims;
  j["n_h"] = spec.n_h;
  j["trials"] = spec.trials;
  j["seed"] = spec.seed;
  j["mode"] = std::string(to_string(spec.mode));
  j["sigma"] = spec.sigma;
  j["bf16_rounding"] = spec.bf16 == Bf16Rounding::truncate ? "truncate" : "nearest_even";
  j["threads"] = spec.threads;
  j["configs"] = nlohmann::json::array();
  for (const auto& c : spec.configs) {
    auto cj = config_to_json(c.config);
    cj["id"] = c.id;
    j["configs"].push_back(cj);
  }
  return j;
}

inline nlohmann::json experiment_manifest(const ExperimentSpec& spec, double wall_clock_seconds) {
  nlohmann::json j;
  j["version"] = WINOLAB_VERSION;
  j["spec"] = experiment_spec_to_json(spec);
  j["input_distribution"] = "normal(0, sigma) resampled until inside (-1, 1)";
  j["reference"] = spec.mode == NumberMode::exact ? "direct, exact" : "direct, fp64";
  j["wall_clock_seconds"] = wall_clock_seconds;
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["finished_at"] = buf;
  return j;
}

}  // namespace winolab
