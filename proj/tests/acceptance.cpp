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

// Acceptance runner: one PASS/FAIL line per criterion. With no arguments all
// criteria run; `--criterion N` runs one. Exit status is nonzero if any
// selected criterion fails.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "winolab/winolab.hpp"

namespace winolab {
namespace {

// Pinned parameters.
constexpr std::size_t kOracleTrials = 100;
constexpr std::size_t kFpTrials = 5000;
constexpr std::uint64_t kSeed = 2026;
constexpr double kWinFractionRequired = 0.5;
constexpr double kFp16Magnitude = 200.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome oracle_exactness() {
  const std::vector<Polynomial> quads(candidate_quadratics().begin(), candidate_quadratics().begin() + 3);
  std::size_t passed = 0, total = 0;
  std::string failures;
  for (std::size_t n_o : {2u, 4u, 6u, 8u})
    for (std::size_t q = 0; q <= 2; ++q) {
      const auto cfg = make_config(3, n_o, std::vector<Polynomial>(quads.begin(), quads.begin() + q));
      ++total;
      if (verify_exact(build_transform_set(cfg), kOracleTrials, kSeed + total))
        ++passed;
      else
        failures += " " + cfg.describe();
    }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) + " configs exact over " +
                               std::to_string(kOracleTrials) + " trials" + failures};
}

std::string run_cli_ratio_table() {
  const std::string cmd = "\"" WINOLAB_CLI "\" ratio --table1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {};
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  const int status = pclose(p);
  return WIFEXITED(status) && WEXITSTATUS(status) == 0 ? out : std::string{};
}

Outcome table_reproduction() {
  const std::vector<std::string> expected = {"4",    "6.25", "9", "2.25", "3.06", "4",
                                             "5.06", "1.78", "2.25", "2.78", "3.36", "4"};
  std::vector<std::string> library;
  for (const auto& e : ratio_table()) library.push_back(ratio(e.config, 2).to_decimal_string(2));

  std::vector<std::string> cli;
  std::istringstream lines(run_cli_ratio_table());
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<std::string> cells;
    for (std::string c; ls >> c;) cells.push_back(c);
    if (!cells.empty()) cli.push_back(cells.back());
  }
  std::size_t ok = 0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    ok += i < library.size() && i < cli.size() && library[i] == expected[i] && cli[i] == expected[i];
  const bool pass = ok == expected.size() && library.size() == expected.size() && cli.size() == expected.size();
  std::string got;
  for (const auto& s : cli) got += (got.empty() ? "" : " ") + s;
  return {pass, std::to_string(ok) + "/12 ratios match (cli: " + got + ")"};
}

ExperimentSpec fp32_spec(std::vector<NamedConfig> configs) {
  ExperimentSpec spec;
  spec.dims = 2;
  spec.n_h = 3;
  spec.trials = kFpTrials;
  spec.seed = kSeed;
  spec.mode = NumberMode::fp32;
  spec.threads = std::max(1u, std::thread::hardware_concurrency());
  spec.configs = std::move(configs);
  return spec;
}

Outcome ratio_matched_accuracy() {
  const auto spec = fp32_spec({{"tc_4", make_config(3, 4, 0)}, {"w_6_q1", make_config(3, 6, 1)}});
  const auto errors = run_error_trials(spec);
  const auto reports = summarize(spec, errors);
  std::size_t wins = 0;
  for (std::size_t t = 0; t < spec.trials; ++t) wins += errors[1][t] < errors[0][t];
  const double fraction = static_cast<double>(wins) / static_cast<double>(spec.trials);
  const bool mean_ok = reports[1].mean_error < reports[0].mean_error;
  const bool win_ok = fraction > kWinFractionRequired;
  return {mean_ok && win_ok, "mean tc_4=" + fmt(reports[0].mean_error) + " w_6_q1=" + fmt(reports[1].mean_error) +
                                 (mean_ok ? " (ok)" : " (not less)") + ", paired win fraction " + fmt(fraction) +
                                 (win_ok ? " (ok)" : " (needs > 0.5)")};
}

Outcome error_growth() {
  std::vector<NamedConfig> configs;
  for (std::size_t n_o : {2u, 4u, 6u, 8u}) configs.push_back({"tc_" + std::to_string(n_o), make_config(3, n_o, 0)});
  const auto reports = run_error_experiment(fp32_spec(std::move(configs)));
  bool increasing = true;
  std::string means;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i && !(reports[i].mean_error > reports[i - 1].mean_error)) increasing = false;
    means += (i ? " " : "") + reports[i].config_id + "=" + fmt(reports[i].mean_error);
  }
  return {increasing, "Toom-Cook mean error " + means};
}

Outcome precision_simulation() {
  std::vector<std::string> failed;
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> scale(-30, 30);
  for (NumberMode mode : {NumberMode::fp32, NumberMode::fp16, NumberMode::bf16})
    for (Bf16Rounding r : {Bf16Rounding::truncate, Bf16Rounding::nearest_even}) {
      bool ok = true;
      for (int i = 0; i < 100000 && ok; ++i) {
        const double v = std::ldexp(normal(rng), scale(rng));
        const double once = round_to(mode, v, r);
        ok = round_to(mode, once, r) == once || (std::isnan(once) && std::isnan(round_to(mode, once, r)));
      }
      if (!ok) failed.push_back("idempotence " + std::string(to_string(mode)));
    }
  const float third = detail::bits_float(0x3EAAAAABu);
  const auto bits = detail::float_bits(static_cast<float>(round_to(NumberMode::bf16, third)));
  if (bits != 0x3EAA0000u) failed.push_back("bf16 truncation");
  if (!std::isinf(round_to(NumberMode::fp16, 65536.0))) failed.push_back("fp16 65536");
  if (round_to(NumberMode::fp16, 65504.0) != 65504.0) failed.push_back("fp16 65504");
  std::string detail_text = "idempotent fp32/fp16/bf16, bf16(0x3EAAAAAB)=0x3EAA0000, fp16(65536)=inf";
  if (!failed.empty()) {
    detail_text = "failed:";
    for (const auto& f : failed) detail_text += " " + f;
  }
  return {failed.empty(), detail_text};
}

Outcome fp16_overflow_observability() {
  const auto ts = build_transform_set(make_config(3, 6, 1));
  const std::size_t channels = 4, size = 14;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.9, 1.0);
  std::bernoulli_distribution sign(0.5);
  auto fill = [&](std::vector<std::size_t> shape) {
    Tensor<double> t(std::move(shape));
    for (auto& v : t.data) v = (sign(rng) ? 1 : -1) * kFp16Magnitude * u(rng);
    return t;
  };
  const auto H = fill({channels, 3, 3});
  const auto X = fill({channels, size, size});
  auto overflow_count = [&](NumberMode mode) {
    OpCounters counters;
    FloatArithmetic arith{mode, Bf16Rounding::truncate, &counters};
    tiled_conv_2d(ts, arith, H, X);
    return counters.overflows;
  };
  const auto fp16 = overflow_count(NumberMode::fp16);
  const auto bf16 = overflow_count(NumberMode::bf16);
  return {fp16 > 0 && bf16 == 0, "overflows fp16=" + std::to_string(fp16) + " bf16=" + std::to_string(bf16) +
                                     " (inputs and kernels near " + fmt(kFp16Magnitude) + ")"};
}

}  // namespace
}  // namespace winolab

int main(int argc, char** argv) {
  using namespace winolab;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle exactness", oracle_exactness},
      {"ratio table reproduction", table_reproduction},
      {"ratio-matched accuracy win", ratio_matched_accuracy},
      {"error growth with tile size", error_growth},
      {"precision simulation", precision_simulation},
      {"fp16 overflow observability", fp16_overflow_observability},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::atoi(argv[2]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::cerr << "criterion must be 1.." << criteria.size() << "\n";
      return 64;
    }
  } else if (argc != 1) {
    std::cerr << "usage: " << argv[0] << " [--criterion N]\n";
    return 64;
  }
  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}
