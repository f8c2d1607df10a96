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

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

namespace winolab {
namespace {

ExperimentSpec small_spec(NumberMode mode, std::size_t trials) {
  ExperimentSpec spec;
  spec.mode = mode;
  spec.trials = trials;
  spec.seed = 42;
  spec.configs = {{"tc_2", make_config(3, 2, 0)}, {"tc_4", make_config(3, 4, 0)},
                  {"w_4_q1", make_config(3, 4, 1)}, {"w_6_q1", make_config(3, 6, 1)}};
  return spec;
}

TEST(SampleInputs, Deterministic) {
  const auto spec = small_spec(NumberMode::fp32, 1);
  const auto a = sample_inputs(spec, 17), b = sample_inputs(spec, 17), c = sample_inputs(spec, 18);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(a.x, b.x);
  EXPECT_NE(a.h, c.h);
  EXPECT_EQ(a.h.size(), 9u);
  EXPECT_EQ(a.x.size(), 64u);
  auto other_seed = spec;
  other_seed.seed = 43;
  EXPECT_NE(sample_inputs(other_seed, 17).x, a.x);
}

TEST(SampleInputs, InsideOpenIntervalWithZeroMean) {
  auto spec = small_spec(NumberMode::fp32, 1);
  std::size_t n = 0;
  double sum = 0.0;
  for (std::size_t t = 0; n < 100000; ++t) {
    const auto s = sample_inputs(spec, t);
    for (const auto* v : {&s.h, &s.x})
      for (double e : *v) {
        ASSERT_GT(e, -1.0);
        ASSERT_LT(e, 1.0);
        sum += e;
        ++n;
      }
  }
  EXPECT_LT(std::fabs(sum / static_cast<double>(n)), 0.02);
}

TEST(ErrorExperiment, ExactModeHasZeroError) {
  for (int dims : {1, 2}) {
    auto spec = small_spec(NumberMode::exact, 20);
    spec.dims = dims;
    for (const auto& r : run_error_experiment(spec)) {
      EXPECT_EQ(r.mean_error, 0.0) << r.config_id;
      EXPECT_EQ(r.max_error, 0.0) << r.config_id;
    }
  }
}

TEST(ErrorExperiment, ReportFields) {
  const auto reports = run_error_experiment(small_spec(NumberMode::fp32, 50));
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(reports[3].config_id, "w_6_q1");
  EXPECT_EQ(reports[3].n_o, 6u);
  EXPECT_EQ(reports[3].n_quadratic, 1u);
  EXPECT_EQ(reports[3].ratio, Rational(81, 36));
  EXPECT_EQ(reports[3].trials, 50u);
  EXPECT_EQ(reports[3].seed, 42u);
  for (const auto& r : reports) {
    EXPECT_GT(r.mean_error, 0.0);
    EXPECT_GE(r.max_error, r.mean_error);
    EXPECT_EQ(r.overflow_count, 0u);
  }
}

TEST(ErrorExperiment, ReproducibleAndThreadIndependent) {
  for (auto mode : {NumberMode::fp32, NumberMode::bf16, NumberMode::fp16}) {
    auto spec = small_spec(mode, 200);
    const auto a = run_error_trials(spec);
    const auto b = run_error_trials(spec);
    spec.threads = 3;
    const auto c = run_error_trials(spec);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
  }
}

TEST(ErrorExperiment, OneDimensionalRuns) {
  auto spec = small_spec(NumberMode::fp32, 100);
  spec.dims = 1;
  const auto r = run_error_experiment(spec);
  EXPECT_EQ(r[1].ratio, Rational(6, 4));
  EXPECT_GT(r[1].mean_error, 0.0);
}

TEST(ErrorExperiment, RejectsBadSpecsBeforeRunning) {
  auto spec = small_spec(NumberMode::fp32, 10);
  AlgorithmConfig dup;
  dup.moduli = {Modulus::linear(Rational(1)), Modulus::linear(Rational(1)), Modulus::infinity()};
  spec.configs.push_back({"dup", dup});
  EXPECT_THROW(run_error_experiment(spec), ConfigError);

  auto mixed = small_spec(NumberMode::fp32, 10);
  mixed.configs.push_back({"k2", make_config(2, 4, 0)});
  EXPECT_THROW(run_error_experiment(mixed), std::invalid_argument);

  auto zero = small_spec(NumberMode::fp32, 0);
  EXPECT_THROW(run_error_experiment(zero), std::invalid_argument);
}

TEST(ErrorExperiment, Fp16UnitRangeInputsDoNotOverflow) {
  auto spec = small_spec(NumberMode::fp16, 5);
  spec.sigma = 1.0;
  const auto r = run_error_experiment(spec);
  for (const auto& e : r) EXPECT_EQ(e.overflow_count, 0u);
}

ErrorReport report(const std::string& id, Rational ratio, double err) {
  ErrorReport r;
  r.config_id = id;
  r.ratio = ratio;
  r.mean_error = err;
  return r;
}

TEST(Pareto, Examples) {
  const auto single = pareto_table({report("a", Rational(2), 1.0)});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_FALSE(single[0].dominated);

  const auto pair = pareto_table({report("hi", Rational(9, 4), 2.0), report("lo", Rational(9, 4), 1.0)});
  EXPECT_TRUE(pair[0].dominated);
  EXPECT_EQ(pair[0].report.config_id, "hi");
  EXPECT_FALSE(pair[1].dominated);

  const auto sorted = pareto_table({report("b", Rational(4), 0.1), report("a", Rational(1), 5.0)});
  EXPECT_EQ(sorted[0].report.config_id, "a");
  EXPECT_FALSE(sorted[0].dominated);
  EXPECT_FALSE(sorted[1].dominated);
  EXPECT_THROW(pareto_table({}), std::invalid_argument);
}

TEST(Pareto, SweepFrontierMixesFamilies) {
  ExperimentSpec spec;
  spec.trials = 500;
  spec.seed = 9;
  for (std::size_t n_o : {2u, 4u, 6u, 8u})
    for (std::size_t q : {0u, 1u})
      spec.configs.push_back({(q ? "w_" : "tc_") + std::to_string(n_o), make_config(3, n_o, q)});
  bool tc = false, w = false;
  for (const auto& row : pareto_table(run_error_experiment(spec))) {
    if (row.dominated) continue;
    tc |= row.report.n_quadratic == 0;
    w |= row.report.n_quadratic == 1;
  }
  EXPECT_TRUE(tc);
  EXPECT_TRUE(w);
}

TEST(ReportCsv, Format) {
  auto r = report("tc_4", Rational(9, 4), 0.5);
  r.n_o = 4;
  r.trials = 10;
  r.seed = 5;
  std::ostringstream out;
  write_error_reports_csv(out, {r});
  EXPECT_EQ(out.str(),
            "config_id,n_o,n_quadratic,ratio,mode,trials,mean_err,max_err,overflow_count,seed\n"
            "tc_4,4,0,2.25,fp32,10,0.5,0,0,5\n");
}

TEST(ExperimentSpecJson, ParsesAndEchoes) {
  const auto j = nlohmann::json::parse(R"({
    "dims": 1, "trials": 7, "seed": 3, "mode": "bf16", "sigma": "1/4", "bf16_rounding": "nearest_even",
    "configs": [{"id": "t", "n_o": 4, "n_quadratic": 0}, {"n_o": 2, "moduli": ["0", {"quadratic": [1, 0, 1]}, "inf"]}]
  })");
  const auto spec = parse_experiment_spec(j);
  EXPECT_EQ(spec.dims, 1);
  EXPECT_EQ(spec.trials, 7u);
  EXPECT_EQ(spec.mode, NumberMode::bf16);
  EXPECT_EQ(spec.sigma, 0.25);
  EXPECT_EQ(spec.bf16, Bf16Rounding::nearest_even);
  ASSERT_EQ(spec.configs.size(), 2u);
  EXPECT_EQ(spec.configs[1].id, "c1");
  EXPECT_EQ(multiplication_count(spec.configs[1].config), 5u);
  const auto echo = experiment_spec_to_json(spec);
  EXPECT_EQ(parse_experiment_spec(echo).configs[0].config.describe(), spec.configs[0].config.describe());
  const auto manifest = experiment_manifest(spec, 1.5);
  EXPECT_EQ(manifest["wall_clock_seconds"], 1.5);
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_THROW(parse_experiment_spec(nlohmann::json::parse(R"({"configs": [{"n_o": 2}]})")), ParseError);
}

}  // namespace
}  // namespace winolab
