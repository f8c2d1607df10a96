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

// winolab command-line tool.
//
// Exit codes: 0 success, 1 verification or overflow failure, 2 invalid
// configuration, 64 usage error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "winolab/winolab.hpp"

namespace fs = std::filesystem;
using namespace winolab;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalidConfig = 2;
constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Command-line seed, else $SEED, else the config file, else `fallback`.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const std::optional<std::uint64_t>& file,
                           std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError(std::string("SEED must be a non-negative integer, got '") + env + "'");
    return v;
  }
  if (file) return *file;
  return fallback;
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string ratio_text(const AlgorithmConfig& cfg, int dims) { return ratio(cfg, dims).to_decimal_string(2); }

TransformSet transforms_from(const std::string& config_path, const std::string& matrices_dir) {
  if (!matrices_dir.empty()) return load_transform_set(matrices_dir);
  if (config_path.empty()) throw UsageError("either a config file or --matrices is required");
  return build_transform_set(load_config_file(config_path).config);
}

// CSV matrices hold fp64 roundings of the exact entries.
constexpr double kCsvTolerance = 1e-9;

bool verify_matrices(const std::string& matrices_dir, const TransformSet& ts, std::size_t trials,
                     std::uint64_t seed) {
  if (has_exact_transforms(matrices_dir)) return verify_exact(ts, trials, seed);
  return max_relative_deviation(ts, trials, seed) <= kCsvTolerance;
}

int cmd_gen(const std::string& config_path, const std::string& format, const std::string& out_dir, int dims) {
  const auto file = load_config_file(config_path);
  const auto ts = build_transform_set(file.config);
  fs::create_directories(out_dir);
  if (format == "json") {
    write_transform_set_json(fs::path(out_dir) / "transforms.json", ts);
  } else {
    write_transform_set_csv(out_dir, ts);
  }
  std::cout << "mu=" << ts.mu << " ratio=" << ratio_text(file.config, dims) << "\n";
  return kOk;
}

int cmd_check(const std::string& config_path, const std::string& matrices_dir, std::optional<std::size_t> trials_flag,
              std::optional<std::uint64_t> seed_flag) {
  std::optional<ConfigFile> file;
  if (!config_path.empty()) file = load_config_file(config_path);
  const std::size_t trials = trials_flag ? *trials_flag : (file && file->trials ? *file->trials : 100);
  if (trials == 0) throw UsageError("--trials must be >= 1");
  const auto seed = resolve_seed(seed_flag, file ? file->seed : std::nullopt, 1);
  TransformSet ts;
  bool ok = false;
  if (!matrices_dir.empty()) {
    ts = load_transform_set(matrices_dir);
    ok = verify_matrices(matrices_dir, ts, trials, seed);
  } else if (file) {
    ts = build_transform_set(file->config);
    ok = verify_exact(ts, trials, seed);
  } else {
    throw UsageError("either a config file or --matrices is required");
  }
  std::cout << "trials=" << trials << " seed=" << seed << " mu=" << ts.mu << " result=" << (ok ? "pass" : "FAIL")
            << "\n";
  return ok ? kOk : kFailure;
}

int cmd_ratio(bool table1, const std::string& config_path, int dims) {
  if (table1) {
    std::cout << std::left << std::setw(8) << "output" << std::setw(18) << "linear/quadratic" << std::setw(5) << "mu"
              << "ratio\n";
    for (const auto& e : ratio_table()) {
      const std::string out = std::to_string(e.n_o) + "x" + std::to_string(e.n_o);
      const std::string mix = std::to_string(e.linear) + "/" + std::to_string(e.quadratic);
      std::cout << std::setw(8) << out << std::setw(18) << mix << std::setw(5) << multiplication_count(e.config)
                << ratio_text(e.config, 2) << "\n";
    }
    return kOk;
  }
  if (config_path.empty()) throw UsageError("ratio: give a config file or --table1");
  const auto cfg = load_config_file(config_path).config;
  require_valid(cfg);
  std::cout << "mu=" << multiplication_count(cfg) << " ratio=" << ratio_text(cfg, dims) << "\n";
  return kOk;
}

int cmd_bench(const std::string& spec_path, const std::string& out_csv, std::optional<std::size_t> trials,
              std::optional<std::uint64_t> seed_flag, std::optional<unsigned> threads, const std::string& trials_csv) {
  const auto j = read_json_file(spec_path);
  ExperimentSpec spec;
  try {
    spec = parse_experiment_spec(j);
  } catch (const ParseError& e) {
    throw ParseError(spec_path + ": " + e.what());
  }
  if (trials) spec.trials = *trials;
  if (spec.trials == 0) throw UsageError("trials must be >= 1");
  spec.seed = resolve_seed(seed_flag, j.contains("seed") ? std::optional<std::uint64_t>(spec.seed) : std::nullopt, 1);
  if (threads) spec.threads = *threads;
  spec.threads = resolve_threads(spec.threads);

  const auto t0 = std::chrono::steady_clock::now();
  const auto errors = run_error_trials(spec);
  const auto reports = summarize(spec, errors);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path csv(out_csv);
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + out_csv);
    write_error_reports_csv(out, reports);
  }
  fs::path manifest = csv;
  manifest.replace_extension(".manifest.json");
  {
    std::ofstream out(manifest);
    out << experiment_manifest(spec, wall).dump(2) << "\n";
  }
  if (!trials_csv.empty()) {
    std::ofstream out(trials_csv);
    out << "trial";
    for (const auto& c : spec.configs) out << "," << c.id;
    out << "\n";
    for (std::size_t t = 0; t < spec.trials; ++t) {
      out << t;
      for (const auto& e : errors) out << "," << format_double(e[t]);
      out << "\n";
    }
  }

  std::cout << std::left << std::setw(14) << "config" << std::setw(8) << "ratio" << std::setw(24) << "mean_err"
            << std::setw(10) << "overflow" << "frontier\n";
  for (const auto& row : pareto_table(reports)) {
    const auto& r = row.report;
    std::cout << std::setw(14) << r.config_id << std::setw(8) << r.ratio.to_decimal_string(2) << std::setw(24)
              << format_double(r.mean_error) << std::setw(10) << r.overflow_count << (row.dominated ? "" : "*")
              << "\n";
  }
  std::cout << "wrote " << csv.string() << " and " << manifest.string() << " (" << std::fixed << std::setprecision(1)
            << wall << " s)\n";
  std::size_t overflows = 0;
  for (const auto& r : reports) overflows += r.overflow_count;
  if (overflows) std::cerr << "overflows=" << overflows << "\n";
  return kOk;
}

struct ConvOptions {
  std::string config_path, matrices_dir, out = "-", mode = "fp32", bf16_rounding = "truncate";
  std::vector<std::string> inputs, kernels;
  bool direct = false, pad = false, flip = false, no_verify = false;
  unsigned threads = 1;
};

void write_output(const std::string& out, const Matrix<double>& y) {
  if (out == "-") {
    for (std::size_t r = 0; r < y.rows(); ++r) {
      for (std::size_t c = 0; c < y.cols(); ++c) std::cout << (c ? "," : "") << format_double(y(r, c));
      std::cout << "\n";
    }
  } else if (fs::path(out).extension() == ".wgt") {
    write_wgt(out, Tensor<double>({y.rows(), y.cols()}, y.data()));
  } else {
    write_csv(out, y);
  }
}

template <typename Arith>
Matrix<double> run_conv(const ConvOptions& o, const TransformSet& ts, const Arith& arith, const Tensor<double>& H,
                        const Tensor<double>& X, unsigned threads) {
  const auto y = o.direct ? direct_conv_2d_channels(arith, H, X) : tiled_conv_2d(ts, arith, H, X, threads);
  return y.map([](const typename Arith::value_type& v) { return Arith::to_double(v); });
}

int cmd_conv(const ConvOptions& o) {
  if (o.config_path.empty() == o.matrices_dir.empty()) throw UsageError("conv: give exactly one of CONFIG or --matrices");
  const NumberMode mode = parse_number_mode(o.mode);
  Bf16Rounding bf16 = Bf16Rounding::truncate;
  if (o.bf16_rounding == "nearest_even") bf16 = Bf16Rounding::nearest_even;
  else if (o.bf16_rounding != "truncate") throw UsageError("--bf16-rounding must be truncate or nearest_even");

  const TransformSet ts = transforms_from(o.config_path, o.matrices_dir);
  if (!o.matrices_dir.empty() && !o.no_verify && !verify_matrices(o.matrices_dir, ts, 10, 1)) {
    std::cerr << "error: matrices in " << o.matrices_dir << " do not compute correlation\n";
    return kFailure;
  }

  Tensor<double> H = load_tensor(o.kernels);
  Tensor<double> X = load_tensor(o.inputs);
  if (o.flip)
    for (std::size_t c = 0; c < H.shape[0]; ++c) {
      const auto f = flip_kernel(H.channel(c));
      std::copy(f.data().begin(), f.data().end(), H.data.begin() + static_cast<long>(c * f.data().size()));
    }
  if (H.shape.size() != 3 || H.shape[1] != ts.n_h || H.shape[2] != ts.n_h)
    throw UsageError("conv: kernel must be " + std::to_string(ts.n_h) + "x" + std::to_string(ts.n_h));
  if (X.shape[1] < ts.n_h || X.shape[2] < ts.n_h) throw UsageError("conv: input smaller than the kernel");

  const std::size_t out_rows = X.shape[1] - ts.n_h + 1, out_cols = X.shape[2] - ts.n_h + 1;
  if (o.pad && !o.direct) {
    auto up = [&](std::size_t n) { return std::max((n + ts.n_o - 1) / ts.n_o * ts.n_o, ts.n_o); };
    X = pad_tensor(X, up(out_rows) + ts.n_h - 1, up(out_cols) + ts.n_h - 1);
  }

  OpCounters counters;
  const unsigned threads = resolve_threads(o.threads);
  Matrix<double> y;
  if (mode == NumberMode::exact) {
    y = run_conv(o, ts, ExactArithmetic{&counters}, H, X, threads);
  } else {
    y = run_conv(o, ts, FloatArithmetic{mode, bf16, &counters}, H, X, threads);
  }
  y = y.block(0, 0, out_rows, out_cols);

  const auto mults = o.direct ? static_cast<std::uint64_t>(H.shape[0] * out_rows * out_cols * ts.n_h * ts.n_h)
                              : counters.hadamard_multiplications;
  write_output(o.out, y);
  std::cerr << "multiplications=" << mults << "\n";
  if (o.out != "-") std::cout << "multiplications=" << mults << "\n";
  if (counters.overflows) {
    std::cerr << "overflows=" << counters.overflows << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Winograd convolution generator and verification lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", WINOLAB_VERSION);

  int dims = 2;
  std::string config_path, format = "json", out_dir = ".", matrices_dir;
  auto* gen = app.add_subcommand("gen", "Build the transform matrices for a config");
  gen->add_option("config", config_path, "Config JSON file")->required();
  gen->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  gen->add_option("--out", out_dir, "Output directory");
  gen->add_option("--dims", dims, "Ratio dimensionality (1 or 2)")->check(CLI::IsMember({1, 2}));

  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  auto* check = app.add_subcommand("check", "Verify exactness against direct correlation");
  check->add_option("config", config_path, "Config JSON file");
  check->add_option("--matrices", matrices_dir, "Directory with transforms.json or G/B/A.csv");
  check->add_option("--trials", trials, "Random rational trials (default 100)");
  check->add_option("--seed", seed, "Seed (default $SEED, then the config, then 1)");

  bool table1 = false;
  auto* ratio_cmd = app.add_subcommand("ratio", "Multiplications per output point");
  ratio_cmd->add_flag("--table1", table1, "Print the 3x3-kernel ratio table");
  ratio_cmd->add_option("config", config_path, "Config JSON file");
  ratio_cmd->add_option("--dims", dims, "1 or 2")->check(CLI::IsMember({1, 2}));

  std::string spec_path, out_csv = "bench.csv", trials_csv;
  std::optional<unsigned> threads;
  auto* bench = app.add_subcommand("bench", "Run a random-data error experiment");
  bench->add_option("spec", spec_path, "Experiment spec JSON")->required();
  bench->add_option("--out", out_csv, "Report CSV (manifest goes next to it)");
  bench->add_option("--trials", trials, "Override the trial count");
  bench->add_option("--seed", seed, "Override the seed");
  bench->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench->add_option("--per-trial", trials_csv, "Also write per-trial errors to this CSV");

  ConvOptions conv_opts;
  auto* conv = app.add_subcommand("conv", "Tiled 2D correlation of multi-channel input");
  conv->add_option("config", conv_opts.config_path, "Config JSON file");
  conv->add_option("--matrices", conv_opts.matrices_dir, "Directory with transforms.json or G/B/A.csv");
  conv->add_option("--input", conv_opts.inputs, "Input channel CSV (repeat per channel) or one .wgt")->required();
  conv->add_option("--kernel", conv_opts.kernels, "Kernel channel CSV (repeat per channel) or one .wgt")->required();
  conv->add_option("--mode", conv_opts.mode, "exact|fp64|fp32|fp16|bf16");
  conv->add_option("--bf16-rounding", conv_opts.bf16_rounding, "truncate or nearest_even");
  conv->add_option("--out", conv_opts.out, "Output .csv or .wgt (default: stdout CSV)");
  conv->add_flag("--direct", conv_opts.direct, "Direct correlation instead of Winograd");
  conv->add_flag("--pad", conv_opts.pad, "Zero-pad bottom/right to whole tiles, crop the result");
  conv->add_flag("--flip", conv_opts.flip, "Flip the kernel (true convolution)");
  conv->add_flag("--no-verify", conv_opts.no_verify, "Skip the exactness check on --matrices");
  conv->add_option("--threads", conv_opts.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(config_path, format, out_dir, dims);
    if (*check) return cmd_check(config_path, matrices_dir, trials, seed);
    if (*ratio_cmd) return cmd_ratio(table1, config_path, dims);
    if (*bench) return cmd_bench(spec_path, out_csv, trials, seed, threads, trials_csv);
    if (*conv) return cmd_conv(conv_opts);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kInvalidConfig;
  } catch (const ParseError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
