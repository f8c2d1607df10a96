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

#include <filesystem>
#include <fstream>

#include "test_util.hpp"

namespace winolab {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("winolab_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string parse_error_of(const std::string& json) {
  try {
    parse_config(nlohmann::json::parse(json));
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigFile, ParsesAllModulusForms) {
  const auto c = parse_config(nlohmann::json::parse(R"({
    "n_h": 3, "n_o": 4,
    "moduli": ["0", -1, {"linear": "1/2"}, {"quadratic": ["1", "0", "1"], "sub_points": ["0", "1", "inf"]}],
    "infinity": true, "mode": "bf16", "trials": 12, "seed": 99
  })"));
  ASSERT_EQ(c.config.moduli.size(), 5u);
  EXPECT_EQ(c.config.moduli[1].root(), Rational(-1));
  EXPECT_EQ(c.config.moduli[2].root(), Rational(1, 2));
  EXPECT_EQ(c.config.moduli[3].sub_points(), test::points({"0", "1", "inf"}));
  EXPECT_TRUE(c.config.moduli[4].is_infinity());
  EXPECT_EQ(*c.mode, NumberMode::bf16);
  EXPECT_EQ(*c.trials, 12u);
  EXPECT_EQ(*c.seed, 99u);
  EXPECT_TRUE(validate_config(c.config).empty());
}

TEST(ConfigFile, SharedSubPointsAndFamilyShorthand) {
  const auto c = parse_config(nlohmann::json::parse(
      R"({"n_h": 3, "n_o": 2, "moduli": ["0", {"quadratic": [1, 0, 1]}, "inf"], "sub_points": ["inf", "0", "1"]})"));
  EXPECT_EQ(c.config.moduli[1].sub_points(), test::points({"inf", "0", "1"}));
  const auto f = parse_config(nlohmann::json::parse(R"({"n_h": 3, "n_o": 6, "n_quadratic": 1})"));
  EXPECT_EQ(multiplication_count(f.config), 9u);
  EXPECT_EQ(f.config.moduli[5].sub_points(), test::points({"0", "-1", "inf"}));
}

TEST(ConfigFile, ErrorsNameTheField) {
  EXPECT_NE(parse_error_of(R"({"n_o": 2, "moduli": []})").find("n_h: required"), std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n_h": 3, "n_o": 2, "moduli": ["0", {"quadratic": ["1", "x", "1"]}]})")
                .find("moduli[1].quadratic[1]"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n_h": 3, "n_o": 2, "moduli": ["0", {"cubic": 1}]})").find("moduli[1]"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n_h": -3, "n_o": 2, "moduli": []})").find("n_h"), std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n_h": 3, "n_o": 2, "moduli": ["0"], "mode": "fp8"})").find("mode"),
            std::string::npos);
  EXPECT_NE(parse_error_of(R"({"n_h": 3, "n_o": 2})").find("moduli"), std::string::npos);
}

TEST(ConfigFile, CommentsAreIgnored) {
  const auto dir = scratch("comments");
  write_text(dir / "c.json", "// header\n{\"n_h\": 3, /* outputs */ \"n_o\": 2, \"n_quadratic\": 1}\n");
  EXPECT_EQ(multiplication_count(load_config_file((dir / "c.json").string()).config), 5u);
}

TEST(ConfigFile, SyntaxErrorsCarryLineAndColumn) {
  const auto dir = scratch("syntax");
  write_text(dir / "bad.json", "{\n  \"n_h\": 3,\n  \"n_o\": 2,,\n}\n");
  try {
    load_config_file((dir / "bad.json").string());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json:3:12:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config_file((dir / "missing.json").string()), ParseError);
}

TEST(ConfigFile, RoundTripsThroughJson) {
  const auto cfg = make_config(3, 6, 2);
  const auto back = parse_config(config_to_json(cfg)).config;
  EXPECT_EQ(back.describe(), cfg.describe());
  EXPECT_EQ(build_transform_set(back).input_transform, build_transform_set(cfg).input_transform);
}

TEST(TransformIo, JsonRoundTripIsExact) {
  const auto ts = build_transform_set(make_config(3, 4, 1));
  const auto j = transform_set_to_json(ts);
  EXPECT_EQ(j["mu"], 7);
  EXPECT_EQ(j["G"].size(), 7u);
  EXPECT_EQ(j["B"].size(), 6u);
  EXPECT_EQ(j["B"][0].size(), 7u);
  EXPECT_EQ(j["A"][0].size(), 4u);
  EXPECT_TRUE(j["G"][0][0].is_string());
  const auto back = transform_set_from_json(j);
  EXPECT_EQ(back.kernel_transform, ts.kernel_transform);
  EXPECT_EQ(back.input_transform, ts.input_transform);
  EXPECT_EQ(back.output_transform, ts.output_transform);
  EXPECT_EQ(back.moduli, ts.moduli);
}

TEST(TransformIo, FilesRoundTrip) {
  const auto dir = scratch("transforms");
  const auto ts = build_transform_set(make_config(3, 6, 1));
  write_transform_set_json(dir / "transforms.json", ts);
  const auto j = load_transform_set(dir);
  EXPECT_EQ(j.input_transform, ts.input_transform);
  EXPECT_TRUE(verify_exact(j, 5, 1));

  const auto csv_dir = scratch("transforms_csv");
  write_transform_set_csv(csv_dir, ts);
  const auto c = load_transform_set(csv_dir);
  EXPECT_EQ(to_double(c.kernel_transform), to_double(ts.kernel_transform));
  EXPECT_EQ(to_double(c.input_transform), to_double(ts.input_transform));
  EXPECT_EQ(to_double(c.output_transform), to_double(ts.output_transform));
}

TEST(TransformIo, CsvErrorsNameTheLine) {
  const auto dir = scratch("csv");
  write_text(dir / "m.csv", "1,2\n3,x\n");
  try {
    read_csv(dir / "m.csv");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("m.csv:2"), std::string::npos);
  }
  write_text(dir / "r.csv", "1,2\n3\n");
  EXPECT_THROW(read_csv(dir / "r.csv"), std::runtime_error);
}

TEST(TensorIo, WgtRoundTrip) {
  const auto dir = scratch("wgt");
  Tensor<double> t({2, 3, 4});
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = 0.1 * static_cast<double>(i) - 1.0;
  write_wgt(dir / "t.wgt", t);
  EXPECT_EQ(fs::file_size(dir / "t.wgt"), 4u + 4u + 3u * 4u + 24u * 8u);
  const auto back = read_wgt(dir / "t.wgt");
  EXPECT_EQ(back.shape, t.shape);
  EXPECT_EQ(back.data, t.data);
  EXPECT_EQ(load_tensor({(dir / "t.wgt").string()}).shape, t.shape);

  std::ifstream raw(dir / "t.wgt", std::ios::binary);
  char head[8];
  raw.read(head, 8);
  EXPECT_EQ(std::string(head, 4), "WGT1");
  EXPECT_EQ(static_cast<unsigned char>(head[4]), 3u);  // little-endian rank

  write_text(dir / "bad.wgt", "WGT2....");
  EXPECT_THROW(read_wgt(dir / "bad.wgt"), std::runtime_error);
  write_text(dir / "short.wgt", std::string("WGT1\x01\x00\x00\x00\x05\x00\x00\x00", 12));
  EXPECT_THROW(read_wgt(dir / "short.wgt"), std::runtime_error);
}

TEST(TensorIo, CsvChannelsAndPadding) {
  const auto dir = scratch("tensor_csv");
  write_text(dir / "c0.csv", "1,2,3\n4,5,6\n");
  write_text(dir / "c1.csv", "7,8,9\n10,11,12\n");
  const auto t = load_tensor({(dir / "c0.csv").string(), (dir / "c1.csv").string()});
  EXPECT_EQ(t.shape, (std::vector<std::size_t>{2, 2, 3}));
  EXPECT_EQ(t.channel(1)(1, 2), 12.0);
  const auto p = pad_tensor(t, 3, 4);
  EXPECT_EQ(p.channel(1)(1, 2), 12.0);
  EXPECT_EQ(p.channel(1)(2, 3), 0.0);
  write_text(dir / "odd.csv", "1,2\n3,4\n");
  EXPECT_THROW(load_tensor({(dir / "c0.csv").string(), (dir / "odd.csv").string()}), std::runtime_error);
}

}  // namespace
}  // namespace winolab
