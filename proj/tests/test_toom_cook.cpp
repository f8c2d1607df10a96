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

#include <algorithm>

#include "test_util.hpp"

namespace winolab {
namespace {

using test::M;
using test::points;
using test::Q;

std::vector<Rational> run_1d(const TransformSet& ts, const std::vector<Rational>& h, const std::vector<Rational>& x) {
  return winograd_conv_1d(ts, ExactArithmetic{}, std::span<const Rational>(h), std::span<const Rational>(x));
}

TEST(RootPoint, ParseAndPrint) {
  EXPECT_TRUE(RootPoint::parse("inf").is_infinity());
  EXPECT_TRUE(RootPoint::parse("\xE2\x88\x9E").is_infinity());
  EXPECT_EQ(RootPoint::parse("-1/4").value(), Rational(-1, 4));
  EXPECT_EQ(RootPoint::infinity().to_string(), "inf");
  EXPECT_THROW(RootPoint::parse("x"), std::invalid_argument);
}

TEST(DefaultPointSet, Examples) {
  EXPECT_EQ(default_point_set(4), points({"inf", "0", "-1", "1"}));
  EXPECT_EQ(default_point_set(2), points({"inf", "0"}));
  EXPECT_EQ(default_point_set(10), points({"inf", "0", "-1", "1", "-1/2", "2", "1/2", "-2", "-1/4", "4"}));
  EXPECT_THROW(default_point_set(1), std::invalid_argument);
  EXPECT_THROW(default_point_set(11), std::invalid_argument);
}

TEST(ToomCook, KernelSizeOneIsCopyThrough) {
  const auto ts = toom_cook_transforms(points({"0", "inf"}), 1, 2);
  EXPECT_EQ(ts.mu, 2u);
  EXPECT_EQ(ts.kernel_transform, M({{1}, {1}}));
  const std::vector<Rational> h{Q("3/2")}, x{Q("-2"), Q("5/7")};
  EXPECT_EQ(run_1d(ts, h, x), (std::vector<Rational>{Q("-3"), Q("15/14")}));
}

TEST(ToomCook, F2x3IsExact) {
  const auto ts = toom_cook_transforms(points({"0", "1", "-1", "inf"}), 3, 2);
  EXPECT_EQ(ts.mu, 4u);
  EXPECT_EQ(ts.kernel_transform.rows(), 4u);
  EXPECT_EQ(ts.input_transform.cols(), 4u);
  EXPECT_EQ(ts.output_transform.rows(), 2u);
  EXPECT_TRUE(verify_exact(ts, 100, 1));
}

TEST(ToomCook, F6x3IsExact) {
  const auto ts = toom_cook_transforms(points({"0", "1", "-1", "2", "-2", "1/2", "-1/2", "inf"}), 3, 6);
  EXPECT_EQ(ts.mu, 8u);
  EXPECT_TRUE(verify_exact(ts, 100, 2));
}

TEST(ToomCook, RejectsBadPointSets) {
  EXPECT_THROW(toom_cook_transforms(points({"0", "0", "1", "inf"}), 3, 2), std::invalid_argument);
  EXPECT_THROW(toom_cook_transforms(points({"0", "inf", "1", "inf"}), 3, 2), std::invalid_argument);
  EXPECT_THROW(toom_cook_transforms(points({"0", "1", "inf"}), 3, 2), std::invalid_argument);
}

TEST(ToomCook, KernelScalingGivesSubSolverLayout) {
  const auto m = toom_cook_matrices(points({"0", "1", "inf"}), 2, 2, ToomCookScaling::kernel);
  EXPECT_EQ(m.G, M({{-1, 0}, {1, 1}, {0, 1}}));
  EXPECT_EQ(m.A, M({{1, 0}, {1, 1}, {0, 1}}));
  EXPECT_EQ(m.B, M({{-1, 0, 0}, {1, 1, -1}, {0, 0, 1}}));
}

// Interpolation coefficients from the closed form agree with exact inversion
// of the evaluation matrix (finite rows p^k, infinity row e_last).
TEST(ToomCook, InterpolationMatchesVandermondeInverse) {
  for (std::size_t n : {3u, 5u, 8u, 10u}) {
    const auto pts = default_point_set(n);
    const auto m = toom_cook_matrices(pts, 2, n - 1);
    RationalMatrix V(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (pts[i].is_infinity()) {
        V(i, n - 1) = Rational(1);
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) V(i, k) = pow(pts[i].value(), k);
    }
    EXPECT_EQ(m.B, inverse(V)) << "n=" << n;
  }
}

TEST(ToomCookProperty, DefaultPointsExactForAllSmallSizes) {
  for (std::size_t n_h : {2u, 3u})
    for (std::size_t n_o = 1; n_o <= 8; ++n_o) {
      const auto ts = toom_cook_transforms(default_point_set(n_h + n_o - 1), n_h, n_o);
      EXPECT_TRUE(verify_exact(ts, 100, 1000 + n_o)) << "F(" << n_o << "," << n_h << ")";
    }
}

TEST(ToomCookProperty, InputTransformSquareAndInvertible) {
  for (std::size_t n_o = 1; n_o <= 8; ++n_o) {
    const auto ts = toom_cook_transforms(default_point_set(n_o + 2), 3, n_o);
    ASSERT_EQ(ts.input_transform.rows(), ts.input_transform.cols());
    EXPECT_EQ(inverse(ts.input_transform) * ts.input_transform, identity<Rational>(ts.mu));
  }
}

TEST(ToomCookProperty, PermutingFinitePointsKeepsOutputs) {
  auto pts = points({"0", "-1", "1", "-1/2", "2", "inf"});
  const auto base = toom_cook_transforms(pts, 3, 4);
  detail::RationalSampler sample(9);
  std::mt19937_64 rng(4);
  for (int perm = 0; perm < 5; ++perm) {
    std::shuffle(pts.begin(), pts.end() - 1, rng);
    const auto other = toom_cook_transforms(pts, 3, 4);
    for (int t = 0; t < 20; ++t) {
      const auto h = sample.vector(3), x = sample.vector(6);
      EXPECT_EQ(run_1d(other, h, x), run_1d(base, h, x));
    }
  }
}

}  // namespace
}  // namespace winolab
