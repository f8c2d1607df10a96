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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "winolab/matrix.hpp"
#include "winolab/polynomial.hpp"
#include "winolab/transform_set.hpp"

namespace winolab {

/// A finite evaluation point, or the pseudo-point at infinity.
class RootPoint {
 public:
  RootPoint(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  RootPoint(int value) : value_(Rational(value)) {}        // NOLINT(google-explicit-constructor)
  static RootPoint infinity() { return RootPoint(); }

  /// "inf", "∞" or a rational literal.
  static RootPoint parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "\xE2\x88\x9E") return infinity();
    return RootPoint(Rational::parse(text));
  }

  [[nodiscard]] bool is_infinity() const { return !value_.has_value(); }
  [[nodiscard]] const Rational& value() const {
    if (!value_) throw std::logic_error("RootPoint: infinity has no finite value");
    return *value_;
  }
  [[nodiscard]] std::string to_string() const { return value_ ? value_->to_string() : "inf"; }

  friend bool operator==(const RootPoint& a, const RootPoint& b) { return a.value_ == b.value_; }

 private:
  RootPoint() = default;
  std::optional<Rational> value_;
};

using PointSet = std::vector<RootPoint>;

/// Where the Lagrange normalisation N_i = 1 / M_i(p_i) is placed.
///
/// `interpolation` keeps kernel and output-side rows as plain Vandermonde
/// rows and scales the interpolation columns; this is what the CRT
/// construction produces for linear moduli. `kernel` moves N_i onto the
/// kernel rows and leaves the interpolation columns as the bare M_i(a),
/// which is the layout of the small sub-solver matrices in the worked
/// superlinear example (e.g. G = [[-1,0],[1,1],[0,1]] for points {0, 1, inf}).
enum class ToomCookScaling { interpolation, kernel };

/// Points ordered by observed floating-point accuracy.
inline const std::vector<Rational>& good_root_points() {
  static const std::vector<Rational> points = {
      Rational(0), Rational(-1), Rational(1), Rational(-1, 2), Rational(2),
      Rational(1, 2), Rational(-2), Rational(-1, 4), Rational(4)};
  return points;
}

/// Infinity followed by the first n_points - 1 good points.
inline PointSet default_point_set(std::size_t n_points) {
  const auto& good = good_root_points();
  if (n_points < 2 || n_points > good.size() + 1)
    throw std::invalid_argument("default_point_set: n_points must be in [2, " + std::to_string(good.size() + 1) +
                                "], got " + std::to_string(n_points));
  PointSet out{RootPoint::infinity()};
  for (std::size_t i = 0; i + 1 < n_points; ++i) out.emplace_back(good[i]);
  return out;
}

/// Throws on duplicate points (including a repeated infinity).
inline void check_point_set(const PointSet& points) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw std::invalid_argument("duplicate root point " + points[i].to_string());
}

/// Toom-Cook matrices in product form: for linear convolution s = h * g,
///   vec(s) = B * ((G * h) .* (A * g)),
/// with G: mu x n_h, A: mu x n_o, B: mu x mu (mu = n_h + n_o - 1).
struct ToomCookMatrices {
  RationalMatrix G;
  RationalMatrix A;
  RationalMatrix B;
};

inline ToomCookMatrices toom_cook_matrices(const PointSet& points, std::size_t n_h, std::size_t n_o,
                                           ToomCookScaling scaling = ToomCookScaling::interpolation) {
  if (n_h == 0 || n_o == 0) throw std::invalid_argument("toom_cook: sizes must be positive");
  const std::size_t mu = n_h + n_o - 1;
  if (points.size() != mu)
    throw std::invalid_argument("toom_cook: need " + std::to_string(mu) + " points for F(" + std::to_string(n_o) +
                                "," + std::to_string(n_h) + "), got " + std::to_string(points.size()));
  check_point_set(points);

  std::vector<Polynomial> factors;
  for (const auto& p : points)
    if (!p.is_infinity()) factors.push_back(Polynomial::linear_factor(p.value()));
  const Polynomial M = product(factors);

  ToomCookMatrices out{RationalMatrix(mu, n_h), RationalMatrix(mu, n_o), RationalMatrix(mu, mu)};
  std::size_t finite_index = 0;
  for (std::size_t i = 0; i < mu; ++i) {
    if (points[i].is_infinity()) {
      out.G(i, n_h - 1) = Rational(1);
      out.A(i, n_o - 1) = Rational(1);
      const auto col = vec(M, mu);
      for (std::size_t r = 0; r < mu; ++r) out.B(r, i) = col[r];
      continue;
    }
    const Rational& p = points[i].value();
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j < factors.size(); ++j)
      if (j != finite_index) others.push_back(factors[j]);
    ++finite_index;
    const Polynomial Mi = product(others);
    const Rational Ni = Rational(1) / Mi(p);
    const Rational kernel_scale = scaling == ToomCookScaling::kernel ? Ni : Rational(1);
    const Rational interp_scale = scaling == ToomCookScaling::kernel ? Rational(1) : Ni;

    Rational power(1);
    for (std::size_t k = 0; k < std::max(n_h, n_o); ++k) {
      if (k < n_h) out.G(i, k) = kernel_scale * power;
      if (k < n_o) out.A(i, k) = power;
      power *= p;
    }
    const auto col = vec(Mi * interp_scale, mu);
    for (std::size_t r = 0; r < mu; ++r) out.B(r, i) = col[r];
  }
  return out;
}

/// Correlation-form transforms of F(n_o, n_h) from `points` (matrix exchange
/// of the product form: input = B^T, output = A^T).
inline TransformSet toom_cook_transforms(const PointSet& points, std::size_t n_h, std::size_t n_o,
                                         ToomCookScaling scaling = ToomCookScaling::interpolation) {
  ToomCookMatrices m = toom_cook_matrices(points, n_h, n_o, scaling);
  TransformSet ts;
  ts.n_h = n_h;
  ts.n_o = n_o;
  ts.mu = points.size();
  ts.kernel_transform = std::move(m.G);
  ts.input_transform = m.B.transpose();
  ts.output_transform = m.A.transpose();
  for (const auto& p : points)
    ts.moduli.push_back(p.is_infinity() ? "inf" : Polynomial::linear_factor(p.value()).to_string());
  ts.check_shapes();
  return ts;
}

}  // namespace winolab
