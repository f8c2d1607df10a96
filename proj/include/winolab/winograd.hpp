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

// Winograd fast-convolution construction over the Chinese remainder theorem
// for polynomials, with linear moduli (a - p), superlinear moduli m(a) of
// degree d >= 2, and the pseudo-point at infinity.
//
// A superlinear modulus maps the kernel and input to residues of degree
// d - 1; their product is computed by a small Toom-Cook F(d, d) sub-solver
// on 2d - 1 points, so each such modulus costs 2d - 1 multiplications.

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "winolab/convolve.hpp"
#include "winolab/matrix.hpp"
#include "winolab/polynomial.hpp"
#include "winolab/toom_cook.hpp"
#include "winolab/transform_set.hpp"

namespace winolab {

/// Sub-solver points used with a superlinear modulus of degree d when none
/// are given: the first 2d - 2 good points, then infinity ({0, -1, inf} for d = 2).
inline PointSet default_sub_points(std::size_t degree) {
  const auto& good = good_root_points();
  const std::size_t finite = 2 * degree - 2;
  if (finite > good.size()) throw std::invalid_argument("no default sub-solver points for degree " + std::to_string(degree));
  PointSet out;
  for (std::size_t i = 0; i < finite; ++i) out.emplace_back(good[i]);
  out.push_back(RootPoint::infinity());
  return out;
}

class Modulus {
 public:
  enum class Kind { linear, superlinear, infinity };

  /// a - root
  static Modulus linear(Rational root) {
    Modulus m;
    m.kind_ = Kind::linear;
    m.poly_ = Polynomial::linear_factor(root);
    m.root_ = std::move(root);
    return m;
  }
  /// Stored monic. An empty sub-point list selects default_sub_points(deg).
  static Modulus superlinear(const Polynomial& poly, PointSet sub_points = {}) {
    Modulus m;
    m.kind_ = Kind::superlinear;
    m.poly_ = poly.monic();
    if (sub_points.empty() && poly.degree() >= 2) sub_points = default_sub_points(static_cast<std::size_t>(poly.degree()));
    m.sub_points_ = std::move(sub_points);
    return m;
  }
  static Modulus infinity() {
    Modulus m;
    m.kind_ = Kind::infinity;
    return m;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_linear() const { return kind_ == Kind::linear; }
  [[nodiscard]] bool is_superlinear() const { return kind_ == Kind::superlinear; }
  [[nodiscard]] bool is_infinity() const { return kind_ == Kind::infinity; }
  [[nodiscard]] const Rational& root() const {
    if (!is_linear()) throw std::logic_error("Modulus::root on a non-linear modulus");
    return root_;
  }
  /// m_i(a); the constant 1 for infinity.
  [[nodiscard]] const Polynomial& polynomial() const { return poly_; }
  [[nodiscard]] const PointSet& sub_points() const { return sub_points_; }
  /// 0 for infinity.
  [[nodiscard]] std::size_t degree() const {
    return is_infinity() ? 0 : static_cast<std::size_t>(std::max(0L, poly_.degree()));
  }
  /// Multiplications this modulus contributes to one tile dimension.
  [[nodiscard]] std::size_t multiplications() const { return is_infinity() ? 1 : 2 * degree() - 1; }

  [[nodiscard]] std::string label() const { return is_infinity() ? "inf" : poly_.to_string(); }

 private:
  Modulus() = default;
  Kind kind_ = Kind::infinity;
  Rational root_;
  Polynomial poly_{Rational(1)};
  PointSet sub_points_;
};

struct AlgorithmConfig {
  std::size_t n_h = 3;
  std::size_t n_o = 2;
  std::vector<Modulus> moduli;

  [[nodiscard]] std::size_t n_x() const { return n_h + n_o - 1; }
  [[nodiscard]] bool has_infinity() const {
    for (const auto& m : moduli)
      if (m.is_infinity()) return true;
    return false;
  }
  [[nodiscard]] std::size_t count(Modulus::Kind k) const {
    std::size_t n = 0;
    for (const auto& m : moduli) n += m.kind() == k ? 1 : 0;
    return n;
  }
  [[nodiscard]] std::size_t quadratic_count() const {
    std::size_t n = 0;
    for (const auto& m : moduli) n += (m.is_superlinear() && m.degree() == 2) ? 1 : 0;
    return n;
  }
  /// Degree-1 count in the tabulated convention, where infinity is counted
  /// as one of the linear polynomials.
  [[nodiscard]] std::size_t display_linear_count() const {
    return count(Modulus::Kind::linear) + (has_infinity() ? 1 : 0);
  }
  [[nodiscard]] std::string describe() const {
    std::string s = "F(" + std::to_string(n_o) + "," + std::to_string(n_h) + ") {";
    for (std::size_t i = 0; i < moduli.size(); ++i) s += (i ? ", " : "") + moduli[i].label();
    return s + "}";
  }
};

/// Thrown by builders when validate_config reports violations.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}
  [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid algorithm configuration";
    for (const auto& e : v) s += "\n  - " + e;
    return s;
  }
  std::vector<std::string> violations_;
};

/// Every violated invariant, each naming the offending moduli. Empty iff valid.
///
/// Coprimality is checked among the top-level moduli and, separately, within
/// each sub-solver point set; a sub-solver may reuse top-level points.
inline std::vector<std::string> validate_config(const AlgorithmConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.n_h == 0) out.push_back("kernel size n_h must be >= 1");
  if (cfg.n_o == 0) out.push_back("output size n_o must be >= 1");
  if (cfg.moduli.empty()) out.push_back("no moduli given");

  std::size_t infinities = 0, degree_sum = 0;
  for (const auto& m : cfg.moduli) {
    if (m.is_infinity()) {
      ++infinities;
      continue;
    }
    degree_sum += m.degree();
    if (!m.is_superlinear()) continue;
    const auto& p = m.polynomial();
    if (p.degree() < 2) {
      out.push_back("superlinear modulus " + m.label() + " has degree < 2");
      continue;
    }
    if (p.degree() > 2) {
      out.push_back("superlinear modulus " + m.label() + " has degree " + std::to_string(p.degree()) +
                    "; only degree 2 is supported");
    } else {
      // Monic a^2 + b a + c has a rational root iff b^2 - 4c is a rational square.
      const Rational disc = p[1] * p[1] - Rational(4) * p[0];
      if (is_rational_square(disc)) out.push_back("modulus " + m.label() + " is reducible over the rationals");
    }
    const std::size_t need = 2 * static_cast<std::size_t>(p.degree()) - 1;
    if (m.sub_points().size() != need)
      out.push_back("modulus " + m.label() + " needs " + std::to_string(need) + " sub-solver points, got " +
                    std::to_string(m.sub_points().size()));
    try {
      check_point_set(m.sub_points());
    } catch (const std::invalid_argument& e) {
      out.push_back("sub-solver points of " + m.label() + ": " + e.what());
    }
  }
  if (infinities > 1) out.push_back("infinity appears " + std::to_string(infinities) + " times");

  for (std::size_t i = 0; i < cfg.moduli.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.moduli.size(); ++j) {
      const auto& a = cfg.moduli[i];
      const auto& b = cfg.moduli[j];
      if (a.is_infinity() || b.is_infinity()) continue;
      if (a.polynomial() == b.polynomial()) {
        out.push_back("duplicate modulus " + a.label());
        continue;
      }
      if (poly_gcd(a.polynomial(), b.polynomial()).degree() > 0)
        out.push_back("moduli " + a.label() + " and " + b.label() + " are not coprime");
    }

  if (cfg.n_h > 0 && cfg.n_o > 0) {
    const std::size_t want = cfg.n_h + cfg.n_o - (infinities > 0 ? 2 : 1);
    if (degree_sum != want)
      out.push_back("finite moduli degrees sum to " + std::to_string(degree_sum) + ", need " + std::to_string(want) +
                    (infinities > 0 ? " (n_h + n_o - 2 with infinity)" : " (n_h + n_o - 1 without infinity)"));
  }
  return out;
}

inline void require_valid(const AlgorithmConfig& cfg) {
  auto v = validate_config(cfg);
  if (!v.empty()) throw ConfigError(std::move(v));
}

/// mu: elementwise multiplications per tile per dimension.
inline std::size_t multiplication_count(const AlgorithmConfig& cfg) {
  std::size_t mu = 0;
  for (const auto& m : cfg.moduli) mu += m.multiplications();
  return mu;
}

/// Multiplications per output point: mu / n_o (1D) or mu^2 / n_o^2 (2D).
inline Rational ratio(const AlgorithmConfig& cfg, int dims) {
  if (dims != 1 && dims != 2) throw std::invalid_argument("ratio: dims must be 1 or 2");
  const long mu = static_cast<long>(multiplication_count(cfg));
  const long n_o = static_cast<long>(cfg.n_o);
  return dims == 1 ? Rational(mu, n_o) : Rational(mu * mu, n_o * n_o);
}

namespace detail {

/// Rows of one modulus mapping a length-`width` coefficient vector into the
/// transformed domain. For a superlinear m the block is S * P, where column
/// j of P is vec(R_m[a^j]) and S is the sub-solver's kernel-side (G) or
/// output-side (A) matrix.
inline RationalMatrix evaluation_block(const Modulus& m, std::size_t width, bool kernel_side) {
  if (m.is_infinity()) {
    RationalMatrix row(1, width);
    row(0, width - 1) = Rational(1);
    return row;
  }
  if (m.is_linear()) {
    RationalMatrix row(1, width);
    Rational power(1);
    for (std::size_t k = 0; k < width; ++k, power *= m.root()) row(0, k) = power;
    return row;
  }
  const std::size_t d = m.degree();
  RationalMatrix P(d, width);
  for (std::size_t j = 0; j < width; ++j) {
    const auto col = vec(poly_mod(Polynomial::monomial(j), m.polynomial()), d);
    for (std::size_t r = 0; r < d; ++r) P(r, j) = col[r];
  }
  const auto sub = toom_cook_matrices(m.sub_points(), d, d, ToomCookScaling::kernel);
  return (kernel_side ? sub.G : sub.A) * P;
}

inline RationalMatrix evaluation_matrix(const AlgorithmConfig& cfg, std::size_t width, bool kernel_side) {
  std::vector<RationalMatrix> blocks;
  for (const auto& m : cfg.moduli) blocks.push_back(evaluation_block(m, width, kernel_side));
  return vstack(blocks);
}

inline Polynomial modulus_product(const AlgorithmConfig& cfg) {
  std::vector<Polynomial> f;
  for (const auto& m : cfg.moduli)
    if (!m.is_infinity()) f.push_back(m.polynomial());
  return product(f);
}

}  // namespace detail

struct KernelOutputTransforms {
  RationalMatrix G;  // mu x n_h
  RationalMatrix A;  // mu x (n_h + n_o - 1)
};

/// G^W and A^W. Linear moduli give Vandermonde rows, superlinear ones the
/// block G_tc * G' (resp. A_tc * A'), infinity the row [0 ... 0 1].
///
/// A^W spans the remainders of a^0 .. a^(n_h+n_o-2), the full input tile
/// length. Its leading n_o columns (with the infinity row moved to column
/// n_o - 1) are the output-side evaluation used by build_transform_set.
inline KernelOutputTransforms build_kernel_output_transforms(const AlgorithmConfig& cfg) {
  require_valid(cfg);
  return {detail::evaluation_matrix(cfg, cfg.n_h, true), detail::evaluation_matrix(cfg, cfg.n_x(), false)};
}

/// B^W = [E C | vec(M)] (the vec(M) column only when infinity is present),
/// an n_x x mu matrix. Columns follow the modulus order.
///
/// C maps sub-solver products back to residues: [1] for a linear modulus,
/// columns vec(R_m[b_j]) for a superlinear one, b_j(a) being column j of the
/// sub-solver interpolation matrix. E lifts residues to the CRT solution:
/// columns vec(R_M[a^k N_i M_i]), k < deg m_i, where N_i M_i + n_i m_i = 1.
inline RationalMatrix build_input_transform(const AlgorithmConfig& cfg) {
  require_valid(cfg);
  const std::size_t n_x = cfg.n_x();
  const Polynomial M = detail::modulus_product(cfg);
  std::vector<RationalMatrix> blocks;
  for (const auto& m : cfg.moduli) {
    if (m.is_infinity()) {
      RationalMatrix col(n_x, 1);
      const auto v = vec(M, n_x);
      for (std::size_t r = 0; r < n_x; ++r) col(r, 0) = v[r];
      blocks.push_back(std::move(col));
      continue;
    }
    const std::size_t d = m.degree();
    const auto [Mi, rest] = poly_divmod(M, m.polynomial());
    if (!rest.is_zero()) throw std::logic_error("modulus does not divide M");
    const Polynomial NiMi = ext_euclid(m.polynomial(), Mi).N * Mi;

    RationalMatrix E(n_x, d);
    Polynomial shifted = NiMi;
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = vec(poly_mod(shifted, M), n_x);
      for (std::size_t r = 0; r < n_x; ++r) E(r, k) = v[r];
      shifted = shifted * Polynomial::monomial(1);
    }
    if (m.is_linear()) {
      blocks.push_back(std::move(E));
      continue;
    }
    const auto sub = toom_cook_matrices(m.sub_points(), d, d, ToomCookScaling::kernel);
    const std::size_t terms = 2 * d - 1;
    RationalMatrix C(d, terms);
    for (std::size_t j = 0; j < terms; ++j) {
      std::vector<Rational> bj(terms);
      for (std::size_t r = 0; r < terms; ++r) bj[r] = sub.B(r, j);
      const auto v = vec(poly_mod(Polynomial(std::move(bj)), m.polynomial()), d);
      for (std::size_t r = 0; r < d; ++r) C(r, j) = v[r];
    }
    blocks.push_back(E * C);
  }
  return hstack(blocks);
}

/// The complete correlation-form algorithm:
///   kernel = G^W, input = (B^W)^T, output = (A_o)^T
/// where A_o is the output-side evaluation of width n_o. Construction is
/// checked against exact direct correlation before returning.
inline TransformSet build_transform_set(const AlgorithmConfig& cfg) {
  require_valid(cfg);
  TransformSet ts;
  ts.n_h = cfg.n_h;
  ts.n_o = cfg.n_o;
  ts.mu = multiplication_count(cfg);
  ts.kernel_transform = detail::evaluation_matrix(cfg, cfg.n_h, true);
  ts.input_transform = build_input_transform(cfg).transpose();
  ts.output_transform = detail::evaluation_matrix(cfg, cfg.n_o, false).transpose();
  for (const auto& m : cfg.moduli) ts.moduli.push_back(m.label());
  ts.check_shapes();
  if (!verify_exact(ts, 2, 0x5eed))
    throw std::logic_error("internal error: generated transforms for " + cfg.describe() + " are not exact");
  return ts;
}

/// A config of the standard family: good root points, then `quadratics` in
/// order, then infinity. Infinity is dropped only when the quadratics alone
/// cover n_h + n_o - 1 degrees (e.g. two quadratics for F(2,3)).
inline AlgorithmConfig make_config(std::size_t n_h, std::size_t n_o, const std::vector<Polynomial>& quadratics,
                                   PointSet sub_points = {}) {
  AlgorithmConfig cfg;
  cfg.n_h = n_h;
  cfg.n_o = n_o;
  std::size_t quad_degree = 0;
  for (const auto& q : quadratics) quad_degree += static_cast<std::size_t>(q.degree());
  const std::size_t with_inf = n_h + n_o - 2;
  bool infinity = true;
  std::size_t linear = 0;
  if (quad_degree <= with_inf) {
    linear = with_inf - quad_degree;
  } else if (quad_degree == with_inf + 1) {
    infinity = false;
  } else {
    throw std::invalid_argument("make_config: superlinear degree " + std::to_string(quad_degree) +
                                " exceeds n_h + n_o - 1 = " + std::to_string(with_inf + 1));
  }
  const auto& good = good_root_points();
  if (linear > good.size())
    throw std::invalid_argument("make_config: need " + std::to_string(linear) + " root points, only " +
                                std::to_string(good.size()) + " good points known");
  for (std::size_t i = 0; i < linear; ++i) cfg.moduli.push_back(Modulus::linear(good[i]));
  for (const auto& q : quadratics) cfg.moduli.push_back(Modulus::superlinear(q, sub_points));
  if (infinity) cfg.moduli.push_back(Modulus::infinity());
  return cfg;
}

/// Quadratic moduli with coefficients in {0, -1, 1} that have no rational
/// root, followed by a^2 + 2 for configurations that need a fourth.
inline const std::vector<Polynomial>& candidate_quadratics() {
  static const std::vector<Polynomial> q = {
      Polynomial{Rational(1), Rational(0), Rational(1)},   // a^2 + 1
      Polynomial{Rational(1), Rational(1), Rational(1)},   // a^2 + a + 1
      Polynomial{Rational(1), Rational(-1), Rational(1)},  // a^2 - a + 1
      Polynomial{Rational(2), Rational(0), Rational(1)},   // a^2 + 2
  };
  return q;
}

inline AlgorithmConfig make_config(std::size_t n_h, std::size_t n_o, std::size_t n_quadratic) {
  const auto& q = candidate_quadratics();
  if (n_quadratic > q.size()) throw std::invalid_argument("make_config: at most 4 quadratics");
  return make_config(n_h, n_o, std::vector<Polynomial>(q.begin(), q.begin() + static_cast<long>(n_quadratic)));
}

struct RatioTableEntry {
  std::size_t n_o;
  std::size_t linear;     // counting infinity
  std::size_t quadratic;
  AlgorithmConfig config;
};

/// The 3x3-kernel ratio table: outputs 2, 4, 6 with 0 .. (n_o+2)/2 quadratics.
inline std::vector<RatioTableEntry> ratio_table() {
  std::vector<RatioTableEntry> out;
  for (std::size_t n_o : {2u, 4u, 6u})
    for (std::size_t q = 0; 2 * q <= n_o + 2; ++q) {
      auto cfg = make_config(3, n_o, q);
      out.push_back({n_o, cfg.display_linear_count(), q, std::move(cfg)});
    }
  return out;
}

}  // namespace winolab
