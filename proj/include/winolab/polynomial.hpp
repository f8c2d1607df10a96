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

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "winolab/rational.hpp"

namespace winolab {

/// Dense univariate polynomial over the rationals, constant term first.
///
/// The coefficient vector never carries a trailing zero, so the zero
/// polynomial is the empty vector and degree() == size() - 1 otherwise.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// The monomial c * a^k.
  static Polynomial monomial(std::size_t k, const Rational& c = Rational(1)) {
    std::vector<Rational> v(k + 1);
    v[k] = c;
    return Polynomial(std::move(v));
  }
  /// a - root
  static Polynomial linear_factor(const Rational& root) { return Polynomial{-root, Rational(1)}; }

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  [[nodiscard]] long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  [[nodiscard]] const std::vector<Rational>& coeffs() const { return coeffs_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

  /// Coefficient of a^i (zero past the degree).
  [[nodiscard]] Rational operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  [[nodiscard]] const Rational& leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return coeffs_.back();
  }
  [[nodiscard]] bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == Rational(1); }

  [[nodiscard]] Polynomial monic() const {
    if (is_zero()) return {};
    Polynomial r = *this;
    const Rational lc = leading();
    for (auto& c : r.coeffs_) c /= lc;
    return r;
  }

  /// Horner evaluation.
  [[nodiscard]] Rational operator()(const Rational& a) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * a + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable form such as "a^2 + a + 1".
  [[nodiscard]] std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = degree(); i >= 0; --i) {
      const Rational& c = coeffs_[static_cast<std::size_t>(i)];
      if (c.is_zero()) continue;
      const bool neg = c.sign() < 0;
      const Rational mag = neg ? -c : c;
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      const bool unit = mag == Rational(1);
      if (i == 0 || !unit) os << mag;
      if (i >= 1) os << "a";
      if (i >= 2) os << "^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

/// Product; the coefficients are the linear convolution of the inputs'.
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<Rational> out(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p.coeffs()[i] * q.coeffs()[j];
  return Polynomial(std::move(out));
}

inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return poly_mul(p, q); }

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

/// Long division: p = quotient * m + remainder, deg(remainder) < deg(m).
inline DivMod poly_divmod(const Polynomial& p, const Polynomial& m) {
  if (m.is_zero()) throw std::domain_error("polynomial division by zero");
  if (p.degree() < m.degree()) return {Polynomial{}, p};
  std::vector<Rational> rem = p.coeffs();
  const std::size_t dm = static_cast<std::size_t>(m.degree());
  std::vector<Rational> quot(rem.size() - dm);
  const Rational& lc = m.leading();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const Rational c = rem[k + dm] / lc;
    quot[k] = c;
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j <= dm; ++j) rem[k + j] -= c * m.coeffs()[j];
  }
  rem.resize(dm);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

/// R_m[p]: remainder of p modulo m.
inline Polynomial poly_mod(const Polynomial& p, const Polynomial& m) { return poly_divmod(p, m).remainder; }

/// Monic greatest common divisor.
inline Polynomial poly_gcd(Polynomial p, Polynomial q) {
  if (p.is_zero() && q.is_zero()) throw std::domain_error("gcd of two zero polynomials");
  while (!q.is_zero()) {
    Polynomial r = poly_mod(p, q);
    p = std::move(q);
    q = std::move(r);
  }
  return p.monic();
}

struct Bezout {
  Polynomial N;  // multiplies the second argument (M)
  Polynomial n;  // multiplies the first argument (m)
};

/// Solves N*M + n*m = 1 with deg(N) < deg(m) and deg(n) < deg(M).
///
/// Requires gcd(m, M) = 1; throws std::domain_error otherwise.
inline Bezout ext_euclid(const Polynomial& m, const Polynomial& M) {
  if (m.is_zero() || M.is_zero()) throw std::domain_error("ext_euclid: zero polynomial");
  // Invariant: r_i = s_i * M + t_i * m.
  Polynomial r0 = M, r1 = m;
  Polynomial s0{Rational(1)}, s1{};
  Polynomial t0{}, t1{Rational(1)};
  while (!r1.is_zero()) {
    auto [q, r] = poly_divmod(r0, r1);
    Polynomial s2 = s0 - q * s1;
    Polynomial t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.degree() != 0) throw std::domain_error("ext_euclid: inputs are not coprime");
  const Rational inv = Rational(1) / r0.leading();
  Polynomial N = s0 * inv;
  Polynomial n = t0 * inv;
  // Reduce to the minimal-degree solution: N mod m, with n adjusted to match.
  if (N.degree() >= m.degree()) {
    auto [q, r] = poly_divmod(N, m);
    N = std::move(r);
    n = n + q * M;
  }
  return {std::move(N), std::move(n)};
}

/// Coefficient vector of m zero-padded to `length`, constant term first.
inline std::vector<Rational> vec(const Polynomial& m, std::size_t length) {
  if (static_cast<long>(length) <= m.degree())
    throw std::invalid_argument("vec: length " + std::to_string(length) + " too short for degree " +
                                std::to_string(m.degree()));
  std::vector<Rational> out(length);
  std::copy(m.coeffs().begin(), m.coeffs().end(), out.begin());
  return out;
}

/// Product of a list of polynomials (1 for the empty list).
inline Polynomial product(const std::vector<Polynomial>& factors) {
  Polynomial acc{Rational(1)};
  for (const auto& f : factors) acc = acc * f;
  return acc;
}

// JSON: array of "num/den" strings, constant term first.
inline void to_json(nlohmann::json& j, const Rational& r) { j = r.to_string(); }
inline void from_json(const nlohmann::json& j, Rational& r) {
  if (j.is_string()) {
    r = Rational::parse(j.get<std::string>());
  } else if (j.is_number_integer()) {
    r = Rational(j.get<long long>());
  } else {
    throw std::invalid_argument("expected a rational string \"num/den\", got " + j.dump());
  }
}
inline void to_json(nlohmann::json& j, const Polynomial& p) {
  j = nlohmann::json::array();
  for (const auto& c : p.coeffs()) j.push_back(c.to_string());
}
inline void from_json(const nlohmann::json& j, Polynomial& p) {
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a JSON array, got " + j.dump());
  std::vector<Rational> c;
  for (const auto& e : j) c.push_back(e.get<Rational>());
  p = Polynomial(std::move(c));
}

}  // namespace winolab
