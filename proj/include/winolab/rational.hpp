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

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace winolab {

/// Exact rational number. Always stored reduced with a positive denominator.
///
/// Backed by GMP's mpq_class; this wrapper fixes the textual format
/// ("num/den") and the exact conversions to and from binary floating point.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : value_(std::to_string(v)) {}  // NOLINT
  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    value_ = mpq_class(mpz_class(num), mpz_class(den));
    value_.canonicalize();
  }
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "n", "n/d", with optional sign on either part. Surrounding
  /// whitespace is ignored; a leading U+2212 minus sign is accepted.
  static Rational parse(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x88 &&
          static_cast<unsigned char>(text[i + 2]) == 0x92) {
        s.push_back('-');
        i += 2;
      } else if (!std::isspace(c)) {
        s.push_back(static_cast<char>(c));
      }
    }
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto valid_int = [](const std::string& v) {
      std::size_t start = (!v.empty() && (v[0] == '-' || v[0] == '+')) ? 1 : 0;
      if (start >= v.size()) return false;
      for (std::size_t i = start; i < v.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
      return true;
    };
    if (!valid_int(num) || !valid_int(den))
      throw std::invalid_argument("invalid rational literal '" + std::string(text) + "'");
    auto strip_plus = [](const std::string& v) { return (!v.empty() && v[0] == '+') ? v.substr(1) : v; };
    mpz_class n(strip_plus(num)), d(strip_plus(den));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }

  /// Exact value of a finite double.
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("Rational::from_double: non-finite value");
    return Rational(mpq_class(v));
  }

  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] int sign() const { return sgn(value_); }

  /// Nearest double when numerator and denominator both fit in 53 bits
  /// (one correctly rounded division); otherwise GMP's truncating conversion.
  [[nodiscard]] double to_double() const {
    const auto& n = value_.get_num();
    const auto& d = value_.get_den();
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 53)
      return n.get_d() / d.get_d();
    return value_.get_d();
  }

  /// Always "num/den", e.g. "3/1", "-1/2".
  [[nodiscard]] std::string to_string() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }
  /// "3", "-1/2": integers without the denominator.
  [[nodiscard]] std::string to_short_string() const {
    return is_integer() ? value_.get_num().get_str() : to_string();
  }

  /// Decimal rounded half away from zero to `places` digits, trailing zeros
  /// dropped: 49/16 -> "3.06", 4 -> "4".
  [[nodiscard]] std::string to_decimal_string(unsigned places) const {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    const mpz_class n = abs(value_.get_num()) * scale * 2 + value_.get_den();
    const mpz_class q = n / (value_.get_den() * 2);
    std::string digits = q.get_str();
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string s = digits.substr(0, digits.size() - places);
    std::string frac = digits.substr(digits.size() - places);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) s += "." + frac;
    return (sign() < 0 && q != 0 ? "-" : "") + s;
  }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_short_string(); }

 private:
  mpq_class value_;
};

/// p^k for integer k >= 0.
inline Rational pow(const Rational& base, std::size_t k) {
  Rational r(1);
  for (std::size_t i = 0; i < k; ++i) r *= base;
  return r;
}

/// True iff r is the square of a rational number.
inline bool is_rational_square(const Rational& r) {
  if (r.sign() < 0) return false;
  return mpz_perfect_square_p(r.numerator().get_mpz_t()) != 0 &&
         mpz_perfect_square_p(r.denominator().get_mpz_t()) != 0;
}

}  // namespace winolab
