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

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "winolab/rational.hpp"

namespace winolab {

enum class NumberMode { exact, fp64, fp32, fp16, bf16 };

inline std::string_view to_string(NumberMode m) {
  switch (m) {
    case NumberMode::exact: return "exact";
    case NumberMode::fp64: return "fp64";
    case NumberMode::fp32: return "fp32";
    case NumberMode::fp16: return "fp16";
    case NumberMode::bf16: return "bf16";
  }
  return "?";
}

inline NumberMode parse_number_mode(std::string_view s) {
  if (s == "exact") return NumberMode::exact;
  if (s == "fp64") return NumberMode::fp64;
  if (s == "fp32") return NumberMode::fp32;
  if (s == "fp16" || s == "fp16sim") return NumberMode::fp16;
  if (s == "bf16" || s == "bf16sim") return NumberMode::bf16;
  throw std::invalid_argument("unknown number mode '" + std::string(s) + "' (expected exact|fp64|fp32|fp16|bf16)");
}

enum class Bf16Rounding { truncate, nearest_even };

namespace detail {

inline std::uint32_t float_bits(float f) { return std::bit_cast<std::uint32_t>(f); }
inline float bits_float(std::uint32_t u) { return std::bit_cast<float>(u); }

/// IEEE binary16, round to nearest even, subnormals kept, overflow to +-inf.
inline double round_binary16(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  const double mag = std::fabs(v);
  // Halfway between 65504 and 2^16 rounds to even, which is 2^16: out of range.
  if (mag >= 65520.0) return std::copysign(std::numeric_limits<double>::infinity(), v);
  int exp = std::ilogb(mag);
  if (exp < -14) exp = -14;  // subnormal spacing is 2^-24
  const double quantum = std::ldexp(1.0, exp - 10);
  // v / quantum is exact (power-of-two scaling); nearbyint rounds half to even.
  return std::nearbyint(v / quantum) * quantum;
}

inline float truncate_bf16(float f) {
  if (std::isnan(f)) return f;
  return bits_float(float_bits(f) & 0xFFFF0000u);
}

inline float nearest_even_bf16(float f) {
  if (std::isnan(f)) return f;
  const std::uint32_t u = float_bits(f);
  const std::uint32_t lsb = (u >> 16) & 1u;
  return bits_float((u + 0x7FFFu + lsb) & 0xFFFF0000u);
}

}  // namespace detail

/// Rounds v to the value set of `mode`. fp16 and bf16 go through fp32 first
/// (the operation is taken to have been carried out in single precision).
/// Exact and fp64 are the identity on doubles.
inline double round_to(NumberMode mode, double v, Bf16Rounding bf16 = Bf16Rounding::truncate) {
  switch (mode) {
    case NumberMode::exact:
    case NumberMode::fp64: return v;
    case NumberMode::fp32: return static_cast<double>(static_cast<float>(v));
    case NumberMode::fp16: return detail::round_binary16(static_cast<double>(static_cast<float>(v)));
    case NumberMode::bf16: {
      const float f = static_cast<float>(v);
      return static_cast<double>(bf16 == Bf16Rounding::truncate ? detail::truncate_bf16(f)
                                                                 : detail::nearest_even_bf16(f));
    }
  }
  return v;
}

/// Counters shared by the arithmetic policies and the convolution engine.
struct OpCounters {
  std::uint64_t hadamard_multiplications = 0;
  std::uint64_t overflows = 0;  // finite operands, non-finite rounded result

  OpCounters& operator+=(const OpCounters& o) {
    hadamard_multiplications += o.hadamard_multiplications;
    overflows += o.overflows;
    return *this;
  }
};

/// Exact rational arithmetic policy.
struct ExactArithmetic {
  using value_type = Rational;
  OpCounters* counters = nullptr;

  [[nodiscard]] value_type lift(const Rational& r) const { return r; }
  [[nodiscard]] value_type lift_value(double v) const { return Rational::from_double(v); }
  [[nodiscard]] value_type zero() const { return Rational(0); }
  [[nodiscard]] value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  [[nodiscard]] value_type add(const value_type& a, const value_type& b) const { return a + b; }
  [[nodiscard]] static bool is_zero(const value_type& v) { return v.is_zero(); }
  [[nodiscard]] static double to_double(const value_type& v) { return v.to_double(); }
};

/// Binary floating point with a rounding step after every primitive.
///
/// Values are carried in doubles that always lie in the mode's value set.
/// For fp32 an op on two floats evaluated in double and rounded once is the
/// correctly rounded fp32 result, so this is bit-identical to native float.
struct FloatArithmetic {
  using value_type = double;
  NumberMode mode = NumberMode::fp32;
  Bf16Rounding bf16 = Bf16Rounding::truncate;
  OpCounters* counters = nullptr;

  [[nodiscard]] double round(double v) const { return round_to(mode, v, bf16); }
  [[nodiscard]] value_type lift(const Rational& r) const { return round(r.to_double()); }
  [[nodiscard]] value_type lift_value(double v) const { return round(v); }
  [[nodiscard]] value_type zero() const { return 0.0; }
  [[nodiscard]] value_type mul(double a, double b) const { return checked(a, b, round(a * b)); }
  [[nodiscard]] value_type add(double a, double b) const { return checked(a, b, round(a + b)); }
  [[nodiscard]] static bool is_zero(double v) { return v == 0.0; }
  [[nodiscard]] static double to_double(double v) { return v; }

 private:
  double checked(double a, double b, double r) const {
    if (counters && !std::isfinite(r) && std::isfinite(a) && std::isfinite(b)) ++counters->overflows;
    return r;
  }
};

/// Sum of u_i * v_i in ascending i, rounding after every multiply and add.
template <typename Arith>
typename Arith::value_type fp_dot(const Arith& arith, std::span<const typename Arith::value_type> u,
                                  std::span<const typename Arith::value_type> v) {
  if (u.size() != v.size()) throw std::invalid_argument("fp_dot: length mismatch");
  auto acc = arith.zero();
  for (std::size_t i = 0; i < u.size(); ++i) acc = arith.add(acc, arith.mul(u[i], v[i]));
  return acc;
}

struct EuclideanError {
  double value = 0.0;
  bool overflow = false;
};

/// sqrt(sum (y_i - ref_i)^2) in fp64; +inf with the overflow flag when y
/// holds a non-finite entry.
inline EuclideanError euclidean_error(std::span<const double> y, std::span<const double> ref) {
  if (y.size() != ref.size()) throw std::invalid_argument("euclidean_error: shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) return {std::numeric_limits<double>::infinity(), true};
    const double d = y[i] - ref[i];
    sum += d * d;
  }
  return {std::sqrt(sum), false};
}

}  // namespace winolab
