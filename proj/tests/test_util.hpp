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

#include <random>
#include <string>
#include <vector>

#include "winolab/winolab.hpp"

namespace winolab::test {

inline Rational Q(const std::string& s) { return Rational::parse(s); }

/// Constant term first.
inline Polynomial P(std::initializer_list<long> coeffs) {
  std::vector<Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  return Polynomial(std::move(c));
}

inline RationalMatrix M(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<long>> r(rows.begin(), rows.end());
  RationalMatrix m(r.size(), r.empty() ? 0 : rows.begin()->size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

inline PointSet points(std::initializer_list<const char*> items) {
  PointSet out;
  for (const char* s : items) out.push_back(RootPoint::parse(s));
  return out;
}

inline Polynomial random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int i = 0; i <= degree; ++i) c.emplace_back(num(rng), den(rng));
  if (c.back().is_zero()) c.back() = Rational(1);
  return Polynomial(std::move(c));
}

inline Modulus quad(long c0, long c1) { return Modulus::superlinear(Polynomial{Rational(c0), Rational(c1), Rational(1)}); }

}  // namespace winolab::test
