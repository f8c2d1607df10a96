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

// Builds F(2,3) with one quadratic modulus, prints its matrices and runs a
// 2D tile in fp32 next to the exact result.

#include <iostream>

#include "winolab/winolab.hpp"

int main() {
  using namespace winolab;
  AlgorithmConfig cfg;
  cfg.n_h = 3;
  cfg.n_o = 2;
  cfg.moduli = {Modulus::linear(Rational(0)), Modulus::superlinear(Polynomial{Rational(1), Rational(0), Rational(1)}),
                Modulus::infinity()};

  const TransformSet ts = build_transform_set(cfg);
  std::cout << cfg.describe() << ": mu=" << ts.mu << ", 2D ratio " << ratio(cfg, 2).to_decimal_string(2) << "\n\n";
  std::cout << "kernel transform\n" << to_string(ts.kernel_transform) << "\n\n";
  std::cout << "input transform\n" << to_string(ts.input_transform) << "\n\n";
  std::cout << "output transform\n" << to_string(ts.output_transform) << "\n\n";

  const RationalMatrix H{{Rational(1, 2), Rational(-1), Rational(1, 4)},
                         {Rational(0), Rational(2), Rational(-1, 3)},
                         {Rational(1), Rational(1), Rational(-1)}};
  RationalMatrix X(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) X(r, c) = Rational(static_cast<long>(r * 4 + c) - 7, 5);

  const auto exact = winograd_conv_2d(ts, ExactArithmetic{}, H, X);
  const FloatArithmetic fp32{NumberMode::fp32};
  const auto approx = winograd_conv_2d(ts, fp32, detail::lift_all(fp32, H), detail::lift_all(fp32, X));
  std::cout << "exact tile  " << to_string(exact) << "\nfp32 tile   " << to_string(approx) << "\n";
  std::cout << "matches direct: " << std::boolalpha << (exact == direct_conv_2d(H, X)) << "\n";
}
