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

#include <stdexcept>
#include <string>
#include <vector>

#include "winolab/matrix.hpp"

namespace winolab {

/// The three exact matrices of one fast algorithm, in correlation form:
///
///   y = output_transform * ((kernel_transform * h) .* (input_transform * x))
///
/// computes the valid correlation y_j = sum_k h_k x_{j+k}. In the usual
/// 2D notation A^T (G H G^T .* B^T X B) A this is G = kernel_transform,
/// B^T = input_transform and A^T = output_transform.
struct TransformSet {
  std::size_t n_h = 0;
  std::size_t n_o = 0;
  std::size_t mu = 0;
  RationalMatrix kernel_transform;  // mu x n_h
  RationalMatrix input_transform;   // mu x n_x
  RationalMatrix output_transform;  // n_o x mu
  std::vector<std::string> moduli;  // labels, for reporting only

  [[nodiscard]] std::size_t n_x() const { return n_h + n_o - 1; }

  void check_shapes() const {
    auto expect = [](const RationalMatrix& m, std::size_t r, std::size_t c, const char* name) {
      if (m.rows() != r || m.cols() != c)
        throw std::invalid_argument(std::string(name) + " is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected " + std::to_string(r) + "x" +
                                    std::to_string(c));
    };
    if (n_h == 0 || n_o == 0 || mu == 0) throw std::invalid_argument("TransformSet: zero dimension");
    expect(kernel_transform, mu, n_h, "kernel transform");
    expect(input_transform, mu, n_x(), "input transform");
    expect(output_transform, n_o, mu, "output transform");
  }
};

}  // namespace winolab
