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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "winolab/matrix.hpp"
#include "winolab/precision.hpp"
#include "winolab/transform_set.hpp"

namespace winolab {

/// Dense tensor, row-major; shape is (channels, rows, cols) or (channels, length).
template <typename T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s, const T& fill = T{}) : shape(std::move(s)) {
    data.assign(element_count(shape), fill);
  }
  Tensor(std::vector<std::size_t> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != element_count(shape)) throw std::invalid_argument("Tensor: data length does not match shape");
  }

  static std::size_t element_count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
  }

  [[nodiscard]] std::size_t channels() const { return shape.empty() ? 0 : shape[0]; }

  /// Channel c of a (channels, rows, cols) tensor.
  [[nodiscard]] Matrix<T> channel(std::size_t c) const {
    if (shape.size() != 3) throw std::invalid_argument("Tensor::channel: expected a 3D tensor");
    const std::size_t n = shape[1] * shape[2];
    return Matrix<T>(shape[1], shape[2], std::vector<T>(data.begin() + c * n, data.begin() + (c + 1) * n));
  }

  static Tensor from_channels(const std::vector<Matrix<T>>& chans) {
    if (chans.empty()) throw std::invalid_argument("Tensor: no channels");
    Tensor t({chans.size(), chans[0].rows(), chans[0].cols()});
    std::size_t off = 0;
    for (const auto& m : chans) {
      if (m.rows() != chans[0].rows() || m.cols() != chans[0].cols())
        throw std::invalid_argument("Tensor: channel shapes differ");
      std::copy(m.data().begin(), m.data().end(), t.data.begin() + off);
      off += m.data().size();
    }
    return t;
  }
};

/// Tile layout over one spatial dimension pair. Consecutive input tiles
/// start n_o apart and therefore overlap by n_h - 1.
struct TilingPlan {
  std::size_t input_rows = 0, input_cols = 0;
  std::size_t output_rows = 0, output_cols = 0;
  std::size_t tile_input = 0;   // n_x
  std::size_t tile_output = 0;  // n_o
  std::size_t stride = 0;       // n_o
  std::size_t tiles_rows = 0, tiles_cols = 0;
};

inline TilingPlan plan_tiling(std::size_t rows, std::size_t cols, std::size_t n_h, std::size_t n_o) {
  const std::size_t n_x = n_h + n_o - 1;
  if (rows < n_x || cols < n_x)
    throw std::invalid_argument("tiling: input " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " smaller than one tile (" + std::to_string(n_x) + ")");
  TilingPlan p;
  p.input_rows = rows;
  p.input_cols = cols;
  p.output_rows = rows - n_h + 1;
  p.output_cols = cols - n_h + 1;
  if (p.output_rows % n_o != 0 || p.output_cols % n_o != 0)
    throw std::invalid_argument("tiling: output " + std::to_string(p.output_rows) + "x" +
                                std::to_string(p.output_cols) + " is not a multiple of the tile output " +
                                std::to_string(n_o) + " (pad the input)");
  p.tile_input = n_x;
  p.tile_output = n_o;
  p.stride = n_o;
  p.tiles_rows = p.output_rows / n_o;
  p.tiles_cols = p.output_cols / n_o;
  return p;
}

namespace detail {

template <typename Arith, typename T>
typename Arith::value_type lift_any(const Arith& arith, const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return arith.lift(v);
  else
    return arith.lift_value(static_cast<double>(v));
}

template <typename Arith, typename T>
std::vector<typename Arith::value_type> lift_all(const Arith& arith, std::span<const T> v) {
  std::vector<typename Arith::value_type> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(lift_any(arith, e));
  return out;
}

template <typename Arith, typename T>
Matrix<typename Arith::value_type> lift_all(const Arith& arith, const Matrix<T>& m) {
  return Matrix<typename Arith::value_type>(m.rows(), m.cols(), lift_all(arith, std::span<const T>(m.data())));
}

/// m * x with per-op rounding. Entries of m that are exactly zero are
/// skipped (every real kernel drops them; it also keeps 0 * inf from
/// manufacturing NaN after an overflow).
template <typename Arith>
std::vector<typename Arith::value_type> apply(const Arith& arith, const Matrix<typename Arith::value_type>& m,
                                              std::span<const typename Arith::value_type> x) {
  if (m.cols() != x.size()) throw std::invalid_argument("transform: dimension mismatch");
  std::vector<typename Arith::value_type> y(m.rows(), arith.zero());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    bool started = false;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (Arith::is_zero(m(r, c))) continue;
      auto p = arith.mul(m(r, c), x[c]);
      y[r] = started ? arith.add(y[r], p) : p;
      started = true;
    }
  }
  return y;
}

/// m * x * m^T: columns of x first, then rows.
template <typename Arith>
Matrix<typename Arith::value_type> sandwich(const Arith& arith, const Matrix<typename Arith::value_type>& m,
                                            const Matrix<typename Arith::value_type>& x) {
  using V = typename Arith::value_type;
  if (m.cols() != x.rows() || x.rows() != x.cols()) throw std::invalid_argument("transform: dimension mismatch");
  const std::size_t n = x.rows(), k = m.rows();
  Matrix<V> t(k, n, arith.zero());  // m * x
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<V> xc(n);
    for (std::size_t i = 0; i < n; ++i) xc[i] = x(i, col);
    auto yc = apply(arith, m, std::span<const V>(xc));
    for (std::size_t i = 0; i < k; ++i) t(i, col) = std::move(yc[i]);
  }
  Matrix<V> out(k, k, arith.zero());  // (m * x) * m^T
  for (std::size_t r = 0; r < k; ++r) {
    auto yr = apply(arith, m, t.row(r));
    for (std::size_t i = 0; i < k; ++i) out(r, i) = std::move(yr[i]);
  }
  return out;
}

}  // namespace detail

/// The transform matrices of one TransformSet lowered once to a number mode.
template <typename Arith>
struct LoweredTransforms {
  using V = typename Arith::value_type;
  std::size_t n_h = 0, n_o = 0, mu = 0;
  Matrix<V> kernel, input, output;

  LoweredTransforms(const TransformSet& ts, const Arith& arith)
      : n_h(ts.n_h), n_o(ts.n_o), mu(ts.mu),
        kernel(detail::lift_all(arith, ts.kernel_transform)),
        input(detail::lift_all(arith, ts.input_transform)),
        output(detail::lift_all(arith, ts.output_transform)) {
    ts.check_shapes();
  }
  [[nodiscard]] std::size_t n_x() const { return n_h + n_o - 1; }
};

/// Valid correlation y_j = sum_k h_k x_{j+k}, ascending k.
template <typename Arith>
std::vector<typename Arith::value_type> direct_conv_1d(const Arith& arith,
                                                       std::span<const typename Arith::value_type> h,
                                                       std::span<const typename Arith::value_type> x) {
  if (h.empty() || x.size() < h.size())
    throw std::invalid_argument("direct_conv_1d: need 1 <= kernel length <= input length");
  const std::size_t n_o = x.size() - h.size() + 1;
  std::vector<typename Arith::value_type> y(n_o, arith.zero());
  for (std::size_t j = 0; j < n_o; ++j)
    for (std::size_t k = 0; k < h.size(); ++k) y[j] = arith.add(y[j], arith.mul(h[k], x[j + k]));
  return y;
}

inline std::vector<Rational> direct_conv_1d(std::span<const Rational> h, std::span<const Rational> x) {
  return direct_conv_1d(ExactArithmetic{}, h, x);
}

/// Full 2D sliding dot product, row-major accumulation over the kernel.
template <typename Arith>
Matrix<typename Arith::value_type> direct_conv_2d(const Arith& arith, const Matrix<typename Arith::value_type>& h,
                                                  const Matrix<typename Arith::value_type>& x) {
  if (h.rows() == 0 || h.cols() == 0 || x.rows() < h.rows() || x.cols() < h.cols())
    throw std::invalid_argument("direct_conv_2d: kernel must fit inside the input");
  const std::size_t orow = x.rows() - h.rows() + 1, ocol = x.cols() - h.cols() + 1;
  Matrix<typename Arith::value_type> y(orow, ocol, arith.zero());
  for (std::size_t i = 0; i < orow; ++i)
    for (std::size_t j = 0; j < ocol; ++j) {
      auto acc = arith.zero();
      for (std::size_t u = 0; u < h.rows(); ++u)
        for (std::size_t v = 0; v < h.cols(); ++v) acc = arith.add(acc, arith.mul(h(u, v), x(i + u, j + v)));
      y(i, j) = std::move(acc);
    }
  return y;
}

inline RationalMatrix direct_conv_2d(const RationalMatrix& h, const RationalMatrix& x) {
  return direct_conv_2d(ExactArithmetic{}, h, x);
}

/// Reverses the kernel, turning the correlation engine into true convolution.
template <typename T>
std::vector<T> flip_kernel(std::vector<T> h) {
  std::reverse(h.begin(), h.end());
  return h;
}
template <typename T>
Matrix<T> flip_kernel(const Matrix<T>& h) {
  Matrix<T> f(h.rows(), h.cols());
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c) f(r, c) = h(h.rows() - 1 - r, h.cols() - 1 - c);
  return f;
}

template <typename Arith>
std::vector<typename Arith::value_type> winograd_conv_1d(const LoweredTransforms<Arith>& lt, const Arith& arith,
                                                         std::span<const typename Arith::value_type> h,
                                                         std::span<const typename Arith::value_type> x) {
  using V = typename Arith::value_type;
  if (h.size() != lt.n_h || x.size() != lt.n_x())
    throw std::invalid_argument("winograd_conv_1d: expected kernel " + std::to_string(lt.n_h) + " and input " +
                                std::to_string(lt.n_x()) + ", got " + std::to_string(h.size()) + " and " +
                                std::to_string(x.size()));
  auto u = detail::apply(arith, lt.kernel, h);
  auto v = detail::apply(arith, lt.input, x);
  std::vector<V> m(lt.mu);
  for (std::size_t i = 0; i < lt.mu; ++i) m[i] = arith.mul(u[i], v[i]);
  if (arith.counters) arith.counters->hadamard_multiplications += lt.mu;
  return detail::apply(arith, lt.output, std::span<const V>(m));
}

template <typename Arith>
std::vector<typename Arith::value_type> winograd_conv_1d(const TransformSet& ts, const Arith& arith,
                                                         std::span<const typename Arith::value_type> h,
                                                         std::span<const typename Arith::value_type> x) {
  return winograd_conv_1d(LoweredTransforms<Arith>(ts, arith), arith, h, x);
}

/// output * ((kernel H kernel^T) .* (input X input^T)) * output^T
template <typename Arith>
Matrix<typename Arith::value_type> winograd_conv_2d(const LoweredTransforms<Arith>& lt, const Arith& arith,
                                                    const Matrix<typename Arith::value_type>& H,
                                                    const Matrix<typename Arith::value_type>& X) {
  if (H.rows() != lt.n_h || H.cols() != lt.n_h || X.rows() != lt.n_x() || X.cols() != lt.n_x())
    throw std::invalid_argument("winograd_conv_2d: expected kernel " + std::to_string(lt.n_h) + "x" +
                                std::to_string(lt.n_h) + " and input " + std::to_string(lt.n_x()) + "x" +
                                std::to_string(lt.n_x()));
  const auto U = detail::sandwich(arith, lt.kernel, H);
  const auto Vt = detail::sandwich(arith, lt.input, X);
  Matrix<typename Arith::value_type> M(lt.mu, lt.mu);
  for (std::size_t i = 0; i < M.data().size(); ++i) M.data()[i] = arith.mul(U.data()[i], Vt.data()[i]);
  if (arith.counters) arith.counters->hadamard_multiplications += lt.mu * lt.mu;
  return detail::sandwich(arith, lt.output, M);
}

template <typename Arith>
Matrix<typename Arith::value_type> winograd_conv_2d(const TransformSet& ts, const Arith& arith,
                                                    const Matrix<typename Arith::value_type>& H,
                                                    const Matrix<typename Arith::value_type>& X) {
  return winograd_conv_2d(LoweredTransforms<Arith>(ts, arith), arith, H, X);
}

/// Multi-channel tiled 2D correlation. H is (ch, n_h, n_h), X is (ch, R, C)
/// with (R - n_h + 1) and (C - n_h + 1) multiples of n_o. Hadamard products
/// are summed over channels in the transformed domain (ascending channel),
/// then each tile is output-transformed once. Tiles may run on `threads`
/// workers; assembly and counters are deterministic.
template <typename Arith, typename T>
Matrix<typename Arith::value_type> tiled_conv_2d(const TransformSet& ts, const Arith& arith, const Tensor<T>& H,
                                                 const Tensor<T>& X, unsigned threads = 1) {
  using V = typename Arith::value_type;
  if (H.shape.size() != 3 || X.shape.size() != 3) throw std::invalid_argument("tiled_conv_2d: expected 3D tensors");
  if (H.shape[0] != X.shape[0])
    throw std::invalid_argument("tiled_conv_2d: kernel has " + std::to_string(H.shape[0]) + " channels, input has " +
                                std::to_string(X.shape[0]));
  if (H.shape[1] != ts.n_h || H.shape[2] != ts.n_h)
    throw std::invalid_argument("tiled_conv_2d: kernel must be " + std::to_string(ts.n_h) + "x" +
                                std::to_string(ts.n_h));
  const TilingPlan plan = plan_tiling(X.shape[1], X.shape[2], ts.n_h, ts.n_o);
  const LoweredTransforms<Arith> lt(ts, arith);
  const std::size_t channels = H.shape[0], n_x = lt.n_x(), n_o = ts.n_o, mu = ts.mu;

  std::vector<Matrix<V>> kernels_t;  // transformed once per channel
  std::vector<Matrix<V>> inputs;
  for (std::size_t c = 0; c < channels; ++c) {
    kernels_t.push_back(detail::sandwich(arith, lt.kernel, detail::lift_all(arith, H.channel(c))));
    inputs.push_back(detail::lift_all(arith, X.channel(c)));
  }

  Matrix<V> out(plan.output_rows, plan.output_cols, arith.zero());
  const std::size_t tile_count = plan.tiles_rows * plan.tiles_cols;
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tile_count)));
  std::vector<OpCounters> worker_counters(workers);

  auto run = [&](unsigned w) {
    Arith local = arith;
    local.counters = arith.counters ? &worker_counters[w] : nullptr;
    for (std::size_t t = w; t < tile_count; t += workers) {
      const std::size_t tr = t / plan.tiles_cols, tc = t % plan.tiles_cols;
      Matrix<V> acc(mu, mu, local.zero());
      for (std::size_t c = 0; c < channels; ++c) {
        const auto tile = inputs[c].block(tr * plan.stride, tc * plan.stride, n_x, n_x);
        const auto Vt = detail::sandwich(local, lt.input, tile);
        for (std::size_t i = 0; i < acc.data().size(); ++i) {
          auto p = local.mul(kernels_t[c].data()[i], Vt.data()[i]);
          acc.data()[i] = c == 0 ? p : local.add(acc.data()[i], p);
        }
        if (local.counters) local.counters->hadamard_multiplications += mu * mu;
      }
      const auto Y = detail::sandwich(local, lt.output, acc);
      for (std::size_t i = 0; i < n_o; ++i)
        for (std::size_t j = 0; j < n_o; ++j) out(tr * n_o + i, tc * n_o + j) = Y(i, j);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  if (arith.counters)
    for (const auto& wc : worker_counters) *arith.counters += wc;
  return out;
}

/// Channel-summed direct correlation with the same layout as tiled_conv_2d.
template <typename Arith, typename T>
Matrix<typename Arith::value_type> direct_conv_2d_channels(const Arith& arith, const Tensor<T>& H, const Tensor<T>& X) {
  if (H.shape.size() != 3 || X.shape.size() != 3 || H.shape[0] != X.shape[0])
    throw std::invalid_argument("direct_conv_2d_channels: expected matching 3D tensors");
  Matrix<typename Arith::value_type> out;
  for (std::size_t c = 0; c < H.shape[0]; ++c) {
    auto y = direct_conv_2d(arith, detail::lift_all(arith, H.channel(c)), detail::lift_all(arith, X.channel(c)));
    if (c == 0) {
      out = std::move(y);
    } else {
      for (std::size_t i = 0; i < y.data().size(); ++i) out.data()[i] = arith.add(out.data()[i], y.data()[i]);
    }
  }
  return out;
}

namespace detail {

/// Rationals with numerator in [-9, 9] and denominator in [1, 4].
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}
  Rational operator()() { return Rational(num_(rng_), den_(rng_)); }
  std::vector<Rational> vector(std::size_t n) {
    std::vector<Rational> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back((*this)());
    return v;
  }
  RationalMatrix matrix(std::size_t r, std::size_t c) { return RationalMatrix(r, c, vector(r * c)); }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<long> num_{-9, 9};
  std::uniform_int_distribution<long> den_{1, 4};
};

}  // namespace detail

/// True iff exact-mode Winograd matches direct correlation, in 1D and 2D,
/// on `trials` seeded random rational inputs each.
inline bool verify_exact(const TransformSet& ts, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("verify_exact: trials must be >= 1");
  const ExactArithmetic exact;
  const LoweredTransforms<ExactArithmetic> lt(ts, exact);
  detail::RationalSampler sample(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto h = sample.vector(ts.n_h);
    const auto x = sample.vector(ts.n_x());
    if (winograd_conv_1d(lt, exact, std::span<const Rational>(h), std::span<const Rational>(x)) !=
        direct_conv_1d(h, x))
      return false;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const auto H = sample.matrix(ts.n_h, ts.n_h);
    const auto X = sample.matrix(ts.n_x(), ts.n_x());
    if (!(winograd_conv_2d(lt, exact, H, X) == direct_conv_2d(H, X))) return false;
  }
  return true;
}

/// Largest relative L2 deviation of exact-mode Winograd from direct
/// correlation over seeded rational trials (1D and 2D). Zero iff exact on
/// every trial; used for transforms that were stored lossily in fp64.
inline double max_relative_deviation(const TransformSet& ts, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("max_relative_deviation: trials must be >= 1");
  const ExactArithmetic exact;
  const LoweredTransforms<ExactArithmetic> lt(ts, exact);
  detail::RationalSampler sample(seed);
  auto deviation = [](const std::vector<Rational>& y, const std::vector<Rational>& ref) {
    Rational diff2, ref2;
    for (std::size_t i = 0; i < y.size(); ++i) {
      diff2 += (y[i] - ref[i]) * (y[i] - ref[i]);
      ref2 += ref[i] * ref[i];
    }
    if (ref2.is_zero()) return diff2.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt((diff2 / ref2).to_double());
  };
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto h = sample.vector(ts.n_h);
    const auto x = sample.vector(ts.n_x());
    worst = std::max(worst, deviation(winograd_conv_1d(lt, exact, std::span<const Rational>(h),
                                                       std::span<const Rational>(x)),
                                      direct_conv_1d(h, x)));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const auto H = sample.matrix(ts.n_h, ts.n_h);
    const auto X = sample.matrix(ts.n_x(), ts.n_x());
    worst = std::max(worst, deviation(winograd_conv_2d(lt, exact, H, X).data(), direct_conv_2d(H, X).data()));
  }
  return worst;
}

}  // namespace winolab
