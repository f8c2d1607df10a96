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

// Tensor files: CSV with one channel per file, or WGT1 binary
// ("WGT1", u32 ndims, ndims x u32 extent, f64 payload, all little-endian).

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "winolab/convolve.hpp"
#include "winolab/transform_io.hpp"

namespace winolab {

namespace detail {

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    U out{};
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(U); ++i) dst[i] = src[sizeof(U) - 1 - i];
    return out;
  }
}

template <typename U>
void put(std::ostream& out, U v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename U>
U get(std::istream& in, const std::string& file) {
  U v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error(file + ": truncated WGT1 file");
  return to_little(v);
}

}  // namespace detail

inline void write_wgt(const std::filesystem::path& file, const Tensor<double>& t) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out.write("WGT1", 4);
  detail::put(out, static_cast<std::uint32_t>(t.shape.size()));
  for (auto d : t.shape) detail::put(out, static_cast<std::uint32_t>(d));
  for (double v : t.data) detail::put(out, std::bit_cast<std::uint64_t>(v));
}

inline Tensor<double> read_wgt(const std::filesystem::path& file) {
  const std::string name = file.string();
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + name);
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::memcmp(magic.data(), "WGT1", 4) != 0)
    throw std::runtime_error(name + ": bad magic (expected WGT1)");
  const auto ndims = detail::get<std::uint32_t>(in, name);
  if (ndims == 0 || ndims > 8) throw std::runtime_error(name + ": unsupported rank " + std::to_string(ndims));
  std::vector<std::size_t> shape;
  for (std::uint32_t i = 0; i < ndims; ++i) shape.push_back(detail::get<std::uint32_t>(in, name));
  Tensor<double> t(shape);
  for (auto& v : t.data) v = std::bit_cast<double>(detail::get<std::uint64_t>(in, name));
  return t;
}

/// One file per channel; a single .wgt file is read whole. A 2D WGT1 tensor
/// is taken as one channel.
inline Tensor<double> load_tensor(const std::vector<std::string>& files) {
  if (files.empty()) throw std::invalid_argument("no tensor files given");
  if (files.size() == 1 && std::filesystem::path(files[0]).extension() == ".wgt") {
    auto t = read_wgt(files[0]);
    if (t.shape.size() == 2) t.shape.insert(t.shape.begin(), 1);
    if (t.shape.size() != 3) throw std::runtime_error(files[0] + ": expected a 2D or 3D tensor");
    return t;
  }
  std::vector<Matrix<double>> chans;
  for (const auto& f : files) chans.push_back(read_csv(f));
  for (std::size_t i = 1; i < chans.size(); ++i)
    if (chans[i].rows() != chans[0].rows() || chans[i].cols() != chans[0].cols())
      throw std::runtime_error(files[i] + ": channel shape differs from " + files[0]);
  return Tensor<double>::from_channels(chans);
}

/// Zero-pads the spatial extent on the bottom/right up to (rows, cols).
inline Tensor<double> pad_tensor(const Tensor<double>& t, std::size_t rows, std::size_t cols) {
  if (t.shape.size() != 3 || rows < t.shape[1] || cols < t.shape[2])
    throw std::invalid_argument("pad_tensor: target smaller than input");
  Tensor<double> out({t.shape[0], rows, cols}, 0.0);
  for (std::size_t c = 0; c < t.shape[0]; ++c)
    for (std::size_t r = 0; r < t.shape[1]; ++r)
      for (std::size_t k = 0; k < t.shape[2]; ++k)
        out.data[(c * rows + r) * cols + k] = t.data[(c * t.shape[1] + r) * t.shape[2] + k];
  return out;
}

}  // namespace winolab
