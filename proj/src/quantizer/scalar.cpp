// Copyright 2026 The DNSC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quantizer/scalar.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace dnsc::quantizer {

int SqGeometry::bits_per_dim() const {
  int bits = 0;
  while ((1 << bits) < levels) ++bits;
  return bits;
}

double LevelValue(std::uint32_t index, int levels) {
  return -1.0 + 2.0 * static_cast<double>(index) / (levels - 1);
}

std::uint32_t NearestLevel(double v, int levels) {
  Require(std::isfinite(v), ErrorKind::kData, "non-finite value in quantizer input");
  v = std::clamp(v, -1.0, 1.0);
  const double step = 2.0 / (levels - 1);
  auto lo = static_cast<long>(std::floor((v + 1.0) / step));
  lo = std::clamp(lo, 0L, static_cast<long>(levels - 2));
  const auto lower = static_cast<std::uint32_t>(lo);
  const double d_lo = v - LevelValue(lower, levels);
  const double d_hi = LevelValue(lower + 1, levels) - v;
  return d_hi < d_lo ? lower + 1 : lower;
}

namespace {

void CheckGeometry(const SqGeometry& g) {
  Require(g.levels >= 2, ErrorKind::kConfig, "scalar quantizer needs at least 2 levels");
  Require(g.input_dim > 0 && g.code_dim > 0, ErrorKind::kConfig,
          "scalar quantizer dimensions must be positive");
}

}  // namespace

ScalarQuantizer::ScalarQuantizer(const SqGeometry& geometry, nn::ParameterSet& params,
                                 const std::string& prefix, nn::Rng& rng)
    : geometry_(geometry) {
  CheckGeometry(geometry);
  // Down projection starts small so codes begin inside the clamp range.
  down_ = params.Add(prefix + "down_proj",
                     nn::KaimingUniform({geometry.code_dim, geometry.input_dim},
                                        geometry.input_dim, rng, 0.5));
  up_ = params.Add(prefix + "up_proj",
                   nn::KaimingUniform({geometry.input_dim, geometry.code_dim}, geometry.code_dim,
                                      rng));
}

ScalarQuantizer ScalarQuantizer::Identity(std::size_t dim, int levels) {
  ScalarQuantizer q;
  q.geometry_ = {dim, dim, levels};
  CheckGeometry(q.geometry_);
  nn::Tensor eye({dim, dim}, 0.0);
  for (std::size_t i = 0; i < dim; ++i) eye.at(i, i) = 1.0;
  q.down_ = std::make_shared<nn::Parameter>(nn::Parameter{"down_proj", eye, {}});
  q.up_ = std::make_shared<nn::Parameter>(nn::Parameter{"up_proj", eye, {}});
  return q;
}

nn::Var ScalarQuantizer::Down(const nn::Var& x) const {
  return nn::Linear(x, nn::Leaf(down_), nullptr);
}

nn::Var ScalarQuantizer::Up(const nn::Var& codes) const {
  return nn::Linear(codes, nn::Leaf(up_), nullptr);
}

nn::Tensor ScalarQuantizer::Codes(const nn::Tensor& x) const {
  Require(x.rank() == 2 && x.rows() == geometry_.input_dim, ErrorKind::kShape,
          "quantizer input must be input_dim x frames");
  Require(x.AllFinite(), ErrorKind::kData, "non-finite value in quantizer input");
  return nn::Clamp(Down(nn::Constant(x)), -1.0, 1.0).value();
}

std::vector<std::uint32_t> ScalarQuantizer::QuantizeFrame(std::span<const double> x) const {
  Require(x.size() == geometry_.input_dim, ErrorKind::kShape,
          "frame has " + std::to_string(x.size()) + " entries, quantizer expects " +
              std::to_string(geometry_.input_dim));
  const IndexMatrix m = Quantize(nn::Tensor({x.size(), 1}, std::vector<double>(x.begin(), x.end())));
  return m.data;
}

std::vector<double> ScalarQuantizer::DequantizeFrame(std::span<const std::uint32_t> indices) const {
  IndexMatrix m(1, indices.size());
  std::copy(indices.begin(), indices.end(), m.data.begin());
  return Dequantize(m).data();
}

IndexMatrix ScalarQuantizer::Quantize(const nn::Tensor& x) const {
  const nn::Tensor codes = Codes(x);
  const std::size_t frames = codes.cols();
  IndexMatrix out(frames, geometry_.code_dim);
  for (std::size_t d = 0; d < geometry_.code_dim; ++d) {
    for (std::size_t f = 0; f < frames; ++f) {
      out.at(f, d) = NearestLevel(codes.at(d, f), geometry_.levels);
    }
  }
  return out;
}

nn::Tensor ScalarQuantizer::Dequantize(const IndexMatrix& indices) const {
  Require(indices.dims == geometry_.code_dim, ErrorKind::kShape,
          "index matrix has " + std::to_string(indices.dims) + " dims, quantizer expects " +
              std::to_string(geometry_.code_dim));
  nn::Tensor codes({geometry_.code_dim, indices.frames});
  for (std::size_t f = 0; f < indices.frames; ++f) {
    for (std::size_t d = 0; d < geometry_.code_dim; ++d) {
      const std::uint32_t i = indices.at(f, d);
      if (i >= static_cast<std::uint32_t>(geometry_.levels)) {
        Fail(ErrorKind::kData, "quantizer index " + std::to_string(i) + " out of range [0, " +
                                   std::to_string(geometry_.levels) + ")");
      }
      codes.at(d, f) = LevelValue(i, geometry_.levels);
    }
  }
  return Up(nn::Constant(std::move(codes))).value();
}

nn::Var ScalarQuantizer::NoisyForward(const nn::Var& x, nn::Rng& rng) const {
  const nn::Var codes = nn::Clamp(Down(x), -1.0, 1.0);
  const double half = geometry_.step() / 2.0;
  std::uniform_real_distribution<double> u(-half, half);
  nn::Tensor noise(codes.shape());
  for (double& v : noise.data()) v = u(rng);
  return Up(nn::Add(codes, nn::Constant(std::move(noise))));
}

nn::Var ScalarQuantizer::CleanForward(const nn::Var& x) const {
  return Up(nn::Clamp(Down(x), -1.0, 1.0));
}

}  // namespace dnsc::quantizer
