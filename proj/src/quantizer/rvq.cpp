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

#include "quantizer/rvq.hpp"

#include <limits>
#include <random>
#include <string>

#include "common/error.hpp"

namespace dnsc::quantizer {

namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

ResidualVq::ResidualVq(std::size_t stages, std::size_t codebook_size, std::size_t dim,
                       std::vector<double> codebooks)
    : stages_(stages), codebook_size_(codebook_size), dim_(dim), codebooks_(std::move(codebooks)) {
  Require(codebook_size > 0, ErrorKind::kConfig, "empty codebook");
  Require(stages > 0 && dim > 0, ErrorKind::kConfig, "RVQ needs at least one stage and dimension");
  Require(codebooks_.size() == stages * codebook_size * dim, ErrorKind::kConfig,
          "codebook storage does not match stages x size x dim");
}

std::size_t ResidualVq::bits_per_frame() const {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < codebook_size_) ++bits;
  return stages_ * bits;
}

std::span<const double> ResidualVq::Codevector(std::size_t stage, std::size_t index) const {
  return {codebooks_.data() + (stage * codebook_size_ + index) * dim_, dim_};
}

std::size_t ResidualVq::Nearest(std::size_t stage, std::span<const double> r) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < codebook_size_; ++k) {
    const double d = SquaredDistance(r, Codevector(stage, k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

std::vector<std::uint32_t> ResidualVq::Quantize(std::span<const double> x,
                                                std::size_t stages_used) const {
  Require(x.size() == dim_, ErrorKind::kShape,
          "vector has " + std::to_string(x.size()) + " entries, RVQ expects " + std::to_string(dim_));
  if (stages_used == 0 || stages_used > stages_) stages_used = stages_;
  std::vector<double> residual(x.begin(), x.end());
  std::vector<std::uint32_t> out;
  out.reserve(stages_used);
  for (std::size_t s = 0; s < stages_used; ++s) {
    const std::size_t k = Nearest(s, residual);
    const auto c = Codevector(s, k);
    for (std::size_t i = 0; i < dim_; ++i) residual[i] -= c[i];
    out.push_back(static_cast<std::uint32_t>(k));
  }
  return out;
}

std::vector<double> ResidualVq::Dequantize(std::span<const std::uint32_t> indices) const {
  Require(indices.size() <= stages_, ErrorKind::kShape, "more stage indices than RVQ stages");
  std::vector<double> out(dim_, 0.0);
  for (std::size_t s = 0; s < indices.size(); ++s) {
    Require(indices[s] < codebook_size_, ErrorKind::kData, "RVQ index out of range");
    const auto c = Codevector(s, indices[s]);
    for (std::size_t i = 0; i < dim_; ++i) out[i] += c[i];
  }
  return out;
}

ResidualVq ResidualVq::Fit(const nn::Tensor& data, std::size_t stages, std::size_t codebook_size,
                           int iterations, std::uint64_t seed) {
  Require(data.rank() == 2 && data.rows() > 0, ErrorKind::kShape, "RVQ training data must be rows x dim");
  Require(codebook_size > 0, ErrorKind::kConfig, "empty codebook");
  const std::size_t n = data.rows();
  const std::size_t dim = data.cols();
  std::vector<double> books(stages * codebook_size * dim, 0.0);
  std::vector<double> residual(data.data().begin(), data.data().end());
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> assign(n, 0);

  for (std::size_t s = 0; s < stages; ++s) {
    double* book = books.data() + s * codebook_size * dim;
    // Seed the free centroids from random residual rows; slot 0 stays zero.
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 1; k < codebook_size; ++k) {
      const std::size_t row = pick(rng);
      std::copy_n(residual.begin() + row * dim, dim, book + k * dim);
    }
    for (int it = 0; it < iterations; ++it) {
      for (std::size_t r = 0; r < n; ++r) {
        std::span<const double> v(residual.data() + r * dim, dim);
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < codebook_size; ++k) {
          const double d = SquaredDistance(v, {book + k * dim, dim});
          if (d < best_d) {
            best_d = d;
            assign[r] = k;
          }
        }
      }
      std::vector<double> sums(codebook_size * dim, 0.0);
      std::vector<std::size_t> counts(codebook_size, 0);
      for (std::size_t r = 0; r < n; ++r) {
        ++counts[assign[r]];
        for (std::size_t i = 0; i < dim; ++i) sums[assign[r] * dim + i] += residual[r * dim + i];
      }
      for (std::size_t k = 1; k < codebook_size; ++k) {
        if (counts[k] == 0) {
          // Dead centroid: restart from a random row.
          const std::size_t row = pick(rng);
          std::copy_n(residual.begin() + row * dim, dim, book + k * dim);
          continue;
        }
        for (std::size_t i = 0; i < dim; ++i) book[k * dim + i] = sums[k * dim + i] / counts[k];
      }
    }
    ResidualVq partial(s + 1, codebook_size, dim,
                       std::vector<double>(books.begin(), books.begin() + (s + 1) * codebook_size * dim));
    for (std::size_t r = 0; r < n; ++r) {
      std::span<const double> v(residual.data() + r * dim, dim);
      const std::size_t k = partial.Nearest(s, v);
      for (std::size_t i = 0; i < dim; ++i) residual[r * dim + i] -= book[k * dim + i];
    }
  }
  return ResidualVq(stages, codebook_size, dim, std::move(books));
}

}  // namespace dnsc::quantizer
