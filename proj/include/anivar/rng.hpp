// Copyright 2026 The anivar Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace anivar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Seeded random source with fully specified output streams.
///
/// std::normal_distribution and friends are implementation-defined, so this
/// class derives uniforms and gaussians from the raw mt19937_64 stream
/// directly; the same seed yields the same values on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do {
      u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * M_PI * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Integer in [0, bound).
  std::uint64_t integer(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t raw = 0;
    do {
      raw = engine_();
    } while (raw >= limit);
    return raw % bound;
  }

  Vec gaussian_vector(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  Mat gaussian_matrix(int rows, int cols) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = gaussian();
    return m;
  }

  /// Unit vector drawn uniformly on the sphere.
  Vec unit_vector(int n) {
    Vec v = gaussian_vector(n);
    while (v.norm() < 1e-12) v = gaussian_vector(n);
    return v / v.norm();
  }

  /// Point drawn uniformly from the probability simplex.
  Vec simplex_point(int n) {
    Vec v(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double u = 0.0;
      do {
        u = uniform();
      } while (u <= 0.0);
      v[i] = -std::log(u);
      total += v[i];
    }
    return v / total;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace anivar
