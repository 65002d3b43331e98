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

#include "anivar/plane.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anivar {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

Plane::Plane(int ambient_dim, int plane_dim, Mat projection)
    : ambient_dim_(ambient_dim), plane_dim_(plane_dim), projection_(std::move(projection)) {
  require(ambient_dim_ > 0, "plane: ambient dimension must be positive");
  require(plane_dim_ > 0 && plane_dim_ < ambient_dim_,
          "plane: dimension must satisfy 0 < d < n");
  require(projection_.rows() == ambient_dim_ && projection_.cols() == ambient_dim_,
          "plane: projection matrix must be n x n");
  const double residual = invariant_residual();
  require(residual <= kProjectionTol,
          "plane: projection invariants violated (residual " +
              std::to_string(residual) + ")");
}

double Plane::invariant_residual() const {
  const double idem = (projection_ * projection_ - projection_).norm();
  const double sym = (projection_.transpose() - projection_).norm();
  const double trace = std::abs(projection_.trace() - static_cast<double>(plane_dim_));
  return std::max(idem, std::max(sym, trace));
}

Plane Plane::from_basis(const Mat& basis) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  require(n > 0 && k > 0 && k < n, "from_basis: need 0 < k < n column vectors");

  Eigen::ColPivHouseholderQR<Mat> qr(basis);
  require(qr.rank() == k, "from_basis: degenerate basis (rank below k)");

  const Mat q = qr.householderQ() * Mat::Identity(n, k);
  Mat projection = q * q.transpose();
  // Symmetrize away the last bits of roundoff.
  projection = 0.5 * (projection + projection.transpose().eval());
  return Plane(n, k, std::move(projection));
}

Plane Plane::from_normal(const Vec& normal) {
  const int n = static_cast<int>(normal.size());
  require(n >= 2, "from_normal: ambient dimension must be at least 2");
  const double len = normal.norm();
  require(std::abs(len - 1.0) <= 1e-6, "from_normal: input is not a unit vector");
  const Vec unit = normal / len;
  Mat projection = Mat::Identity(n, n) - unit * unit.transpose();
  return Plane(n, n - 1, std::move(projection));
}

Mat Plane::complement() const {
  return Mat::Identity(ambient_dim_, ambient_dim_) - projection_;
}

Mat Plane::orthonormal_basis() const {
  Eigen::SelfAdjointEigenSolver<Mat> eig(projection_);
  // Eigenvalues ascend; the plane is the span of the top d eigenvectors.
  return eig.eigenvectors().rightCols(plane_dim_);
}

Vec Plane::unit_normal() const {
  require(plane_dim_ == ambient_dim_ - 1, "unit_normal: plane is not codimension one");
  const Mat comp = complement();
  int best = 0;
  double best_norm = -1.0;
  for (int j = 0; j < ambient_dim_; ++j) {
    const double norm = comp.col(j).norm();
    if (norm > best_norm) {
      best_norm = norm;
      best = j;
    }
  }
  Vec normal = comp.col(best) / best_norm;
  return canonical_direction(std::move(normal));
}

double Plane::distance_to(const Plane& other) const {
  return plane_distance(*this, other);
}

double plane_distance(const Plane& a, const Plane& b) {
  require(a.ambient_dim() == b.ambient_dim() && a.dim() == b.dim(),
          "plane_distance: dimension mismatch");
  return (a.matrix() - b.matrix()).norm();
}

TangentVector projection_curve_derivative(const Plane& base, const Mat& velocity) {
  const int n = base.ambient_dim();
  require(velocity.rows() == n && velocity.cols() == n,
          "projection_curve_derivative: velocity matrix must be n x n");
  const Mat mixed = base.complement() * velocity * base.matrix();
  return TangentVector{n, base.dim(), mixed + mixed.transpose()};
}

double tangent_residual(const Plane& base, const TangentVector& tangent) {
  const Mat& s = tangent.matrix;
  const Mat& p = base.matrix();
  const Mat q = base.complement();
  const double sym = (s.transpose() - s).norm();
  const double tst = (p * s * p).norm();
  const double qsq = (q * s * q).norm();
  return std::max(sym, std::max(tst, qsq));
}

Vec canonical_direction(Vec v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-9) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

std::vector<Vec> sample_directions(int ambient_dim, int count, std::uint64_t seed) {
  require(ambient_dim >= 2, "sample_directions: ambient dimension must be at least 2");
  require(count >= 1, "sample_directions: need at least one direction");
  std::vector<Vec> dirs;
  dirs.reserve(count);

  if (ambient_dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double angle = M_PI * static_cast<double>(i) / static_cast<double>(count);
      Vec v(2);
      v << std::cos(angle), std::sin(angle);
      dirs.push_back(canonical_direction(std::move(v)));
    }
    return dirs;
  }

  if (ambient_dim == 3) {
    // Spherical Fibonacci points on the upper hemisphere.
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i);
      Vec v(3);
      v << rho * std::cos(phi), rho * std::sin(phi), z;
      dirs.push_back(canonical_direction(std::move(v)));
    }
    return dirs;
  }

  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    dirs.push_back(canonical_direction(rng.unit_vector(ambient_dim)));
  }
  return dirs;
}

std::vector<Plane> sample_grid(int ambient_dim, int plane_dim, int count,
                               std::uint64_t seed) {
  require(ambient_dim >= 2, "sample_grid: ambient dimension must be at least 2");
  require(plane_dim > 0 && plane_dim < ambient_dim, "sample_grid: need 0 < d < n");
  require(count >= 1, "sample_grid: need at least one plane");

  std::vector<Plane> planes;
  planes.reserve(count);

  if (plane_dim == ambient_dim - 1) {
    for (const Vec& dir : sample_directions(ambient_dim, count, seed)) {
      planes.push_back(Plane::from_normal(dir));
    }
    return planes;
  }

  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    planes.push_back(Plane::from_basis(rng.gaussian_matrix(ambient_dim, plane_dim)));
  }
  return planes;
}

}  // namespace anivar
