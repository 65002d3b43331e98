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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "anivar/rng.hpp"

namespace anivar {

/// Absolute Frobenius-norm tolerance for the projection-matrix invariants
/// (idempotence, symmetry, trace). Double-precision QR leaves residuals
/// around 1e-14, so 1e-10 gives four orders of headroom.
inline constexpr double kProjectionTol = 1e-10;

/// A d-dimensional linear subspace of R^n, stored as the n x n orthogonal
/// projection matrix onto it. Construction validates idempotence, symmetry
/// and trace, so a Plane value can be trusted downstream.
class Plane {
 public:
  /// Wraps an explicit projection matrix. Throws std::invalid_argument if
  /// the matrix fails the projection invariants at kProjectionTol.
  Plane(int ambient_dim, int plane_dim, Mat projection);

  /// Orthogonal projection onto span of the columns of `basis` (n x k,
  /// 0 < k < n). Throws on rank deficiency ("degenerate basis").
  static Plane from_basis(const Mat& basis);

  /// The hyperplane orthogonal to `normal` (codimension one). Inputs with
  /// |normal| within 1e-6 of 1 are normalized; anything further off is an
  /// error. from_normal(v) and from_normal(-v) are bit-identical.
  static Plane from_normal(const Vec& normal);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return plane_dim_; }
  int codim() const { return ambient_dim_ - plane_dim_; }

  /// The projection matrix P.
  const Mat& matrix() const { return projection_; }

  /// The complementary projection Id - P.
  Mat complement() const;

  /// An orthonormal n x d basis of the plane (deterministic: eigenvectors
  /// of P for its unit eigenvalues).
  Mat orthonormal_basis() const;

  /// Unit normal for codimension-one planes, sign-canonicalized so that the
  /// first component exceeding 1e-9 in absolute value is positive.
  /// Throws for codim != 1.
  Vec unit_normal() const;

  /// Frobenius distance ||P - Q|| between the projection matrices.
  double distance_to(const Plane& other) const;

  /// Largest violation among the three projection invariants.
  double invariant_residual() const;

 private:
  int ambient_dim_ = 0;
  int plane_dim_ = 0;
  Mat projection_;
};

/// Frobenius distance between planes of matching (n, d).
double plane_distance(const Plane& a, const Plane& b);

/// Velocity of the curve of planes t -> projection onto (Id + tL)(span T):
/// the matrix T_perp L T + (T_perp L T)^t, which is symmetric and lies in
/// the tangent space of the projection manifold at T.
struct TangentVector {
  int ambient_dim = 0;
  int plane_dim = 0;
  Mat matrix;
};

TangentVector projection_curve_derivative(const Plane& base, const Mat& velocity);

/// Residuals of the tangent-space conditions (symmetry, T S T = 0,
/// T_perp S T_perp = 0) of `tangent` at `base`; returns the largest.
double tangent_residual(const Plane& base, const TangentVector& tangent);

/// Deterministic grid of `count` d-planes in R^n.
///
/// For d = n-1 this is an antipodally identified direction grid: exactly
/// uniform angles for n = 2, a spherical Fibonacci hemisphere for n = 3,
/// and canonicalized seeded Gaussian directions for n >= 4. All other (n, d)
/// use orthonormalized Gaussian samples driven by `seed`.
std::vector<Plane> sample_grid(int ambient_dim, int plane_dim, int count,
                               std::uint64_t seed);

/// Unit normals of a codimension-one grid (same construction as sample_grid
/// with d = n-1, but returning the direction representatives).
std::vector<Vec> sample_directions(int ambient_dim, int count, std::uint64_t seed);

/// Flips `v` so that it compares lexicographically greater than its
/// negation: the first component with |v_i| > 1e-9 becomes positive.
Vec canonical_direction(Vec v);

}  // namespace anivar
