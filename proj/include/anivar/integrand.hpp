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

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anivar/plane.hpp"

namespace anivar {

/// Weight F(x, T) on position and tangent plane, with its two gradients.
///
/// The plane gradient is stored as a full symmetric n x n matrix; pairings
/// against tangent vectors read only its mixed (plane / complement) blocks,
/// so any smooth symmetric extension of the true gradient is an acceptable
/// representation.
class Integrand {
 public:
  using ValueFn = std::function<double(const Vec&, const Plane&)>;
  using SpatialGradFn = std::function<Vec(const Vec&, const Plane&)>;
  using PlaneGradFn = std::function<Mat(const Vec&, const Plane&)>;

  Integrand(std::string name, nlohmann::json params, int ambient_dim, int plane_dim,
            double lower_bound, double upper_bound, bool autonomous,
            ValueFn value, SpatialGradFn spatial_grad, PlaneGradFn plane_grad);

  double value(const Vec& x, const Plane& plane) const;
  Vec spatial_gradient(const Vec& x, const Plane& plane) const;
  Mat plane_gradient(const Vec& x, const Plane& plane) const;

  const std::string& name() const { return name_; }
  const nlohmann::json& params() const { return params_; }
  int ambient_dim() const { return ambient_dim_; }
  int plane_dim() const { return plane_dim_; }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  bool autonomous() const { return autonomous_; }

 private:
  void check_dims(const Vec& x, const Plane& plane) const;

  std::string name_;
  nlohmann::json params_;
  int ambient_dim_;
  int plane_dim_;
  double lower_;
  double upper_;
  bool autonomous_;
  ValueFn value_;
  SpatialGradFn spatial_grad_;
  PlaneGradFn plane_grad_;
};

/// Pairing of a stored plane gradient with a matrix direction, after
/// projecting the direction onto the tangent space at `plane`; the result
/// depends only on the tangential component of `direction`.
double tangential_pairing(const Mat& plane_gradient, const Plane& plane,
                          const Mat& direction);

/// The unique matrix paired with the velocity gradient in the first
/// variation of the energy: F(x,T) T plus the plane-gradient correction.
/// For the area integrand this is the projection matrix itself.
Mat first_variation_matrix(const Integrand& f, const Vec& x, const Plane& plane);

/// The plane-gradient part of first_variation_matrix: B - F T. Annihilates
/// v (x) w for all v, w inside the plane.
Mat grassmann_correction(const Integrand& f, const Vec& x, const Plane& plane);

/// Integrand with the spatial argument fixed at `x`: value and plane
/// gradient are read at x regardless of the queried position, and the
/// spatial gradient is identically zero.
Integrand freeze(const Integrand& f, const Vec& x);

/// Positively 1-homogeneous even weight on directions (codimension-one
/// integrands in direction form).
struct NormIntegrand {
  int ambient_dim = 0;
  std::string name;
  nlohmann::json params;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

/// Largest 1-homogeneity / evenness / Euler-identity violation of `norm`
/// over `samples` seeded directions.
double norm_integrand_residual(const NormIntegrand& norm, int samples,
                               std::uint64_t seed);

/// Codimension-one integrand induced by a direction norm: the weight of a
/// hyperplane is the norm of its unit normal. Throws if the norm violates
/// the Euler identity beyond 1e-8 on a seeded direction sample.
Integrand integrand_from_norm(const NormIntegrand& norm);

/// Finite-difference audit of the stored gradients.
struct FdValidationReport {
  double max_spatial_gap = 0.0;
  double max_plane_gap = 0.0;
  int worst_spatial_sample = -1;
  int worst_plane_sample = -1;
  int samples = 0;
  double step = 0.0;
};

/// Central-difference check of the spatial gradient and of the plane
/// gradient along projection curves; report-only. The default step balances
/// truncation against roundoff at double precision.
FdValidationReport fd_validate(const Integrand& f, int samples,
                               double step = 1e-5, std::uint64_t seed = 42);

// Built-in catalogue -------------------------------------------------------

Integrand make_area_integrand(int ambient_dim, int plane_dim);

NormIntegrand make_euclidean_norm(int ambient_dim);

/// sqrt(v^t A v) for symmetric positive definite A.
NormIntegrand make_ellipsoid_norm(const Mat& quadratic_form);

/// |v| (1 + eps * sum_i (v_i/|v|)^4). Strictly convex for small eps;
/// convexity fails beyond a finite threshold (at eps = 1/3 for n = 2).
NormIntegrand make_perturbed_norm(int ambient_dim, double eps);

/// Non-autonomous example 1 + (1/2) sin(x_1) * P_{11}; values stay within
/// [1/2, 3/2] for every plane.
Integrand make_sine_integrand(int ambient_dim, int plane_dim);

/// Names accepted by make_integrand / make_norm_integrand.
std::vector<std::string> integrand_names();
std::vector<std::string> norm_integrand_names();

/// Instantiates a catalogue integrand from {"name": ..., "params": {...}}.
/// Unknown names are rejected with a message listing the available ones.
Integrand make_integrand(const nlohmann::json& spec, int ambient_dim, int plane_dim);

/// Same, restricted to direction-norm integrands (codimension one).
NormIntegrand make_norm_integrand(const nlohmann::json& spec, int ambient_dim);

}  // namespace anivar
