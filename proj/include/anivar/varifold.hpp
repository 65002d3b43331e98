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
#include <vector>

#include "anivar/atomic.hpp"
#include "anivar/integrand.hpp"
#include "anivar/plane.hpp"

namespace anivar {

struct VarifoldAtom {
  Vec position;
  Plane plane;
  double mass = 0.0;
};

/// Finite list of weighted (position, plane) atoms approximating a
/// d-varifold. Immutable after construction; all masses positive and all
/// planes share (n, d).
class DiscreteVarifold {
 public:
  DiscreteVarifold(int ambient_dim, int plane_dim, std::vector<VarifoldAtom> atoms);

  int ambient_dim() const { return ambient_dim_; }
  int plane_dim() const { return plane_dim_; }
  const std::vector<VarifoldAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

 private:
  int ambient_dim_;
  int plane_dim_;
  std::vector<VarifoldAtom> atoms_;
};

/// Compactly supported C1 vector field with an analytic Jacobian.
/// jacobian(y)(i, l) = d g_i / d y_l.
struct VectorField {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
  Vec support_center;
  double support_radius = 0.0;
  /// sup |g| + sup |Dg| over the support.
  double c1_norm = 0.0;
};

/// Differentiable map with an analytic Jacobian field.
struct Diffeo {
  std::function<Vec(const Vec&)> map;
  std::function<Mat(const Vec&)> jacobian;
};

/// The flow-at-time-t map y -> y + t g(y).
Diffeo flow_map(const VectorField& field, double t);

/// Tensor-product bump (1-s^2)^3 on |s| < 1 in every coordinate, scaled by
/// `halfwidth` around `center`, pointing along coordinate `axis`. Support is
/// the cube of half-width `halfwidth` (inside the ball of radius
/// halfwidth * sqrt(n)); the C1 norm is closed-form.
VectorField bump_field(const Vec& center, double halfwidth, int axis,
                       double amplitude);

/// Deterministic battery of bump fields supported inside the ball of radius
/// `inner_radius` around the origin.
std::vector<VectorField> standard_test_fields(int ambient_dim, int count,
                                              double inner_radius,
                                              std::uint64_t seed);

/// Total weight of the integrand over the varifold: sum of m F(x, T).
double energy(const DiscreteVarifold& varifold, const Integrand& f);

/// Derivative of the energy under the flow of `field`: the sum of
/// m [ <grad_x F, g(x)> + B(x, T) : Dg(x) ]. Linear in the field and in
/// the masses.
double first_variation(const DiscreteVarifold& varifold, const Integrand& f,
                       const VectorField& field);

struct FirstVariationCheck {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double gap = 0.0;
};

/// Central-difference audit of first_variation through the energy of the
/// pushed-forward varifold at times +-t.
FirstVariationCheck first_variation_fd_check(const DiscreteVarifold& varifold,
                                             const Integrand& f,
                                             const VectorField& field, double t);

/// Image varifold: positions map through psi, planes through its
/// differential, masses pick up the d-Jacobian factor
/// sqrt(det((Dpsi|_T)^t Dpsi|_T)). Throws on a singular differential.
DiscreteVarifold pushforward(const DiscreteVarifold& varifold, const Diffeo& psi);

/// Blow-up rescaling: atoms move to (x - center)/radius, the open unit ball
/// is kept, and masses are normalized by the closed-ball weight at `radius`
/// (sphere atoms count toward the normalizer but are dropped by the open
/// restriction). The weight of the result equals the rescaled weight
/// measure exactly, atom by atom.
DiscreteVarifold varifold_rescale(const DiscreteVarifold& varifold,
                                  const Vec& center, double radius);

/// Product varifold on the image space of the averaged variation matrix:
/// a uniform lattice sample of the flat k-dimensional measure on that space
/// inside the ball of radius `radius`, carrying the measure's plane weights
/// at every lattice site. Stationary for the integrand by construction;
/// non-rectifiable whenever k < d or the measure is not a Dirac.
struct FlatCounterexample {
  DiscreteVarifold varifold;
  /// Dimension k of the sampled flat (the rank of the averaged matrix).
  int flat_dim = 0;
  bool dirac = false;
  Mat averaged_matrix;
  Mat flat_basis;
  double cell_width = 0.0;
};

FlatCounterexample counterexample_varifold(const Integrand& f,
                                           const GrassmannMeasure& measure,
                                           double radius, int samples);

struct StationarityReport {
  /// max over fields of |first variation| / C1 norm of the field.
  double max_ratio = 0.0;
  int worst_field = -1;
  std::vector<double> values;
  std::vector<double> ratios;
};

/// First-variation magnitudes over a battery of test fields, normalized by
/// their C1 norms; certifies stationarity at quadrature resolution.
StationarityReport stationarity_scan(const DiscreteVarifold& varifold,
                                     const Integrand& f,
                                     const std::vector<VectorField>& fields);

}  // namespace anivar
