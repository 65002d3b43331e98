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

#include <vector>

#include "anivar/integrand.hpp"
#include "anivar/plane.hpp"
#include "anivar/varifold.hpp"

namespace anivar {

struct MeasureAtom {
  Vec position;
  double mass = 0.0;
};

/// Finite positive atomic measure on R^n.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int ambient_dim, std::vector<MeasureAtom> atoms);

  int ambient_dim() const { return ambient_dim_; }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

 private:
  int ambient_dim_;
  std::vector<MeasureAtom> atoms_;
};

/// Spatial projection of a varifold: one weight atom per varifold atom, in
/// atom order and without merging coincident positions.
DiscreteMeasure weight_measure(const DiscreteVarifold& varifold);

/// Mass of the closed ball of the given radius (global convention: atoms on
/// the sphere count as inside).
double ball_mass(const DiscreteMeasure& measure, const Vec& center, double radius);

/// Volume of the d-dimensional unit ball.
double unit_ball_volume(int d);

/// Blow-up rescaling: atoms move to (x - center)/radius, the open unit ball
/// is kept, masses are normalized by the closed-ball mass at `radius`. Total
/// output mass is at most 1 (exactly 1 when no atom lands on the sphere).
DiscreteMeasure rescale(const DiscreteMeasure& measure, const Vec& center,
                        double radius);

/// Typical nearest-neighbor distance among the atoms (median over a capped
/// deterministic sample). Zero for fewer than two atoms.
double nearest_neighbor_spacing(const DiscreteMeasure& measure,
                                int sample_cap = 256);

struct DensityProfile {
  Vec center;
  int density_dim = 0;
  std::vector<double> radii;
  /// ball mass / (omega_d r^d) per radius.
  std::vector<double> ratios;
  /// Radii below 5x the nearest-neighbor spacing are unreliable.
  std::vector<bool> resolved;
  double resolution_floor = 0.0;
};

/// Density ratios of the measure around `center` at the given radii,
/// with a resolution-floor flag per radius.
DensityProfile density_profile(const DiscreteMeasure& measure, const Vec& center,
                               int density_dim, std::vector<double> radii);

/// Least-squares slope of log(ratio) versus log(radius) over resolved rows
/// with positive ratios (k-plane samples give slope k - d).
double profile_loglog_slope(const DensityProfile& profile);

struct BallRatioScan {
  double shrink_factor = 0.0;
  int density_dim = 0;
  std::vector<double> radii;
  std::vector<double> ratios;
  std::vector<bool> valid;  // false where the outer ball was empty
  double max_ratio = 0.0;
  int skipped = 0;
  /// max ratio >= t^d - tolerance.
  bool passes(double tolerance) const;
};

/// Scan of ball-mass ratios mu(B_{t r}) / mu(B_r) over the radii list; for
/// points of positive lower density the max must approach t^d from below.
BallRatioScan ball_ratio_scan(const DiscreteMeasure& measure, const Vec& center,
                              int density_dim, double shrink_factor,
                              std::vector<double> radii);

/// Projection of the weighted spatial measure onto the plane: atom x maps to
/// P x with mass m F(x, S). Masses are not rescaled by the projection.
DiscreteMeasure project_pushforward(const DiscreteVarifold& varifold,
                                    const Integrand& f, const Plane& target);

/// alpha_d = 1 - 2^-(d+6): relative density-drop threshold.
double density_drop_threshold(int d);

/// beta_d = 2^-(d+9) d^-4: probe-ball radius factor.
double probe_radius_factor(int d);

struct RectifiabilityRow {
  double radius = 0.0;
  double ball_mass = 0.0;
  /// Mass fraction of points in the ball that admit a scale with density
  /// ratio at most alpha times the ball's own density ratio.
  double low_density_fraction = 0.0;
  /// max over candidate planes of the min probe-ball mass fraction along
  /// the plane through the center.
  double plane_coverage = 0.0;
  int plane_argmax = -1;
  bool empty = false;
  /// Whether any dyadic scale in the drop scan was above resolution.
  bool drop_scan_resolved = false;
  /// Whether the probe radius beta*r is above resolution.
  bool probe_resolved = false;
};

struct RectifiabilityDiagnostics {
  double alpha = 0.0;
  double beta = 0.0;
  int density_dim = 0;
  double resolution_floor = 0.0;
  std::vector<RectifiabilityRow> rows;
};

/// Finite-scale version of the two-part quantitative rectifiability
/// criterion: per radius, the low-density mass fraction (dyadic scale scan,
/// 8 octaves, clipped at the resolution floor) and the plane-coverage
/// statistic with probe radius beta * r. Diagnostics only.
RectifiabilityDiagnostics rectifiability_diagnostics(
    const DiscreteMeasure& measure, const Vec& center, int density_dim,
    const std::vector<double>& radii, const std::vector<Plane>& plane_grid);

}  // namespace anivar
