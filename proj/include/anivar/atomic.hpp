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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anivar/integrand.hpp"
#include "anivar/plane.hpp"

namespace anivar {

using PlaneGrid = std::vector<Plane>;

/// Validates that the planes share (n, d) and are pairwise separated by more
/// than `min_separation` in Frobenius distance, then freezes the grid for
/// shared use by measures.
std::shared_ptr<const PlaneGrid> make_plane_grid(PlaneGrid planes,
                                                 double min_separation = 1e-6);

/// Probability weights over a fixed finite grid of planes.
class GrassmannMeasure {
 public:
  GrassmannMeasure(std::shared_ptr<const PlaneGrid> grid, Vec weights);

  static GrassmannMeasure dirac(std::shared_ptr<const PlaneGrid> grid, int index);

  const PlaneGrid& grid() const { return *grid_; }
  std::shared_ptr<const PlaneGrid> grid_ptr() const { return grid_; }
  const Vec& weights() const { return weights_; }
  int ambient_dim() const;
  int plane_dim() const;

  /// Indices carrying more than `min_weight`.
  std::vector<int> support(double min_weight = 1e-12) const;
  bool is_dirac(double min_weight = 1e-12) const;

 private:
  std::shared_ptr<const PlaneGrid> grid_;
  Vec weights_;
};

/// Weighted average of the first-variation matrices over the measure's
/// plane grid; linear in the weights.
Mat averaged_variation_matrix(const Integrand& f, const Vec& x,
                              const GrassmannMeasure& measure);

/// Orthonormal basis (n x rank) of the image of A^t, with singular values
/// below `rel_tol` * sigma_max treated as zero. A zero matrix yields an
/// n x 0 basis.
Mat image_space(const Mat& a, double rel_tol = 1e-8);

struct AcOptions {
  std::uint64_t seed = 42;
  /// Quasi-random kernel-subspace candidates per kernel dimension.
  int subspace_candidates = 200;
  /// Alternating-refinement restarts from random measures.
  int refinement_restarts = 50;
  int refinement_iters = 12;
  /// Two-plane pencil seeds: pairs scanned (capped) and seeds kept.
  int pair_scan_cap = 300000;
  int pair_seed_count = 32;
  /// Pair programs tried per feasible kernel candidate.
  int max_pair_lps = 48;
  /// Singular values below rank_rel_tol * sigma_max count as zero.
  double rank_rel_tol = 1e-8;
  /// Two atoms of at least this weight make a measure non-Dirac...
  double min_pair_weight = 1e-3;
  /// ...provided their planes are separated by more than this multiple of
  /// the grid's minimum pairwise plane distance. Fat atoms packed within a
  /// couple of grid cells are a Dirac at grid resolution: on fine grids a
  /// slightly uneven split across adjacent planes drives a singular value
  /// below rank_rel_tol for any integrand, convex or not.
  double min_pair_separation_factor = 2.0;
  double lp_feasibility_tol = 1e-9;
};

enum class AcStatus {
  kNoViolationFound,   // search exhausted; grid- and budget-relative only
  kKernelExcess,       // kernel dimension above codimension
  kNonDiracKernel,     // codimension-dim kernel carried by a spread measure
};

/// Wire names: "no_violation_found", "violation_i", "violation_ii".
std::string ac_status_string(AcStatus status);

struct AcCertificate {
  GrassmannMeasure measure;
  std::vector<int> support;
  /// Orthonormal basis of the numerical kernel of the averaged matrix.
  Mat kernel_basis;
  Vec singular_values;
  Mat averaged_matrix;
};

struct AcBudget {
  int grid_size = 0;
  int lp_solves = 0;
  int kernel_candidates = 0;
  int pairs_tried = 0;
  int refinement_rounds = 0;
  std::uint64_t seed = 0;
  double rank_rel_tol = 0.0;
  double min_pair_weight = 0.0;
  double lp_feasibility_tol = 0.0;
};

struct AcReport {
  AcStatus status = AcStatus::kNoViolationFound;
  std::optional<AcCertificate> certificate;
  AcBudget budget;
  /// Smallest critical singular-value ratio seen on any examined spread
  /// measure (for margin reporting; +inf when none was examined).
  double closest_spread_ratio = std::numeric_limits<double>::infinity();
  /// Critical ratio of the certificate (0 when no certificate).
  double certificate_ratio = 0.0;
};

/// Searches the discretized measure simplex for violations of the atomic
/// condition at `x`. A kernel of dimension codim+1 for any measure, or a
/// kernel of dimension codim carried by a non-Dirac measure, yields a
/// certificate. "No violation found" is grid- and budget-relative, never a
/// proof.
AcReport check_atomic_condition(const Integrand& f, const Vec& x,
                                std::shared_ptr<const PlaneGrid> grid,
                                const AcOptions& options = {});

struct ConvexityReport {
  bool strictly_convex = false;
  /// min over ordered direction pairs of G(v) - |<dG(w), v>|.
  double min_subgradient_margin = 0.0;
  int argmin_subgradient[2] = {-1, -1};
  /// min over pairs of G(v) G(w) - <dG(w), v> <dG(v), w>.
  double min_product_margin = 0.0;
  int argmin_product[2] = {-1, -1};
  /// Smallest projective angle between distinct grid directions.
  double grid_spacing = 0.0;
  double min_value = 0.0;
  double tol_pos = 0.0;
  int directions = 0;
  long pairs_scanned = 0;
};

/// Grid scan of the two strict-convexity margins of a direction norm over
/// all pairs with projective angle at least `min_angle`. Verdict requires
/// both minima above `tol_pos`. Throws if fewer than 8 directions.
ConvexityReport check_strict_convexity(const NormIntegrand& norm,
                                       const std::vector<Vec>& directions,
                                       double min_angle, double tol_pos = 1e-10);

enum class CrosscheckVerdict {
  kConsistentPass,
  kConsistentFail,
  kInconsistentAtResolution,
  kInconsistent,
};

std::string crosscheck_verdict_string(CrosscheckVerdict verdict);

struct CrosscheckOptions {
  int grid_size = 0;  // 0 = per-dimension default (720 for n=2, 1000 for n=3)
  std::uint64_t seed = 42;
  double min_angle = 1e-6;
  double tol_pos = 1e-10;
  /// Normalized-margin threshold below which a class mismatch is reported
  /// as at-resolution instead of as a hard inconsistency.
  double resolution_rho = 0.02;
  AcOptions ac;
};

struct CrosscheckReport {
  CrosscheckVerdict verdict = CrosscheckVerdict::kConsistentPass;
  ConvexityReport convexity;
  AcReport ac;
  /// Convexity margin normalized by the quadratic grid-resolution scale.
  double normalized_convexity_margin = 0.0;
  bool ac_near_threshold = false;
};

/// Default direction-grid size used for codimension-one checks.
int default_direction_grid(int ambient_dim);

/// Runs both the atomic-condition search and the strict-convexity scan on
/// the same direction grid and compares the two classifications.
CrosscheckReport crosscheck_convexity_ac(const NormIntegrand& norm,
                                         const CrosscheckOptions& options = {});

}  // namespace anivar
