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

#include "anivar/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "anivar/simplex.hpp"

namespace anivar {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

std::shared_ptr<const PlaneGrid> make_plane_grid(PlaneGrid planes,
                                                 double min_separation) {
  require(!planes.empty(), "plane grid: empty");
  const int n = planes.front().ambient_dim();
  const int d = planes.front().dim();
  for (const Plane& p : planes) {
    require(p.ambient_dim() == n && p.dim() == d,
            "plane grid: mixed dimensions");
  }
  const double sep2 = min_separation * min_separation;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const double dist2 =
          (planes[i].matrix() - planes[j].matrix()).squaredNorm();
      require(dist2 > sep2, "plane grid: planes " + std::to_string(i) + " and " +
                                std::to_string(j) + " are not distinct");
    }
  }
  return std::make_shared<const PlaneGrid>(std::move(planes));
}

GrassmannMeasure::GrassmannMeasure(std::shared_ptr<const PlaneGrid> grid,
                                   Vec weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  require(grid_ != nullptr && !grid_->empty(), "measure: empty plane grid");
  require(weights_.size() == static_cast<Eigen::Index>(grid_->size()),
          "measure: weight count must match the grid");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    require(weights_[i] >= -1e-15, "measure: negative weight");
    if (weights_[i] < 0.0) weights_[i] = 0.0;
    total += weights_[i];
  }
  require(std::abs(total - 1.0) <= 1e-12,
          "measure: weights must sum to one (got " + std::to_string(total) + ")");
}

GrassmannMeasure GrassmannMeasure::dirac(std::shared_ptr<const PlaneGrid> grid,
                                         int index) {
  require(grid != nullptr && index >= 0 &&
              index < static_cast<int>(grid->size()),
          "dirac: index out of range");
  Vec w = Vec::Zero(grid->size());
  w[index] = 1.0;
  return GrassmannMeasure(std::move(grid), std::move(w));
}

int GrassmannMeasure::ambient_dim() const { return grid_->front().ambient_dim(); }
int GrassmannMeasure::plane_dim() const { return grid_->front().dim(); }

std::vector<int> GrassmannMeasure::support(double min_weight) const {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (weights_[i] > min_weight) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

bool GrassmannMeasure::is_dirac(double min_weight) const {
  return support(min_weight).size() == 1;
}

Mat averaged_variation_matrix(const Integrand& f, const Vec& x,
                              const GrassmannMeasure& measure) {
  require(f.ambient_dim() == measure.ambient_dim() &&
              f.plane_dim() == measure.plane_dim(),
          "averaged_variation_matrix: dimension mismatch");
  const int n = f.ambient_dim();
  Mat total = Mat::Zero(n, n);
  const Vec& w = measure.weights();
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0) continue;
    total += w[j] * first_variation_matrix(f, x, measure.grid()[j]);
  }
  return total;
}

Mat image_space(const Mat& a, double rel_tol) {
  require(a.rows() == a.cols(), "image_space: matrix must be square");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rel_tol * sigma[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff && sigma[i] > 0.0) ++rank;
  }
  return svd.matrixV().leftCols(rank);
}

std::string ac_status_string(AcStatus status) {
  switch (status) {
    case AcStatus::kNoViolationFound: return "no_violation_found";
    case AcStatus::kKernelExcess: return "violation_i";
    case AcStatus::kNonDiracKernel: return "violation_ii";
  }
  return "unknown";
}

std::string crosscheck_verdict_string(CrosscheckVerdict verdict) {
  switch (verdict) {
    case CrosscheckVerdict::kConsistentPass: return "consistent_pass";
    case CrosscheckVerdict::kConsistentFail: return "consistent_fail";
    case CrosscheckVerdict::kInconsistentAtResolution:
      return "inconsistent_at_resolution";
    case CrosscheckVerdict::kInconsistent: return "inconsistent";
  }
  return "unknown";
}

namespace {

// Search state shared by the candidate passes.
struct AcSearch {
  AcSearch(const std::vector<Mat>& bmats_in, int ambient, int plane,
           const AcOptions& options, std::shared_ptr<const PlaneGrid> grid_in)
      : bmats(bmats_in), n(ambient), d(plane), opts(options),
        grid(std::move(grid_in)) {}

  const std::vector<Mat>& bmats;
  int n;
  int d;
  const AcOptions& opts;
  std::shared_ptr<const PlaneGrid> grid;
  /// Fat atoms count as a spread (non-Dirac) support only when some pair of
  /// them is farther apart than this.
  double separation_floor = 0.0;
  AcBudget budget;
  double closest_spread_ratio = std::numeric_limits<double>::infinity();
  std::optional<AcCertificate> certificate;
  AcStatus status = AcStatus::kNoViolationFound;
  double certificate_ratio = 0.0;

  int grid_size() const { return static_cast<int>(bmats.size()); }

  bool spread_fat_support(const Vec& weights) const {
    std::vector<int> fat;
    for (int j = 0; j < grid_size(); ++j) {
      if (weights[j] >= opts.min_pair_weight) fat.push_back(j);
    }
    if (fat.size() < 2) return false;
    for (std::size_t a = 0; a < fat.size(); ++a) {
      for (std::size_t b = a + 1; b < fat.size(); ++b) {
        if (plane_distance((*grid)[fat[a]], (*grid)[fat[b]]) > separation_floor) {
          return true;
        }
      }
    }
    return false;
  }

  Mat average(const Vec& weights) const {
    Mat a = Mat::Zero(n, n);
    for (int j = 0; j < grid_size(); ++j) {
      if (weights[j] != 0.0) a += weights[j] * bmats[j];
    }
    return a;
  }

  // Validates a candidate measure by direct singular-value computation.
  // Returns true when a certificate was produced.
  bool classify(const Vec& raw_weights) {
    Vec weights = raw_weights.cwiseMax(0.0);
    const double total = weights.sum();
    if (total <= 0.0) return false;
    weights /= total;

    const Mat a = average(weights);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec sigma = svd.singularValues();
    const double smax = sigma[0];
    if (!(smax > 0.0)) return false;
    const double cutoff = opts.rank_rel_tol * smax;

    const bool spread = spread_fat_support(weights);

    // Critical ratios: sigma_d gates the codim+1 kernel, sigma_{d+1} the
    // codim kernel (descending order, 0-based).
    const double ratio_excess = sigma[d - 1] / smax;
    const double ratio_codim = d < n ? sigma[d] / smax : 0.0;
    if (spread) {
      closest_spread_ratio = std::min(closest_spread_ratio, ratio_codim);
    }

    int kernel_dim = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma[i] <= cutoff) ++kernel_dim;
    }

    if (kernel_dim >= n - d + 1) {
      store(AcStatus::kKernelExcess, weights, svd.matrixV(), sigma, a,
            ratio_excess);
      return true;
    }
    if (kernel_dim == n - d && spread) {
      store(AcStatus::kNonDiracKernel, weights, svd.matrixV(), sigma, a,
            ratio_codim);
      return true;
    }
    return false;
  }

  void store(AcStatus found, const Vec& weights, const Mat& v, const Vec& sigma,
             const Mat& a, double ratio) {
    const double cutoff = opts.rank_rel_tol * sigma[0];
    int kernel_dim = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma[i] <= cutoff) ++kernel_dim;
    }
    GrassmannMeasure measure(grid, weights);
    AcCertificate cert{std::move(measure), {}, v.rightCols(kernel_dim), sigma, a};
    // Full support, not just the fat atoms: small balancing weights are part
    // of what makes the averaged matrix singular.
    cert.support = cert.measure.support();
    certificate = std::move(cert);
    status = found;
    certificate_ratio = ratio;
  }

  // Equality system { sum_j w_j B_j k_l = 0 for all l, sum_j w_j = 1 }.
  Mat kernel_system(const Mat& kernel_basis) const {
    const int m = static_cast<int>(kernel_basis.cols());
    Mat sys(n * m + 1, grid_size());
    for (int l = 0; l < m; ++l) {
      for (int j = 0; j < grid_size(); ++j) {
        sys.block(l * n, j, n, 1) = bmats[j] * kernel_basis.col(l);
      }
    }
    sys.row(n * m).setOnes();
    return sys;
  }

  // Feasibility of an exactly singular measure for this kernel candidate.
  // On success runs classify; on failure still classifies the minimum-
  // violation point so margins get tracked. Returns true on certificate.
  bool try_kernel(const Mat& kernel_basis, Vec* feasible_point) {
    ++budget.kernel_candidates;
    const Mat sys = kernel_system(kernel_basis);
    Vec rhs = Vec::Zero(sys.rows());
    rhs[sys.rows() - 1] = 1.0;
    ++budget.lp_solves;
    const LpResult lp = lp_feasible_point(sys, rhs, opts.lp_feasibility_tol);
    if (lp.status == LpResult::Status::infeasible ||
        lp.status == LpResult::Status::iteration_limit) {
      // The minimum-violation point still gets validated: it tracks margins
      // and occasionally certifies outright despite the tolerance verdict.
      if (lp.x.size() == grid_size() && lp.x.sum() > 0.5 && classify(lp.x)) {
        return true;
      }
      return false;
    }
    if (feasible_point != nullptr) *feasible_point = lp.x;
    if (classify(lp.x)) return true;

    // The feasible polytope may still contain a spread measure even when
    // the phase-one vertex is concentrated; push pairs of weights up.
    const Vec base = lp.x;
    int heaviest = 0;
    base.maxCoeff(&heaviest);
    std::vector<int> order(grid_size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (base[a] != base[b]) return base[a] > base[b];
      return a < b;
    });

    const int rows = static_cast<int>(sys.rows());
    int tried = 0;
    for (int partner : order) {
      if (partner == heaviest) continue;
      // A partner within the separation floor cannot certify anything.
      if (plane_distance((*grid)[heaviest], (*grid)[partner]) <= separation_floor) {
        continue;
      }
      if (tried >= opts.max_pair_lps) break;
      ++tried;
      ++budget.pairs_tried;
      // Variables [w, t, slack_a, slack_b]; maximize t subject to
      // w_heaviest - t - slack_a = 0 and w_partner - t - slack_b = 0.
      Mat ext = Mat::Zero(rows + 2, grid_size() + 3);
      ext.topLeftCorner(rows, grid_size()) = sys;
      ext(rows, heaviest) = 1.0;
      ext(rows, grid_size()) = -1.0;
      ext(rows, grid_size() + 1) = -1.0;
      ext(rows + 1, partner) = 1.0;
      ext(rows + 1, grid_size()) = -1.0;
      ext(rows + 1, grid_size() + 2) = -1.0;
      Vec ext_rhs = Vec::Zero(rows + 2);
      ext_rhs[rows - 1] = 1.0;
      Vec objective = Vec::Zero(grid_size() + 3);
      objective[grid_size()] = 1.0;
      ++budget.lp_solves;
      const LpResult pair =
          solve_lp(ext, ext_rhs, objective, opts.lp_feasibility_tol);
      if (pair.status != LpResult::Status::optimal) continue;
      if (pair.objective < opts.min_pair_weight) continue;
      if (classify(pair.x.head(grid_size()))) return true;
    }
    return false;
  }

  // From a measure, take the lowest right singular vectors of its averaged
  // matrix as the next kernel candidate; iterate to a fixpoint.
  bool refine(Vec weights, int kernel_dim) {
    Mat previous;
    for (int iter = 0; iter < opts.refinement_iters; ++iter) {
      ++budget.refinement_rounds;
      const Mat a = average(weights);
      if (!(a.norm() > 0.0)) return false;
      Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
      const Mat kernel = svd.matrixV().rightCols(kernel_dim);
      if (previous.size() > 0) {
        const Mat p_now = kernel * kernel.transpose();
        const Mat p_prev = previous * previous.transpose();
        if ((p_now - p_prev).norm() < 1e-9) return false;  // fixpoint
      }
      previous = kernel;
      Vec feasible;
      if (try_kernel(kernel, &feasible)) return true;
      if (feasible.size() == 0) return false;  // candidate infeasible
      weights = feasible;
    }
    return false;
  }
};

}  // namespace

AcReport check_atomic_condition(const Integrand& f, const Vec& x,
                                std::shared_ptr<const PlaneGrid> grid,
                                const AcOptions& options) {
  require(grid != nullptr && !grid->empty(), "check_atomic_condition: empty grid");
  require(options.subspace_candidates > 0 || options.refinement_restarts > 0,
          "check_atomic_condition: zero search budget");
  const int n = f.ambient_dim();
  const int d = f.plane_dim();
  require(grid->front().ambient_dim() == n && grid->front().dim() == d,
          "check_atomic_condition: grid dimension mismatch");

  std::vector<Mat> bmats;
  bmats.reserve(grid->size());
  for (const Plane& plane : *grid) {
    bmats.push_back(first_variation_matrix(f, x, plane));
  }

  double min_grid_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    for (std::size_t j = i + 1; j < grid->size(); ++j) {
      min_grid_distance =
          std::min(min_grid_distance, plane_distance((*grid)[i], (*grid)[j]));
    }
  }
  if (!std::isfinite(min_grid_distance)) min_grid_distance = 0.0;

  AcSearch search(bmats, n, d, options, grid);
  search.separation_floor = options.min_pair_separation_factor * min_grid_distance;
  search.budget.grid_size = static_cast<int>(grid->size());
  search.budget.seed = options.seed;
  search.budget.rank_rel_tol = options.rank_rel_tol;
  search.budget.min_pair_weight = options.min_pair_weight;
  search.budget.lp_feasibility_tol = options.lp_feasibility_tol;

  const int grid_size = static_cast<int>(grid->size());
  Rng rng(options.seed);

  auto finish = [&]() {
    AcReport report;
    report.status = search.status;
    report.certificate = std::move(search.certificate);
    report.budget = search.budget;
    report.closest_spread_ratio = search.closest_spread_ratio;
    report.certificate_ratio = search.certificate_ratio;
    return report;
  };

  // Kernel dimensions probed in order of severity: codim+1 first, then codim.
  for (const int kernel_dim : {n - d + 1, n - d}) {
    if (kernel_dim > n) continue;

    // (a) quasi-random kernel subspaces.
    std::vector<Mat> candidates;
    if (kernel_dim == n) {
      candidates.push_back(Mat::Identity(n, n));
    } else {
      const auto subspaces =
          sample_grid(n, kernel_dim, options.subspace_candidates,
                      options.seed ^ 0x9e3779b97f4a7c15ull);
      candidates.reserve(subspaces.size());
      for (const Plane& s : subspaces) candidates.push_back(s.orthonormal_basis());
    }

    // (b) pencil seeds: kernels of the most singular half/half pair averages.
    {
      struct Scored {
        double ratio;
        int i, j;
      };
      std::vector<Scored> scored;
      const long all_pairs = static_cast<long>(grid_size) * (grid_size - 1) / 2;
      const bool exhaustive = all_pairs <= options.pair_scan_cap;
      const int scan =
          exhaustive ? grid_size
                     : std::max(2, static_cast<int>(std::sqrt(
                                       2.0 * options.pair_scan_cap)));
      std::vector<int> subset(scan);
      if (exhaustive) {
        std::iota(subset.begin(), subset.end(), 0);
      } else {
        for (int i = 0; i < scan; ++i)
          subset[i] = static_cast<int>(rng.integer(grid_size));
        std::sort(subset.begin(), subset.end());
        subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
      }
      Mat half(n, n);
      for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = a + 1; b < subset.size(); ++b) {
          half = 0.5 * (bmats[subset[a]] + bmats[subset[b]]);
          Eigen::JacobiSVD<Mat> svd(half);
          const Vec& sigma = svd.singularValues();
          if (!(sigma[0] > 0.0)) continue;
          const double ratio = sigma[std::min<int>(d, n - 1)] / sigma[0];
          scored.push_back({ratio, subset[a], subset[b]});
        }
      }
      std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
      });
      const int keep = std::min<int>(options.pair_seed_count,
                                     static_cast<int>(scored.size()));
      for (int s = 0; s < keep; ++s) {
        const Mat pair_avg = 0.5 * (bmats[scored[s].i] + bmats[scored[s].j]);
        Eigen::JacobiSVD<Mat> svd(pair_avg, Eigen::ComputeFullV);
        candidates.push_back(svd.matrixV().rightCols(kernel_dim));
      }
    }

    for (const Mat& kernel : candidates) {
      if (search.try_kernel(kernel, nullptr)) return finish();
    }

    // (c) alternating refinement from random sparse measures.
    for (int restart = 0; restart < options.refinement_restarts; ++restart) {
      const int atoms = 2 + static_cast<int>(rng.integer(3));
      Vec weights = Vec::Zero(grid_size);
      const Vec mix = rng.simplex_point(atoms);
      for (int a = 0; a < atoms; ++a) {
        weights[rng.integer(grid_size)] += mix[a];
      }
      if (search.refine(weights, kernel_dim)) return finish();
    }
  }

  return finish();
}

ConvexityReport check_strict_convexity(const NormIntegrand& norm,
                                       const std::vector<Vec>& directions,
                                       double min_angle, double tol_pos) {
  require(directions.size() >= 8,
          "check_strict_convexity: need at least 8 directions");
  require(min_angle > 0.0, "check_strict_convexity: min_angle must be positive");
  const int count = static_cast<int>(directions.size());
  const int n = norm.ambient_dim;

  Mat dirs(count, n);
  Vec values(count);
  Mat grads(count, n);
  for (int i = 0; i < count; ++i) {
    require(static_cast<int>(directions[i].size()) == n,
            "check_strict_convexity: direction dimension mismatch");
    require(std::abs(directions[i].norm() - 1.0) <= 1e-9,
            "check_strict_convexity: directions must be unit vectors");
    dirs.row(i) = directions[i].transpose();
    values[i] = norm.value(directions[i]);
    grads.row(i) = norm.gradient(directions[i]).transpose();
  }

  // pairing(i, j) = <dG(v_j), v_i>
  const Mat pairing = dirs * grads.transpose();
  const Mat cosines = dirs * dirs.transpose();

  ConvexityReport report;
  report.directions = count;
  report.tol_pos = tol_pos;
  report.min_value = values.minCoeff();
  report.min_subgradient_margin = std::numeric_limits<double>::infinity();
  report.min_product_margin = std::numeric_limits<double>::infinity();
  report.grid_spacing = std::numeric_limits<double>::infinity();

  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      if (i == j) continue;
      const double cosang = std::min(1.0, std::abs(cosines(i, j)));
      const double angle = std::acos(cosang);
      if (j > i) report.grid_spacing = std::min(report.grid_spacing, angle);
      if (angle < min_angle) continue;
      ++report.pairs_scanned;

      // Both sign choices of the pair are covered through the absolute
      // value (the norm and the scan are even).
      const double subgrad = values[i] - std::abs(pairing(i, j));
      if (subgrad < report.min_subgradient_margin) {
        report.min_subgradient_margin = subgrad;
        report.argmin_subgradient[0] = i;
        report.argmin_subgradient[1] = j;
      }
      if (j > i) {
        const double product =
            values[i] * values[j] - pairing(i, j) * pairing(j, i);
        if (product < report.min_product_margin) {
          report.min_product_margin = product;
          report.argmin_product[0] = i;
          report.argmin_product[1] = j;
        }
      }
    }
  }
  require(report.pairs_scanned > 0,
          "check_strict_convexity: min_angle excluded every pair");
  report.strictly_convex = report.min_subgradient_margin > tol_pos &&
                           report.min_product_margin > tol_pos;
  return report;
}

int default_direction_grid(int ambient_dim) {
  if (ambient_dim == 2) return 720;
  if (ambient_dim == 3) return 1000;
  return 2000;
}

CrosscheckReport crosscheck_convexity_ac(const NormIntegrand& norm,
                                         const CrosscheckOptions& options) {
  const int n = norm.ambient_dim;
  const int grid_size =
      options.grid_size > 0 ? options.grid_size : default_direction_grid(n);

  const std::vector<Vec> directions = sample_directions(n, grid_size, options.seed);
  PlaneGrid planes;
  planes.reserve(directions.size());
  for (const Vec& dir : directions) planes.push_back(Plane::from_normal(dir));
  auto grid = make_plane_grid(std::move(planes));

  CrosscheckReport report;
  report.convexity =
      check_strict_convexity(norm, directions, options.min_angle, options.tol_pos);
  const Integrand integrand = integrand_from_norm(norm);
  AcOptions ac_options = options.ac;
  ac_options.seed = options.seed;
  report.ac = check_atomic_condition(integrand, Vec::Zero(n), grid, ac_options);

  // Normalize the scan margins by the quadratic small-angle scale so that
  // the Euclidean norm sits at 1; near-threshold margins sink toward zero.
  const double spacing = report.convexity.grid_spacing;
  const double gmin = std::max(report.convexity.min_value, 1e-12);
  const double scale1 = 0.5 * spacing * spacing * gmin;
  const double scale2 = spacing * spacing * gmin * gmin;
  report.normalized_convexity_margin =
      std::min(report.convexity.min_subgradient_margin / scale1,
               report.convexity.min_product_margin / scale2);

  const bool conv_ok = report.convexity.strictly_convex;
  const bool ac_ok = report.ac.status == AcStatus::kNoViolationFound;
  const double tau = ac_options.rank_rel_tol;
  report.ac_near_threshold =
      ac_ok ? report.ac.closest_spread_ratio < 64.0 * tau
            : report.ac.certificate_ratio > tau / 64.0;

  if (conv_ok == ac_ok) {
    report.verdict = conv_ok ? CrosscheckVerdict::kConsistentPass
                             : CrosscheckVerdict::kConsistentFail;
  } else if (std::abs(report.normalized_convexity_margin) < options.resolution_rho ||
             report.ac_near_threshold) {
    report.verdict = CrosscheckVerdict::kInconsistentAtResolution;
  } else {
    report.verdict = CrosscheckVerdict::kInconsistent;
  }
  return report;
}

}  // namespace anivar
