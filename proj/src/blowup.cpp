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

#include "anivar/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace anivar {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

// Uniform bucket index over atom positions for repeated ball queries.
// Cells are visited in lexicographic order, so mass sums are deterministic.
class PointIndex {
 public:
  PointIndex(const DiscreteMeasure& measure, double cell)
      : measure_(measure), cell_(cell), dim_(measure.ambient_dim()) {
    for (std::size_t i = 0; i < measure.size(); ++i) {
      cells_[key(measure.atoms()[i].position)].push_back(static_cast<int>(i));
    }
  }

  double ball_mass(const Vec& center, double radius) const {
    double total = 0.0;
    visit_ball(center, radius, [&](const MeasureAtom& atom) { total += atom.mass; });
    return total;
  }

  template <typename Fn>
  void visit_ball(const Vec& center, double radius, Fn&& fn) const {
    std::vector<int> lo(dim_), hi(dim_);
    for (int a = 0; a < dim_; ++a) {
      lo[a] = static_cast<int>(std::floor((center[a] - radius) / cell_));
      hi[a] = static_cast<int>(std::floor((center[a] + radius) / cell_));
    }
    const double r2 = radius * radius;
    std::vector<int> idx = lo;
    while (true) {
      auto it = cells_.find(idx);
      if (it != cells_.end()) {
        for (int i : it->second) {
          const MeasureAtom& atom = measure_.atoms()[i];
          if ((atom.position - center).squaredNorm() <= r2) fn(atom);
        }
      }
      int axis = 0;
      while (axis < dim_ && ++idx[axis] > hi[axis]) {
        idx[axis] = lo[axis];
        ++axis;
      }
      if (axis == dim_) break;
    }
  }

 private:
  std::vector<int> key(const Vec& p) const {
    std::vector<int> k(dim_);
    for (int a = 0; a < dim_; ++a) {
      k[a] = static_cast<int>(std::floor(p[a] / cell_));
    }
    return k;
  }

  const DiscreteMeasure& measure_;
  double cell_;
  int dim_;
  std::map<std::vector<int>, std::vector<int>> cells_;
};

// Distances from `center` sorted ascending with cumulative masses; answers
// many-radius queries on one pass.
struct SortedDistances {
  std::vector<double> distance;
  std::vector<double> cumulative_mass;

  SortedDistances(const DiscreteMeasure& measure, const Vec& center) {
    std::vector<std::pair<double, double>> rows;
    rows.reserve(measure.size());
    for (const MeasureAtom& atom : measure.atoms()) {
      rows.emplace_back((atom.position - center).norm(), atom.mass);
    }
    std::sort(rows.begin(), rows.end());
    distance.reserve(rows.size());
    cumulative_mass.reserve(rows.size());
    double total = 0.0;
    for (const auto& [dist, mass] : rows) {
      total += mass;
      distance.push_back(dist);
      cumulative_mass.push_back(total);
    }
  }

  double closed_ball_mass(double radius) const {
    const auto it = std::upper_bound(distance.begin(), distance.end(), radius);
    const std::size_t count = static_cast<std::size_t>(it - distance.begin());
    return count == 0 ? 0.0 : cumulative_mass[count - 1];
  }
};

}  // namespace

DiscreteMeasure::DiscreteMeasure(int ambient_dim, std::vector<MeasureAtom> atoms)
    : ambient_dim_(ambient_dim), atoms_(std::move(atoms)) {
  require(ambient_dim_ >= 1, "measure: ambient dimension must be positive");
  for (const MeasureAtom& atom : atoms_) {
    require(static_cast<int>(atom.position.size()) == ambient_dim_,
            "measure: atom dimension mismatch");
    require(atom.mass > 0.0, "measure: atom masses must be positive");
  }
}

double DiscreteMeasure::total_mass() const {
  double total = 0.0;
  for (const MeasureAtom& atom : atoms_) total += atom.mass;
  return total;
}

DiscreteMeasure weight_measure(const DiscreteVarifold& varifold) {
  std::vector<MeasureAtom> atoms;
  atoms.reserve(varifold.size());
  for (const VarifoldAtom& atom : varifold.atoms()) {
    atoms.push_back(MeasureAtom{atom.position, atom.mass});
  }
  return DiscreteMeasure(varifold.ambient_dim(), std::move(atoms));
}

double ball_mass(const DiscreteMeasure& measure, const Vec& center, double radius) {
  require(static_cast<int>(center.size()) == measure.ambient_dim(),
          "ball_mass: center dimension mismatch");
  double total = 0.0;
  const double r2 = radius * radius;
  for (const MeasureAtom& atom : measure.atoms()) {
    if ((atom.position - center).squaredNorm() <= r2) total += atom.mass;
  }
  return total;
}

double unit_ball_volume(int d) {
  require(d >= 0, "unit_ball_volume: negative dimension");
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

DiscreteMeasure rescale(const DiscreteMeasure& measure, const Vec& center,
                        double radius) {
  require(radius > 0.0, "rescale: radius must be positive");
  require(static_cast<int>(center.size()) == measure.ambient_dim(),
          "rescale: center dimension mismatch");
  // Closed-ball normalizer, open-ball restriction; matches the varifold
  // rescaling atom for atom.
  double closed_mass = 0.0;
  for (const MeasureAtom& atom : measure.atoms()) {
    if ((atom.position - center).norm() <= radius) closed_mass += atom.mass;
  }
  require(closed_mass > 0.0, "rescale: empty ball");

  std::vector<MeasureAtom> atoms;
  for (const MeasureAtom& atom : measure.atoms()) {
    const Vec shifted = (atom.position - center) / radius;
    if (shifted.norm() < 1.0) {
      atoms.push_back(MeasureAtom{shifted, atom.mass / closed_mass});
    }
  }
  return DiscreteMeasure(measure.ambient_dim(), std::move(atoms));
}

double nearest_neighbor_spacing(const DiscreteMeasure& measure, int sample_cap) {
  const std::size_t count = measure.size();
  if (count < 2) return 0.0;

  // Rough cell size from the bounding box; refined only through queries.
  Vec lo = measure.atoms().front().position;
  Vec hi = lo;
  for (const MeasureAtom& atom : measure.atoms()) {
    lo = lo.cwiseMin(atom.position);
    hi = hi.cwiseMax(atom.position);
  }
  const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
  const double guess =
      extent / std::max(2.0, std::pow(static_cast<double>(count),
                                      1.0 / measure.ambient_dim()));
  PointIndex index(measure, guess);

  const std::size_t stride = std::max<std::size_t>(1, count / sample_cap);
  std::vector<double> nearest;
  for (std::size_t i = 0; i < count; i += stride) {
    const Vec& p = measure.atoms()[i].position;
    double best = std::numeric_limits<double>::infinity();
    double radius = guess;
    for (int round = 0; round < 60 && !(best < radius); ++round) {
      index.visit_ball(p, radius, [&](const MeasureAtom& atom) {
        const double dist = (atom.position - p).norm();
        if (dist > 0.0) best = std::min(best, dist);
      });
      radius *= 2.0;
      if (radius > 2.0 * extent && !std::isfinite(best)) break;
    }
    if (std::isfinite(best)) nearest.push_back(best);
  }
  if (nearest.empty()) return 0.0;
  std::sort(nearest.begin(), nearest.end());
  return nearest[nearest.size() / 2];
}

DensityProfile density_profile(const DiscreteMeasure& measure, const Vec& center,
                               int density_dim, std::vector<double> radii) {
  require(density_dim >= 1, "density_profile: density dimension must be positive");
  for (double r : radii) require(r > 0.0, "density_profile: radii must be positive");

  DensityProfile profile;
  profile.center = center;
  profile.density_dim = density_dim;
  profile.resolution_floor = 5.0 * nearest_neighbor_spacing(measure);
  profile.radii = std::move(radii);

  const SortedDistances sorted(measure, center);
  const double omega = unit_ball_volume(density_dim);
  for (double r : profile.radii) {
    const double mass = sorted.closed_ball_mass(r);
    profile.ratios.push_back(mass / (omega * std::pow(r, density_dim)));
    profile.resolved.push_back(r >= profile.resolution_floor);
  }
  return profile;
}

double profile_loglog_slope(const DensityProfile& profile) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    if (!profile.resolved[i] || profile.ratios[i] <= 0.0) continue;
    const double x = std::log(profile.radii[i]);
    const double y = std::log(profile.ratios[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  require(n >= 2, "profile_loglog_slope: fewer than two usable rows");
  const double denom = n * sxx - sx * sx;
  require(std::abs(denom) > 1e-30, "profile_loglog_slope: degenerate radii");
  return (n * sxy - sx * sy) / denom;
}

bool BallRatioScan::passes(double tolerance) const {
  return max_ratio >= std::pow(shrink_factor, density_dim) - tolerance;
}

BallRatioScan ball_ratio_scan(const DiscreteMeasure& measure, const Vec& center,
                              int density_dim, double shrink_factor,
                              std::vector<double> radii) {
  require(shrink_factor > 0.0 && shrink_factor < 1.0,
          "ball_ratio_scan: shrink factor must lie in (0, 1)");
  BallRatioScan scan;
  scan.shrink_factor = shrink_factor;
  scan.density_dim = density_dim;
  scan.radii = std::move(radii);

  const SortedDistances sorted(measure, center);
  for (double r : scan.radii) {
    const double outer = sorted.closed_ball_mass(r);
    if (outer <= 0.0) {
      scan.ratios.push_back(0.0);
      scan.valid.push_back(false);
      ++scan.skipped;
      continue;
    }
    const double inner = sorted.closed_ball_mass(shrink_factor * r);
    const double ratio = inner / outer;
    scan.ratios.push_back(ratio);
    scan.valid.push_back(true);
    scan.max_ratio = std::max(scan.max_ratio, ratio);
  }
  return scan;
}

DiscreteMeasure project_pushforward(const DiscreteVarifold& varifold,
                                    const Integrand& f, const Plane& target) {
  require(target.ambient_dim() == varifold.ambient_dim() &&
              target.dim() == varifold.plane_dim(),
          "project_pushforward: target plane dimension mismatch");
  std::vector<MeasureAtom> atoms;
  atoms.reserve(varifold.size());
  for (const VarifoldAtom& atom : varifold.atoms()) {
    atoms.push_back(MeasureAtom{(target.matrix() * atom.position).eval(),
                                atom.mass * f.value(atom.position, target)});
  }
  return DiscreteMeasure(varifold.ambient_dim(), std::move(atoms));
}

double density_drop_threshold(int d) {
  require(d >= 1, "density_drop_threshold: dimension must be positive");
  return 1.0 - std::pow(2.0, -(d + 6));
}

double probe_radius_factor(int d) {
  require(d >= 1, "probe_radius_factor: dimension must be positive");
  return std::pow(2.0, -(d + 9)) / std::pow(static_cast<double>(d), 4);
}

RectifiabilityDiagnostics rectifiability_diagnostics(
    const DiscreteMeasure& measure, const Vec& center, int density_dim,
    const std::vector<double>& radii, const std::vector<Plane>& plane_grid) {
  require(density_dim >= 1, "rectifiability_diagnostics: bad density dimension");
  RectifiabilityDiagnostics diag;
  diag.alpha = density_drop_threshold(density_dim);
  diag.beta = probe_radius_factor(density_dim);
  diag.density_dim = density_dim;
  diag.resolution_floor = 5.0 * nearest_neighbor_spacing(measure);

  const double omega = unit_ball_volume(density_dim);
  const double max_radius =
      radii.empty() ? 1.0 : *std::max_element(radii.begin(), radii.end());
  const double cell = std::max(diag.resolution_floor, max_radius / 64.0);
  PointIndex index(measure, cell);

  for (double r : radii) {
    RectifiabilityRow row;
    row.radius = r;
    row.ball_mass = index.ball_mass(center, r);
    if (row.ball_mass <= 0.0) {
      row.empty = true;
      diag.rows.push_back(row);
      continue;
    }
    const double base_density = row.ball_mass / (omega * std::pow(r, density_dim));

    // Dyadic scale scan, clipped at the resolution floor.
    std::vector<double> scales;
    for (int octave = 1; octave <= 8; ++octave) {
      const double s = r / std::pow(2.0, octave);
      if (s >= diag.resolution_floor && s < r) scales.push_back(s);
    }
    row.drop_scan_resolved = !scales.empty();
    if (row.drop_scan_resolved) {
      double low_mass = 0.0;
      index.visit_ball(center, r, [&](const MeasureAtom& atom) {
        for (double s : scales) {
          const double density =
              index.ball_mass(atom.position, s) / (omega * std::pow(s, density_dim));
          if (density <= diag.alpha * base_density) {
            low_mass += atom.mass;
            break;
          }
        }
      });
      row.low_density_fraction = low_mass / row.ball_mass;
    }

    // Plane coverage with the probe radius beta * r.
    const double probe = diag.beta * r;
    row.probe_resolved = probe >= diag.resolution_floor;
    double best = 0.0;
    int best_plane = -1;
    for (std::size_t t = 0; t < plane_grid.size(); ++t) {
      const Plane& plane = plane_grid[t];
      const Mat basis = plane.orthonormal_basis();
      const int k = plane.dim();
      // Lattice probe points on (center + plane) inside the ball.
      const int per_axis = 9;
      const double step = 2.0 * r / per_axis;
      std::vector<int> idx(k, 0);
      Vec coords(k);
      double worst = std::numeric_limits<double>::infinity();
      while (true) {
        for (int a = 0; a < k; ++a) coords[a] = -r + (idx[a] + 0.5) * step;
        if (coords.norm() <= r) {
          const Vec z = center + basis * coords;
          worst = std::min(worst, index.ball_mass(z, probe) / row.ball_mass);
        }
        int axis = 0;
        while (axis < k && ++idx[axis] == per_axis) {
          idx[axis] = 0;
          ++axis;
        }
        if (axis == k) break;
      }
      if (std::isfinite(worst) && worst > best) {
        best = worst;
        best_plane = static_cast<int>(t);
      }
    }
    row.plane_coverage = best;
    row.plane_argmax = best_plane;
    diag.rows.push_back(row);
  }
  return diag;
}

}  // namespace anivar
