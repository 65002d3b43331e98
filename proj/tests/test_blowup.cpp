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

#include <doctest.h>

#include <cmath>

#include "anivar/blowup.hpp"
#include "anivar/rng.hpp"

using namespace anivar;

namespace {

// Lattice sample of the span of the first `k` coordinate axes in R^n,
// cell masses h^k, over [-extent, extent]^k.
DiscreteMeasure lattice_flat(int n, int k, double h, double extent) {
  std::vector<MeasureAtom> atoms;
  const int m = static_cast<int>(std::llround(2.0 * extent / h));
  std::vector<int> idx(k, 0);
  while (true) {
    Vec p = Vec::Zero(n);
    for (int a = 0; a < k; ++a) p[a] = -extent + idx[a] * h;
    atoms.push_back(MeasureAtom{p, std::pow(h, k)});
    int axis = 0;
    while (axis < k && ++idx[axis] > m) {
      idx[axis] = 0;
      ++axis;
    }
    if (axis == k) break;
  }
  return DiscreteMeasure(n, std::move(atoms));
}

Vec zeros(int n) { return Vec::Zero(n); }

}  // namespace

TEST_CASE("ball_mass uses closed balls") {
  std::vector<MeasureAtom> atoms;
  Vec on_sphere = Vec::Zero(2);
  on_sphere[0] = 1.0;
  atoms.push_back(MeasureAtom{on_sphere, 2.0});
  atoms.push_back(MeasureAtom{Vec::Zero(2), 3.0});
  const DiscreteMeasure mu(2, std::move(atoms));
  CHECK(ball_mass(mu, zeros(2), 1.0) == 5.0);   // sphere atom included
  CHECK(ball_mass(mu, zeros(2), 0.99) == 3.0);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
}

TEST_CASE("rescale: point mass, sphere-atom bookkeeping, plane samples") {
  // Point mass at the center becomes a unit mass at the origin.
  std::vector<MeasureAtom> point{MeasureAtom{Vec::Constant(2, 0.5), 7.0}};
  const DiscreteMeasure pm(2, std::move(point));
  const DiscreteMeasure scaled = rescale(pm, Vec::Constant(2, 0.5), 0.25);
  REQUIRE(scaled.size() == 1);
  CHECK(scaled.atoms()[0].position.norm() == 0.0);
  CHECK(scaled.atoms()[0].mass == 1.0);

  // An atom exactly on the sphere joins the normalizer but not the output.
  std::vector<MeasureAtom> two;
  Vec inner = Vec::Zero(2);
  inner[0] = 0.5;
  Vec edge = Vec::Zero(2);
  edge[0] = 1.0;
  two.push_back(MeasureAtom{inner, 1.0});
  two.push_back(MeasureAtom{edge, 3.0});
  const DiscreteMeasure with_edge(2, std::move(two));
  const DiscreteMeasure out = rescale(with_edge, zeros(2), 1.0);
  REQUIRE(out.size() == 1);
  CHECK(out.atoms()[0].mass == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(out.total_mass() < 1.0);

  // Plane samples rescale to plane samples of total mass near one.
  const DiscreteMeasure plane = lattice_flat(3, 2, 1.0 / 32.0, 1.0);
  const DiscreteMeasure zoomed = rescale(plane, zeros(3), 0.5);
  CHECK(zoomed.total_mass() <= 1.0);
  CHECK(zoomed.total_mass() >= 1.0 - 0.05);
  for (const MeasureAtom& atom : zoomed.atoms()) {
    CHECK(atom.position.norm() < 1.0);
    CHECK(atom.position[2] == 0.0);
  }

  CHECK_THROWS_AS(rescale(plane, Vec::Constant(3, 100.0), 0.5),
                  std::invalid_argument);
}

TEST_CASE("weight measure / rescale compatibility is exact") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.integer(3));
    const int d = 1 + static_cast<int>(rng.integer(n - 1));
    std::vector<VarifoldAtom> atoms;
    const int count = 5 + static_cast<int>(rng.integer(20));
    for (int i = 0; i < count; ++i) {
      atoms.push_back(VarifoldAtom{rng.gaussian_vector(n),
                                   Plane::from_basis(rng.gaussian_matrix(n, d)),
                                   0.1 + rng.uniform()});
    }
    const DiscreteVarifold v(n, d, std::move(atoms));
    const Vec center = v.atoms()[0].position + 0.01 * rng.gaussian_vector(n);
    const double radius = 0.5 + rng.uniform();

    const DiscreteMeasure via_varifold =
        weight_measure(varifold_rescale(v, center, radius));
    const DiscreteMeasure via_measure = rescale(weight_measure(v), center, radius);
    REQUIRE(via_varifold.size() == via_measure.size());
    for (std::size_t i = 0; i < via_varifold.size(); ++i) {
      // Bitwise equality: both routes perform the same arithmetic.
      CHECK((via_varifold.atoms()[i].position - via_measure.atoms()[i].position)
                .norm() == 0.0);
      CHECK(via_varifold.atoms()[i].mass == via_measure.atoms()[i].mass);
    }
  }
}

TEST_CASE("density profile: plane samples sit near ratio one") {
  const double h = 1.0 / 64.0;
  const DiscreteMeasure plane = lattice_flat(3, 2, h, 1.0 + 8.0 * h);
  const DensityProfile profile =
      density_profile(plane, zeros(3), 2, {1.0, 0.75, 0.5});
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    CHECK(profile.resolved[i]);
    CHECK(std::abs(profile.ratios[i] - 1.0) <= 0.05);
  }
  CHECK(profile.resolution_floor == doctest::Approx(5.0 * h).epsilon(1e-9));
}

TEST_CASE("density profile: lower-dimensional flats diverge with slope k-d") {
  const double h = 1.0 / 256.0;
  const DiscreteMeasure line = lattice_flat(3, 1, h, 4.0);
  DensityProfile profile =
      density_profile(line, zeros(3), 2, {3.0, 2.0, 1.3, 0.9, 0.6, 0.4, 0.3});
  const double slope = profile_loglog_slope(profile);
  CHECK(std::abs(slope - (1.0 - 2.0)) <= 0.1);

  // Empty measure: all ratios zero.
  const DiscreteMeasure empty(3, {});
  const DensityProfile nothing = density_profile(empty, zeros(3), 2, {1.0, 0.5});
  for (double ratio : nothing.ratios) CHECK(ratio == 0.0);
}

TEST_CASE("ball ratio scan: plane, point mass, unsupported center") {
  const double h = 1.0 / 64.0;
  const DiscreteMeasure plane = lattice_flat(3, 2, h, 1.0);
  const BallRatioScan scan =
      ball_ratio_scan(plane, zeros(3), 2, 0.5, {0.9, 0.7, 0.5});
  CHECK(scan.max_ratio >= 0.25 - 0.02);
  CHECK(scan.max_ratio <= 0.25 + 0.05);
  CHECK(scan.passes(0.02));

  std::vector<MeasureAtom> point{MeasureAtom{zeros(3), 1.0}};
  const DiscreteMeasure pm(3, std::move(point));
  const BallRatioScan unit = ball_ratio_scan(pm, zeros(3), 2, 0.5, {1.0, 0.1});
  CHECK(unit.max_ratio == 1.0);

  const BallRatioScan far =
      ball_ratio_scan(pm, Vec::Constant(3, 50.0), 2, 0.5, {1.0, 0.1});
  CHECK(far.skipped == 2);
  CHECK_FALSE(far.valid[0]);

  CHECK_THROWS_AS(ball_ratio_scan(pm, zeros(3), 2, 1.5, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("project_pushforward: identity, tilt compression, concentration") {
  const Integrand area = make_area_integrand(2, 1);

  // Supported on the target plane already: positions and masses unchanged.
  Mat e1(2, 1);
  e1 << 1, 0;
  const Plane horizontal = Plane::from_basis(e1);
  std::vector<VarifoldAtom> flat_atoms;
  for (int i = 0; i < 10; ++i) {
    Vec p = Vec::Zero(2);
    p[0] = -1.0 + 0.2 * i;
    flat_atoms.push_back(VarifoldAtom{p, horizontal, 0.2});
  }
  const DiscreteVarifold flat(2, 1, std::move(flat_atoms));
  const DiscreteMeasure projected = project_pushforward(flat, area, horizontal);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    CHECK((projected.atoms()[i].position - flat.atoms()[i].position).norm() <=
          1e-15);
    CHECK(projected.atoms()[i].mass == flat.atoms()[i].mass);
  }

  // Tilted line: positions compress by cos(theta), masses do not rescale.
  const double theta = 0.7;
  Mat tilted_dir(2, 1);
  tilted_dir << std::cos(theta), std::sin(theta);
  const Plane tilted = Plane::from_basis(tilted_dir);
  std::vector<VarifoldAtom> tilted_atoms;
  for (int i = 0; i < 10; ++i) {
    const double s = -1.0 + 0.2 * i;
    tilted_atoms.push_back(
        VarifoldAtom{(s * tilted_dir.col(0)).eval(), tilted, 0.2});
  }
  const DiscreteVarifold slanted(2, 1, std::move(tilted_atoms));
  const DiscreteMeasure shadow = project_pushforward(slanted, area, horizontal);
  for (std::size_t i = 0; i < shadow.size(); ++i) {
    const double s = -1.0 + 0.2 * static_cast<double>(i);
    CHECK(shadow.atoms()[i].position[0] ==
          doctest::Approx(s * std::cos(theta)).epsilon(1e-12));
    CHECK(shadow.atoms()[i].position[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(shadow.atoms()[i].mass == doctest::Approx(0.2).epsilon(1e-12));
  }

  // Vertical line projects onto a single point of the horizontal axis.
  Mat e2(2, 1);
  e2 << 0, 1;
  const Plane vertical = Plane::from_basis(e2);
  std::vector<VarifoldAtom> vertical_atoms;
  for (int i = 0; i < 10; ++i) {
    Vec p = Vec::Zero(2);
    p[1] = -1.0 + 0.2 * i;
    vertical_atoms.push_back(VarifoldAtom{p, vertical, 0.2});
  }
  const DiscreteVarifold pole(2, 1, std::move(vertical_atoms));
  const DiscreteMeasure collapsed = project_pushforward(pole, area, horizontal);
  for (const MeasureAtom& atom : collapsed.atoms()) {
    CHECK(atom.position.norm() <= 1e-15);
  }
}

TEST_CASE("rectifiability constants match the closed forms for d = 1..4") {
  for (int d = 1; d <= 4; ++d) {
    CHECK(density_drop_threshold(d) == 1.0 - std::pow(2.0, -(d + 6)));
    CHECK(probe_radius_factor(d) ==
          std::pow(2.0, -(d + 9)) / std::pow(static_cast<double>(d), 4));
  }
  CHECK(density_drop_threshold(1) == 0.9921875);
  CHECK(probe_radius_factor(1) == 0.0009765625);
}

TEST_CASE("rectifiability diagnostics: lattice plane has no low-density mass") {
  const double h = 1.0 / 64.0;
  const DiscreteMeasure plane = lattice_flat(2, 2, h, 1.0);
  const double r = 40.0 * h;
  std::vector<Plane> candidates = sample_grid(2, 1, 4, 1);

  const RectifiabilityDiagnostics diag =
      rectifiability_diagnostics(plane, zeros(2), 2, {r}, candidates);
  REQUIRE(diag.rows.size() == 1);
  CHECK(diag.alpha == 1.0 - std::pow(2.0, -8));
  CHECK(diag.rows[0].drop_scan_resolved);
  CHECK(diag.rows[0].low_density_fraction == 0.0);
}

TEST_CASE("rectifiability diagnostics: plane coverage along a sampled line") {
  // One-dimensional density: the probe radius beta r is resolvable with a
  // fine line sample, and the true line maximizes the coverage statistic.
  const double h = 5e-5;
  const DiscreteMeasure line = lattice_flat(2, 1, h, 0.75);
  const double r = 0.5;
  Mat e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  const std::vector<Plane> candidates{Plane::from_basis(e1), Plane::from_basis(e2)};

  const RectifiabilityDiagnostics diag =
      rectifiability_diagnostics(line, zeros(2), 1, {r}, candidates);
  REQUIRE(diag.rows.size() == 1);
  const RectifiabilityRow& row = diag.rows[0];
  CHECK(row.probe_resolved);
  CHECK(row.plane_argmax == 0);  // the true line wins
  CHECK(row.plane_coverage >= 0.9 * diag.beta);
  CHECK(row.plane_coverage <= 1.5 * diag.beta);
  CHECK(row.low_density_fraction == 0.0);
}

TEST_CASE("nearest neighbor spacing of a lattice is the cell width") {
  const double h = 1.0 / 32.0;
  const DiscreteMeasure plane = lattice_flat(2, 2, h, 0.5);
  CHECK(nearest_neighbor_spacing(plane) == doctest::Approx(h).epsilon(1e-12));
}
