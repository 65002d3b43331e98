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

#include "anivar/varifold.hpp"

#include <cmath>
#include <stdexcept>

namespace anivar {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

double bump(double s) {
  const double w = 1.0 - s * s;
  return w > 0.0 ? w * w * w : 0.0;
}

double bump_derivative(double s) {
  const double w = 1.0 - s * s;
  return w > 0.0 ? -6.0 * s * w * w : 0.0;
}

void check_match(const DiscreteVarifold& varifold, const Integrand& f,
                 const char* who) {
  require(varifold.ambient_dim() == f.ambient_dim() &&
              varifold.plane_dim() == f.plane_dim(),
          std::string(who) + ": varifold/integrand dimension mismatch");
}

}  // namespace

DiscreteVarifold::DiscreteVarifold(int ambient_dim, int plane_dim,
                                   std::vector<VarifoldAtom> atoms)
    : ambient_dim_(ambient_dim), plane_dim_(plane_dim), atoms_(std::move(atoms)) {
  require(ambient_dim_ >= 2 && plane_dim_ > 0 && plane_dim_ < ambient_dim_,
          "varifold: need 0 < d < n");
  for (const VarifoldAtom& atom : atoms_) {
    require(static_cast<int>(atom.position.size()) == ambient_dim_,
            "varifold: atom position dimension mismatch");
    require(atom.plane.ambient_dim() == ambient_dim_ &&
                atom.plane.dim() == plane_dim_,
            "varifold: atom plane dimension mismatch");
    require(atom.mass > 0.0, "varifold: atom masses must be positive");
  }
}

double DiscreteVarifold::total_mass() const {
  double total = 0.0;
  for (const VarifoldAtom& atom : atoms_) total += atom.mass;
  return total;
}

Diffeo flow_map(const VectorField& field, double t) {
  auto value = field.value;
  auto jac = field.jacobian;
  Diffeo psi;
  psi.map = [value, t](const Vec& y) { return (y + t * value(y)).eval(); };
  psi.jacobian = [jac, t](const Vec& y) {
    const Mat dg = jac(y);
    return (Mat::Identity(dg.rows(), dg.cols()) + t * dg).eval();
  };
  return psi;
}

VectorField bump_field(const Vec& center, double halfwidth, int axis,
                       double amplitude) {
  const int n = static_cast<int>(center.size());
  require(halfwidth > 0.0, "bump_field: halfwidth must be positive");
  require(axis >= 0 && axis < n, "bump_field: axis out of range");

  const Vec c = center;
  const double rho = halfwidth;
  VectorField field;
  field.support_center = c;
  field.support_radius = rho * std::sqrt(static_cast<double>(n));
  field.value = [c, rho, axis, amplitude, n](const Vec& y) {
    double phi = 1.0;
    for (int j = 0; j < n; ++j) phi *= bump((y[j] - c[j]) / rho);
    Vec g = Vec::Zero(n);
    g[axis] = amplitude * phi;
    return g;
  };
  field.jacobian = [c, rho, axis, amplitude, n](const Vec& y) {
    Mat dg = Mat::Zero(n, n);
    Vec factors(n);
    double phi = 1.0;
    for (int j = 0; j < n; ++j) {
      factors[j] = bump((y[j] - c[j]) / rho);
      phi *= factors[j];
    }
    if (phi == 0.0) return dg;
    for (int l = 0; l < n; ++l) {
      const double s = (y[l] - c[l]) / rho;
      double partial = bump_derivative(s) / rho;
      for (int j = 0; j < n; ++j) {
        if (j != l) partial *= factors[j];
      }
      dg(axis, l) = amplitude * partial;
    }
    return dg;
  };
  // sup |g| is attained at the center; sup |Dg| along a single axis with the
  // other factors at 1: max |(1-s^2)^3'| = 96 / (25 sqrt 5).
  const double max_bump_slope = 96.0 / (25.0 * std::sqrt(5.0));
  field.c1_norm = std::abs(amplitude) * (1.0 + max_bump_slope / rho);
  return field;
}

std::vector<VectorField> standard_test_fields(int ambient_dim, int count,
                                              double inner_radius,
                                              std::uint64_t seed) {
  require(count > 0 && inner_radius > 0.0, "standard_test_fields: bad arguments");
  Rng rng(seed);
  std::vector<VectorField> fields;
  fields.reserve(count);
  const double root_n = std::sqrt(static_cast<double>(ambient_dim));
  for (int i = 0; i < count; ++i) {
    const double rho = inner_radius * (0.15 + 0.2 * rng.uniform()) / root_n;
    const double reach = inner_radius - rho * root_n;
    const Vec dir = rng.unit_vector(ambient_dim);
    const double dist =
        0.9 * reach * std::pow(rng.uniform(), 1.0 / ambient_dim);
    const Vec center = dist * dir;
    const int axis = i % ambient_dim;
    fields.push_back(bump_field(center, rho, axis, 1.0));
  }
  return fields;
}

double energy(const DiscreteVarifold& varifold, const Integrand& f) {
  check_match(varifold, f, "energy");
  double total = 0.0;
  for (const VarifoldAtom& atom : varifold.atoms()) {
    total += atom.mass * f.value(atom.position, atom.plane);
  }
  return total;
}

double first_variation(const DiscreteVarifold& varifold, const Integrand& f,
                       const VectorField& field) {
  check_match(varifold, f, "first_variation");
  double total = 0.0;
  for (const VarifoldAtom& atom : varifold.atoms()) {
    const Vec g = field.value(atom.position);
    const Mat dg = field.jacobian(atom.position);
    const double spatial = f.spatial_gradient(atom.position, atom.plane).dot(g);
    const Mat b = first_variation_matrix(f, atom.position, atom.plane);
    total += atom.mass * (spatial + (b.array() * dg.array()).sum());
  }
  return total;
}

FirstVariationCheck first_variation_fd_check(const DiscreteVarifold& varifold,
                                             const Integrand& f,
                                             const VectorField& field, double t) {
  require(t > 0.0, "first_variation_fd_check: step must be positive");
  FirstVariationCheck check;
  check.analytic = first_variation(varifold, f, field);
  const double forward = energy(pushforward(varifold, flow_map(field, t)), f);
  const double backward = energy(pushforward(varifold, flow_map(field, -t)), f);
  check.finite_difference = (forward - backward) / (2.0 * t);
  check.gap = std::abs(check.analytic - check.finite_difference);
  return check;
}

DiscreteVarifold pushforward(const DiscreteVarifold& varifold, const Diffeo& psi) {
  std::vector<VarifoldAtom> atoms;
  atoms.reserve(varifold.size());
  for (const VarifoldAtom& atom : varifold.atoms()) {
    const Mat jac = psi.jacobian(atom.position);
    const Mat image = jac * atom.plane.orthonormal_basis();
    const Mat gram = image.transpose() * image;
    const double det = gram.determinant();
    require(det > 1e-300, "pushforward: singular differential at an atom");
    atoms.push_back(VarifoldAtom{psi.map(atom.position), Plane::from_basis(image),
                                 atom.mass * std::sqrt(det)});
  }
  return DiscreteVarifold(varifold.ambient_dim(), varifold.plane_dim(),
                          std::move(atoms));
}

DiscreteVarifold varifold_rescale(const DiscreteVarifold& varifold,
                                  const Vec& center, double radius) {
  require(radius > 0.0, "varifold_rescale: radius must be positive");
  require(static_cast<int>(center.size()) == varifold.ambient_dim(),
          "varifold_rescale: center dimension mismatch");
  // Closed-ball normalizer, open-ball restriction: atoms exactly on the
  // sphere count toward the weight but are dropped from the result.
  double closed_mass = 0.0;
  for (const VarifoldAtom& atom : varifold.atoms()) {
    if ((atom.position - center).norm() <= radius) closed_mass += atom.mass;
  }
  require(closed_mass > 0.0, "varifold_rescale: empty ball");

  std::vector<VarifoldAtom> atoms;
  for (const VarifoldAtom& atom : varifold.atoms()) {
    const Vec shifted = (atom.position - center) / radius;
    if (shifted.norm() < 1.0) {
      atoms.push_back(VarifoldAtom{shifted, atom.plane, atom.mass / closed_mass});
    }
  }
  return DiscreteVarifold(varifold.ambient_dim(), varifold.plane_dim(),
                          std::move(atoms));
}

FlatCounterexample counterexample_varifold(const Integrand& f,
                                           const GrassmannMeasure& measure,
                                           double radius, int samples) {
  require(f.autonomous(), "counterexample_varifold: integrand must be autonomous");
  require(radius > 0.0 && samples >= 1, "counterexample_varifold: bad arguments");
  require(f.ambient_dim() == measure.ambient_dim() &&
              f.plane_dim() == measure.plane_dim(),
          "counterexample_varifold: dimension mismatch");
  const int n = f.ambient_dim();
  const Vec origin = Vec::Zero(n);

  const Mat a = averaged_variation_matrix(f, origin, measure);
  double bscale = 0.0;
  for (int j : measure.support()) {
    bscale = std::max(bscale,
                      first_variation_matrix(f, origin, measure.grid()[j]).norm());
  }
  require(a.norm() > 1e-12 * std::max(bscale, 1.0),
          "counterexample_varifold: averaged matrix is numerically zero");

  const Mat basis = image_space(a);
  const int k = static_cast<int>(basis.cols());

  const int per_axis = std::max(
      1, static_cast<int>(std::llround(std::pow(static_cast<double>(samples),
                                                1.0 / static_cast<double>(k)))));
  const double h = 2.0 * radius / static_cast<double>(per_axis);
  const double cell_mass = std::pow(h, k);
  const std::vector<int> support = measure.support(1e-15);

  std::vector<VarifoldAtom> atoms;
  std::vector<int> index(k, 0);
  Vec coords(k);
  while (true) {
    for (int axis = 0; axis < k; ++axis) {
      coords[axis] = -radius + (index[axis] + 0.5) * h;
    }
    if (coords.norm() < radius) {
      const Vec position = basis * coords;
      for (int j : support) {
        atoms.push_back(VarifoldAtom{position, measure.grid()[j],
                                     cell_mass * measure.weights()[j]});
      }
    }
    int axis = 0;
    while (axis < k && ++index[axis] == per_axis) {
      index[axis] = 0;
      ++axis;
    }
    if (axis == k) break;
  }

  FlatCounterexample result{
      DiscreteVarifold(n, f.plane_dim(), std::move(atoms)),
      k,
      measure.is_dirac(),
      a,
      basis,
      h};
  return result;
}

StationarityReport stationarity_scan(const DiscreteVarifold& varifold,
                                     const Integrand& f,
                                     const std::vector<VectorField>& fields) {
  require(!fields.empty(), "stationarity_scan: empty field list");
  StationarityReport report;
  report.values.reserve(fields.size());
  report.ratios.reserve(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const double value = first_variation(varifold, f, fields[i]);
    const double ratio = std::abs(value) / std::max(fields[i].c1_norm, 1e-300);
    report.values.push_back(value);
    report.ratios.push_back(ratio);
    if (ratio >= report.max_ratio) {
      if (ratio > report.max_ratio || report.worst_field < 0) {
        report.max_ratio = ratio;
        report.worst_field = static_cast<int>(i);
      }
    }
  }
  return report;
}

}  // namespace anivar
