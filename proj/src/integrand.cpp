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

#include "anivar/integrand.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace anivar {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

std::string join_names(const std::vector<std::string>& names) {
  std::ostringstream out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out << ", ";
    out << names[i];
  }
  return out.str();
}

}  // namespace

Integrand::Integrand(std::string name, nlohmann::json params, int ambient_dim,
                     int plane_dim, double lower_bound, double upper_bound,
                     bool autonomous, ValueFn value, SpatialGradFn spatial_grad,
                     PlaneGradFn plane_grad)
    : name_(std::move(name)),
      params_(std::move(params)),
      ambient_dim_(ambient_dim),
      plane_dim_(plane_dim),
      lower_(lower_bound),
      upper_(upper_bound),
      autonomous_(autonomous),
      value_(std::move(value)),
      spatial_grad_(std::move(spatial_grad)),
      plane_grad_(std::move(plane_grad)) {
  require(ambient_dim_ >= 2, "integrand: ambient dimension must be at least 2");
  require(plane_dim_ > 0 && plane_dim_ < ambient_dim_, "integrand: need 0 < d < n");
  require(lower_ > 0.0 && upper_ >= lower_, "integrand: bounds must satisfy 0 < lambda <= Lambda");
}

void Integrand::check_dims(const Vec& x, const Plane& plane) const {
  require(static_cast<int>(x.size()) == ambient_dim_,
          "integrand: position dimension mismatch");
  require(plane.ambient_dim() == ambient_dim_ && plane.dim() == plane_dim_,
          "integrand: plane dimension mismatch");
}

double Integrand::value(const Vec& x, const Plane& plane) const {
  check_dims(x, plane);
  return value_(x, plane);
}

Vec Integrand::spatial_gradient(const Vec& x, const Plane& plane) const {
  check_dims(x, plane);
  return spatial_grad_(x, plane);
}

Mat Integrand::plane_gradient(const Vec& x, const Plane& plane) const {
  check_dims(x, plane);
  return plane_grad_(x, plane);
}

double tangential_pairing(const Mat& plane_gradient, const Plane& plane,
                          const Mat& direction) {
  const Mat& p = plane.matrix();
  const Mat q = plane.complement();
  const Mat tangential = q * direction * p + p * direction * q;
  return (plane_gradient.array() * tangential.array()).sum();
}

Mat grassmann_correction(const Integrand& f, const Vec& x, const Plane& plane) {
  // The pairing <grad, Q L P + (Q L P)^t> as a linear functional of L is
  // represented by the matrix 2 Q grad P (grad symmetric).
  const Mat grad = f.plane_gradient(x, plane);
  return 2.0 * (plane.complement() * grad * plane.matrix());
}

Mat first_variation_matrix(const Integrand& f, const Vec& x, const Plane& plane) {
  return f.value(x, plane) * plane.matrix() + grassmann_correction(f, x, plane);
}

Integrand freeze(const Integrand& f, const Vec& x) {
  require(static_cast<int>(x.size()) == f.ambient_dim(),
          "freeze: position dimension mismatch");
  const Vec fixed = x;
  json params = f.params();
  params["frozen_at"] = std::vector<double>(fixed.data(), fixed.data() + fixed.size());
  Integrand inner = f;
  return Integrand(
      f.name() + "@frozen", std::move(params), f.ambient_dim(), f.plane_dim(),
      f.lower_bound(), f.upper_bound(), /*autonomous=*/true,
      [inner, fixed](const Vec&, const Plane& plane) { return inner.value(fixed, plane); },
      [fixed](const Vec&, const Plane&) { return Vec::Zero(fixed.size()).eval(); },
      [inner, fixed](const Vec&, const Plane& plane) {
        return inner.plane_gradient(fixed, plane);
      });
}

double norm_integrand_residual(const NormIntegrand& norm, int samples,
                               std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec v = rng.unit_vector(norm.ambient_dim);
    const double g = norm.value(v);
    const double g_neg = norm.value(-v);
    const double scale = std::max(1.0, std::abs(g));
    worst = std::max(worst, std::abs(g - g_neg) / scale);
    const double s = 0.25 + 4.0 * rng.uniform();
    worst = std::max(worst, std::abs(norm.value(s * v) - s * g) / (s * scale));
    const double euler = norm.gradient(v).dot(v);
    worst = std::max(worst, std::abs(euler - g) / scale);
  }
  return worst;
}

Integrand integrand_from_norm(const NormIntegrand& norm) {
  const int n = norm.ambient_dim;
  require(n >= 2, "integrand_from_norm: ambient dimension must be at least 2");
  const double residual = norm_integrand_residual(norm, 64, 0x5eedu);
  require(residual <= 1e-8,
          "integrand_from_norm: norm violates homogeneity/evenness/Euler identity "
          "(residual " + std::to_string(residual) + ")");

  // Crude positive bounds on the unit sphere; recorded, not enforced.
  Rng rng(0xb0b0u);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double g = norm.value(rng.unit_vector(n));
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  require(lo > 0.0, "integrand_from_norm: norm is not positive on sampled directions");

  auto value_fn = norm.value;
  auto grad_fn = norm.gradient;
  return Integrand(
      norm.name, norm.params, n, n - 1, lo, hi, /*autonomous=*/true,
      [value_fn](const Vec&, const Plane& plane) {
        return value_fn(plane.unit_normal());
      },
      [n](const Vec&, const Plane&) { return Vec::Zero(n).eval(); },
      [value_fn, grad_fn](const Vec&, const Plane& plane) {
        const Vec normal = plane.unit_normal();
        const Vec grad = grad_fn(normal);
        // In-plane part of the direction gradient; the normal part is the
        // value itself by the Euler identity.
        const Vec tangential = grad - grad.dot(normal) * normal;
        return (-0.5 * (normal * tangential.transpose() +
                        tangential * normal.transpose()))
            .eval();
      });
}

FdValidationReport fd_validate(const Integrand& f, int samples, double step,
                               std::uint64_t seed) {
  require(step > 0.0, "fd_validate: step must be positive");
  FdValidationReport report;
  report.samples = samples;
  report.step = step;
  Rng rng(seed);
  const int n = f.ambient_dim();
  const int d = f.plane_dim();

  for (int s = 0; s < samples; ++s) {
    const Vec x = rng.gaussian_vector(n);
    const Plane plane = Plane::from_basis(rng.gaussian_matrix(n, d));

    const Vec grad_x = f.spatial_gradient(x, plane);
    for (int i = 0; i < n; ++i) {
      Vec xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      const double fd = (f.value(xp, plane) - f.value(xm, plane)) / (2.0 * step);
      const double gap = std::abs(fd - grad_x[i]);
      if (gap > report.max_spatial_gap) {
        report.max_spatial_gap = gap;
        report.worst_spatial_sample = s;
      }
    }

    Mat velocity = rng.gaussian_matrix(n, n);
    velocity /= velocity.norm();
    const TangentVector tangent = projection_curve_derivative(plane, velocity);
    const Mat basis = plane.orthonormal_basis();
    const Mat eye = Mat::Identity(n, n);
    const Plane forward = Plane::from_basis((eye + step * velocity) * basis);
    const Plane backward = Plane::from_basis((eye - step * velocity) * basis);
    const double fd =
        (f.value(x, forward) - f.value(x, backward)) / (2.0 * step);
    const double analytic =
        tangential_pairing(f.plane_gradient(x, plane), plane, tangent.matrix);
    const double gap = std::abs(fd - analytic);
    if (gap > report.max_plane_gap) {
      report.max_plane_gap = gap;
      report.worst_plane_sample = s;
    }
  }
  return report;
}

Integrand make_area_integrand(int ambient_dim, int plane_dim) {
  const int n = ambient_dim;
  return Integrand(
      "area", json::object(), ambient_dim, plane_dim, 1.0, 1.0, /*autonomous=*/true,
      [](const Vec&, const Plane&) { return 1.0; },
      [n](const Vec&, const Plane&) { return Vec::Zero(n).eval(); },
      [n](const Vec&, const Plane&) { return Mat::Zero(n, n).eval(); });
}

NormIntegrand make_euclidean_norm(int ambient_dim) {
  NormIntegrand norm;
  norm.ambient_dim = ambient_dim;
  norm.name = "euclidean-norm";
  norm.params = json::object();
  norm.value = [](const Vec& v) { return v.norm(); };
  norm.gradient = [](const Vec& v) { return (v / v.norm()).eval(); };
  return norm;
}

NormIntegrand make_ellipsoid_norm(const Mat& quadratic_form) {
  require(quadratic_form.rows() == quadratic_form.cols(),
          "ellipsoid-norm: matrix must be square");
  require((quadratic_form - quadratic_form.transpose()).norm() <= 1e-12,
          "ellipsoid-norm: matrix must be symmetric");
  Eigen::LLT<Mat> llt(quadratic_form);
  require(llt.info() == Eigen::Success,
          "ellipsoid-norm: matrix must be positive definite");

  const Mat a = quadratic_form;
  const int n = static_cast<int>(a.rows());
  NormIntegrand norm;
  norm.ambient_dim = n;
  norm.name = "ellipsoid-norm";
  std::vector<double> flat(a.data(), a.data() + a.size());
  norm.params = json{{"matrix", flat}};
  norm.value = [a](const Vec& v) { return std::sqrt(v.dot(a * v)); };
  norm.gradient = [a](const Vec& v) {
    const double g = std::sqrt(v.dot(a * v));
    return ((a * v) / g).eval();
  };
  return norm;
}

NormIntegrand make_perturbed_norm(int ambient_dim, double eps) {
  require(eps > -0.5, "perturbed-norm: eps must keep the weight positive");
  NormIntegrand norm;
  norm.ambient_dim = ambient_dim;
  norm.name = "perturbed-norm";
  norm.params = json{{"eps", eps}};
  norm.value = [eps](const Vec& v) {
    const double r = v.norm();
    const double quartic = v.array().pow(4).sum();
    return r + eps * quartic / (r * r * r);
  };
  norm.gradient = [eps](const Vec& v) {
    const double r = v.norm();
    const double quartic = v.array().pow(4).sum();
    const Vec cubes = v.array().pow(3);
    return (v / r + eps * (4.0 * cubes / (r * r * r) -
                           3.0 * quartic * v / std::pow(r, 5)))
        .eval();
  };
  return norm;
}

Integrand make_sine_integrand(int ambient_dim, int plane_dim) {
  const int n = ambient_dim;
  return Integrand(
      "sine-nonautonomous", json::object(), ambient_dim, plane_dim, 0.5, 1.5,
      /*autonomous=*/false,
      [](const Vec& x, const Plane& plane) {
        return 1.0 + 0.5 * std::sin(x[0]) * plane.matrix()(0, 0);
      },
      [n](const Vec& x, const Plane& plane) {
        Vec g = Vec::Zero(n);
        g[0] = 0.5 * std::cos(x[0]) * plane.matrix()(0, 0);
        return g;
      },
      [n](const Vec& x, const Plane&) {
        Mat g = Mat::Zero(n, n);
        g(0, 0) = 0.5 * std::sin(x[0]);
        return g;
      });
}

std::vector<std::string> integrand_names() {
  return {"area", "euclidean-norm", "ellipsoid-norm", "perturbed-norm",
          "sine-nonautonomous"};
}

std::vector<std::string> norm_integrand_names() {
  return {"euclidean-norm", "ellipsoid-norm", "perturbed-norm"};
}

NormIntegrand make_norm_integrand(const nlohmann::json& spec, int ambient_dim) {
  require(spec.is_object() && spec.contains("name"),
          "integrand spec: expected an object with a \"name\" field");
  const std::string name = spec.at("name").get<std::string>();
  const json params = spec.value("params", json::object());

  if (name == "euclidean-norm") return make_euclidean_norm(ambient_dim);
  if (name == "ellipsoid-norm") {
    Mat a;
    if (params.contains("matrix")) {
      const auto flat = params.at("matrix").get<std::vector<double>>();
      require(static_cast<int>(flat.size()) == ambient_dim * ambient_dim,
              "ellipsoid-norm: field \"matrix\" must have n*n entries");
      a = Eigen::Map<const Mat>(flat.data(), ambient_dim, ambient_dim);
      a = 0.5 * (a + a.transpose().eval());
    } else if (params.contains("diag")) {
      const auto diag = params.at("diag").get<std::vector<double>>();
      require(static_cast<int>(diag.size()) == ambient_dim,
              "ellipsoid-norm: field \"diag\" must have n entries");
      a = Eigen::Map<const Vec>(diag.data(), ambient_dim).asDiagonal();
    } else {
      a = Mat::Identity(ambient_dim, ambient_dim);
    }
    return make_ellipsoid_norm(a);
  }
  if (name == "perturbed-norm") {
    require(params.contains("eps"), "perturbed-norm: missing field \"eps\"");
    return make_perturbed_norm(ambient_dim, params.at("eps").get<double>());
  }
  throw std::invalid_argument("unknown norm integrand \"" + name +
                              "\"; available: " + join_names(norm_integrand_names()));
}

Integrand make_integrand(const nlohmann::json& spec, int ambient_dim, int plane_dim) {
  require(spec.is_object() && spec.contains("name"),
          "integrand spec: expected an object with a \"name\" field");
  const std::string name = spec.at("name").get<std::string>();

  if (name == "area") return make_area_integrand(ambient_dim, plane_dim);
  if (name == "sine-nonautonomous") return make_sine_integrand(ambient_dim, plane_dim);
  if (name == "euclidean-norm" || name == "ellipsoid-norm" || name == "perturbed-norm") {
    require(plane_dim == ambient_dim - 1,
            "integrand \"" + name + "\" requires codimension one (d = n-1)");
    return integrand_from_norm(make_norm_integrand(spec, ambient_dim));
  }
  throw std::invalid_argument("unknown integrand \"" + name +
                              "\"; available: " + join_names(integrand_names()));
}

}  // namespace anivar
