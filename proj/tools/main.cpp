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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anivar/atomic.hpp"
#include "anivar/blowup.hpp"
#include "anivar/integrand.hpp"
#include "anivar/plane.hpp"
#include "anivar/report.hpp"
#include "anivar/varifold.hpp"

namespace {

using anivar::Mat;
using anivar::Vec;
using nlohmann::json;

struct CommonOptions {
  std::string integrand = "area";
  double eps = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> diag;
  std::vector<double> matrix;
  int n = 0;
  int d = 0;  // 0 means "default to n-1"
  int grid = 0;
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0 means "module default"
  std::string out;
};

json integrand_spec(const CommonOptions& opt) {
  if (!opt.integrand.empty() && opt.integrand.front() == '{') {
    return json::parse(opt.integrand);
  }
  if (opt.integrand.size() > 5 &&
      opt.integrand.substr(opt.integrand.size() - 5) == ".json") {
    return json::parse(anivar::read_file(opt.integrand));
  }
  json params = json::object();
  if (!std::isnan(opt.eps)) params["eps"] = opt.eps;
  if (!opt.diag.empty()) params["diag"] = opt.diag;
  if (!opt.matrix.empty()) params["matrix"] = opt.matrix;
  return json{{"name", opt.integrand}, {"params", params}};
}

void add_integrand_flags(CLI::App* cmd, CommonOptions* opt) {
  cmd->add_option("--integrand", opt->integrand,
                  "integrand name, inline JSON, or path to a .json spec");
  cmd->add_option("--eps", opt->eps, "perturbation strength for perturbed-norm");
  cmd->add_option("--diag", opt->diag, "diagonal of the ellipsoid-norm form")
      ->delimiter(',');
  cmd->add_option("--matrix", opt->matrix,
                  "row-major entries of the ellipsoid-norm form")
      ->delimiter(',');
}

void emit(const json& report, const std::string& out_path) {
  const std::string text = anivar::dump_json(report);
  if (!out_path.empty()) anivar::write_file(out_path, text);
  std::cout << text;
}

Vec parse_point(const std::string& text, int n) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string cell;
  while (std::getline(stream, cell, ',')) values.push_back(std::stod(cell));
  if (static_cast<int>(values.size()) != n) {
    throw std::invalid_argument("point \"" + text + "\" must have " +
                                std::to_string(n) + " coordinates");
  }
  return Eigen::Map<const Vec>(values.data(), n);
}

int resolved_plane_dim(const CommonOptions& opt) {
  if (opt.n < 2) throw std::invalid_argument("missing or invalid --n");
  int d = opt.d > 0 ? opt.d : opt.n - 1;
  if (d <= 0 || d >= opt.n) throw std::invalid_argument("need 0 < d < n");
  return d;
}

int grid_size_default(const CommonOptions& opt, int d) {
  if (opt.grid > 0) return opt.grid;
  if (d == opt.n - 1) return anivar::default_direction_grid(opt.n);
  return 2000;
}

int run_check_ac(const CommonOptions& opt, const std::string& point_text) {
  const int d = resolved_plane_dim(opt);
  const anivar::Integrand f = anivar::make_integrand(integrand_spec(opt), opt.n, d);
  const Vec point =
      point_text.empty() ? Vec::Zero(opt.n) : parse_point(point_text, opt.n);
  auto grid = anivar::make_plane_grid(
      anivar::sample_grid(opt.n, d, grid_size_default(opt, d), opt.seed));
  anivar::AcOptions options;
  options.seed = opt.seed;
  if (opt.tol > 0.0) options.rank_rel_tol = opt.tol;
  const anivar::AcReport report =
      anivar::check_atomic_condition(f, point, grid, options);

  json out = anivar::ac_report_to_json(report);
  out["integrand"] = json{{"name", f.name()}, {"params", f.params()}};
  out["n"] = opt.n;
  out["d"] = d;
  emit(out, opt.out);
  return report.status == anivar::AcStatus::kNoViolationFound ? 0 : 2;
}

int run_convexity(const CommonOptions& opt, double min_angle) {
  if (opt.n < 2) throw std::invalid_argument("missing or invalid --n");
  if (opt.d > 0 && opt.d != opt.n - 1) {
    throw std::invalid_argument("convexity check requires codimension one (d = n-1)");
  }
  const anivar::NormIntegrand norm =
      anivar::make_norm_integrand(integrand_spec(opt), opt.n);
  anivar::CrosscheckOptions options;
  options.grid_size = opt.grid;
  options.seed = opt.seed;
  options.min_angle = min_angle;
  if (opt.tol > 0.0) options.tol_pos = opt.tol;
  const anivar::CrosscheckReport report =
      anivar::crosscheck_convexity_ac(norm, options);

  json out = anivar::crosscheck_report_to_json(report);
  out["integrand"] = json{{"name", norm.name}, {"params", norm.params}};
  out["n"] = opt.n;
  emit(out, opt.out);
  switch (report.verdict) {
    case anivar::CrosscheckVerdict::kConsistentPass: return 0;
    case anivar::CrosscheckVerdict::kConsistentFail: return 2;
    default: return 3;
  }
}

anivar::DiscreteVarifold load_varifold(const std::string& path, int n, int d) {
  const std::string text = anivar::read_file(path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    return anivar::varifold_from_json(json::parse(text));
  }
  return anivar::varifold_from_csv(text, n, d);
}

int run_first_variation(const CommonOptions& opt, const std::string& varifold_path,
                        const std::string& field_text, double fd_step) {
  const int d = resolved_plane_dim(opt);
  const anivar::DiscreteVarifold varifold = load_varifold(varifold_path, opt.n, d);
  const anivar::Integrand f = anivar::make_integrand(integrand_spec(opt), opt.n, d);

  anivar::VectorField field;
  if (field_text.empty()) {
    // Default: a bump over the support centroid, wide enough to cover it.
    Vec centroid = Vec::Zero(opt.n);
    for (const auto& atom : varifold.atoms()) centroid += atom.position;
    centroid /= std::max<double>(1.0, static_cast<double>(varifold.size()));
    double spread = 0.5;
    for (const auto& atom : varifold.atoms()) {
      spread = std::max(spread, (atom.position - centroid).norm());
    }
    field = anivar::bump_field(centroid, 1.5 * spread, 0, 1.0);
  } else {
    const json spec = json::parse(field_text);
    const auto center = spec.at("center").get<std::vector<double>>();
    field = anivar::bump_field(Eigen::Map<const Vec>(center.data(), center.size()),
                               spec.at("halfwidth").get<double>(),
                               spec.value("axis", 0), spec.value("amplitude", 1.0));
  }

  const anivar::FirstVariationCheck check =
      anivar::first_variation_fd_check(varifold, f, field, fd_step);
  json out{{"schema", anivar::kReportSchema},
           {"analytic", check.analytic},
           {"finite_difference", check.finite_difference},
           {"gap", check.gap},
           {"fd_step", fd_step},
           {"atoms", varifold.size()},
           {"integrand", json{{"name", f.name()}, {"params", f.params()}}}};
  emit(out, opt.out);
  return 0;
}

int run_counterexample(const CommonOptions& opt, const std::string& cert_path,
                       double radius, int samples, int field_count,
                       const std::string& varifold_out) {
  json cert = json::parse(anivar::read_file(cert_path));
  if (cert.contains("certificate")) cert = cert.at("certificate");
  const anivar::GrassmannMeasure measure =
      anivar::certificate_measure_from_json(cert);
  const int n = measure.ambient_dim();
  const int d = measure.plane_dim();
  CommonOptions with_dims = opt;
  with_dims.n = n;
  with_dims.d = d;
  const anivar::Integrand f =
      anivar::make_integrand(integrand_spec(with_dims), n, d);
  if (!f.autonomous()) {
    throw std::invalid_argument("counterexample requires an autonomous integrand");
  }

  const anivar::FlatCounterexample built =
      anivar::counterexample_varifold(f, measure, radius, samples);
  const auto fields =
      anivar::standard_test_fields(n, field_count, 0.8 * radius, opt.seed);
  const anivar::StationarityReport scan =
      anivar::stationarity_scan(built.varifold, f, fields);

  if (!varifold_out.empty()) {
    anivar::write_file(varifold_out, anivar::varifold_to_csv(built.varifold));
  }
  json out{{"schema", anivar::kReportSchema},
           {"flat_dim", built.flat_dim},
           {"dirac", built.dirac},
           {"cell_width", built.cell_width},
           {"atoms", built.varifold.size()},
           {"total_mass", built.varifold.total_mass()},
           {"radius", radius},
           {"fields", field_count},
           {"stationarity", anivar::stationarity_report_to_json(scan)},
           {"integrand", json{{"name", f.name()}, {"params", f.params()}}}};
  emit(out, opt.out);
  return 0;
}

int run_blowup(const CommonOptions& opt, const std::string& measure_path,
               int density_dim, const std::vector<std::string>& point_texts,
               std::vector<double> radii, double shrink, int plane_grid_size,
               const std::string& prefix) {
  if (opt.n < 1) throw std::invalid_argument("missing or invalid --n");
  const anivar::DiscreteMeasure measure =
      anivar::measure_from_csv(anivar::read_file(measure_path), opt.n);
  if (radii.empty()) radii = {1.0, 0.5, 0.25, 0.125, 0.0625};
  std::sort(radii.rbegin(), radii.rend());

  std::vector<anivar::Plane> plane_grid;
  if (density_dim > 0 && density_dim < opt.n) {
    plane_grid = anivar::sample_grid(opt.n, density_dim,
                                     std::max(1, plane_grid_size), opt.seed);
  }

  json summary{{"schema", anivar::kReportSchema},
               {"n", opt.n},
               {"density_dim", density_dim},
               {"alpha", anivar::density_drop_threshold(density_dim)},
               {"beta", anivar::probe_radius_factor(density_dim)},
               {"points", json::array()}};

  for (std::size_t p = 0; p < point_texts.size(); ++p) {
    const Vec point = parse_point(point_texts[p], opt.n);
    const auto profile = anivar::density_profile(measure, point, density_dim, radii);
    const auto scan =
        anivar::ball_ratio_scan(measure, point, density_dim, shrink, radii);
    const auto diag = anivar::rectifiability_diagnostics(measure, point, density_dim,
                                                         radii, plane_grid);

    std::string csv = "# radius,density_ratio,resolved,shrink_ratio,shrink_valid,"
                      "low_density_fraction,plane_coverage,empty\n";
    char line[256];
    bool any_mass = false;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const auto& row = diag.rows[i];
      if (!row.empty) any_mass = true;
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%d,%.17g,%d,%.17g,%.17g,%d\n",
                    radii[i], profile.ratios[i], profile.resolved[i] ? 1 : 0,
                    scan.ratios[i], scan.valid[i] ? 1 : 0,
                    row.low_density_fraction, row.plane_coverage, row.empty ? 1 : 0);
      csv += line;
    }
    if (!prefix.empty()) {
      anivar::write_file(prefix + "_point" + std::to_string(p) + ".csv", csv);
    }
    summary["points"].push_back(
        json{{"point", point_texts[p]},
             {"outside_support", !any_mass},
             {"resolution_floor", profile.resolution_floor},
             {"max_shrink_ratio", scan.max_ratio},
             {"shrink_skipped", scan.skipped}});
  }
  emit(summary, opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic varifold toolbox"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string point_text;
  double min_angle = 1e-6;
  std::string varifold_path;
  std::string field_text;
  double fd_step = 1e-4;
  std::string cert_path;
  double radius = 1.0;
  int samples = 64;
  int field_count = 20;
  std::string varifold_out;
  std::string measure_path;
  int density_dim = 1;
  std::vector<std::string> point_texts;
  std::vector<double> radii;
  double shrink = 0.5;
  int plane_grid_size = 16;
  std::string prefix;

  auto add_common = [&](CLI::App* cmd, bool with_dims = true) {
    add_integrand_flags(cmd, &opt);
    if (with_dims) {
      cmd->add_option("--n", opt.n, "ambient dimension");
      cmd->add_option("--d", opt.d, "plane dimension (default n-1)");
    }
    cmd->add_option("--grid", opt.grid, "grid size override");
    cmd->add_option("--seed", opt.seed, "random seed (default 42)");
    cmd->add_option("--tol", opt.tol,
                    "tolerance override (rank threshold for check-ac, "
                    "positivity margin for convexity)");
    cmd->add_option("--out", opt.out, "write the JSON report here");
  };

  CLI::App* check_ac = app.add_subcommand(
      "check-ac", "search for atomic-condition violation certificates");
  add_common(check_ac);
  check_ac->add_option("--point", point_text, "evaluation point (default origin)");

  CLI::App* convexity = app.add_subcommand(
      "convexity", "strict-convexity scan cross-checked against the "
                   "atomic-condition search (codimension one)");
  add_common(convexity);
  convexity->add_option("--min-angle", min_angle,
                        "exclude direction pairs closer than this angle");

  CLI::App* first_variation = app.add_subcommand(
      "first-variation", "analytic first variation with a finite-difference audit");
  add_common(first_variation);
  first_variation->add_option("--varifold", varifold_path, "atom file (csv or json)")
      ->required();
  first_variation->add_option("--field", field_text, "bump field spec (JSON)");
  first_variation->add_option("--fd-step", fd_step, "finite-difference step");

  CLI::App* counterexample = app.add_subcommand(
      "counterexample", "sample the stationary flat varifold of a violation "
                        "certificate and scan its stationarity");
  add_common(counterexample, /*with_dims=*/false);
  counterexample->add_option("--certificate", cert_path,
                             "certificate JSON (or full check-ac report)")
      ->required();
  counterexample->add_option("--radius", radius, "sampling ball radius");
  counterexample->add_option("--samples", samples, "target lattice sample count");
  counterexample->add_option("--fields", field_count, "stationarity test fields");
  counterexample->add_option("--varifold-out", varifold_out,
                             "write the sampled varifold CSV here");

  CLI::App* blowup = app.add_subcommand(
      "blowup", "density profiles, shrink-ratio scans and rectifiability "
                "diagnostics for a discrete measure");
  blowup->add_option("--measure", measure_path, "measure CSV (x..., mass)")
      ->required();
  blowup->add_option("--n", opt.n, "ambient dimension");
  blowup->add_option("--density-dim", density_dim, "density dimension d");
  blowup->add_option("--point", point_texts, "evaluation point(s)")->required();
  blowup->add_option("--radii", radii, "radii list")->delimiter(',');
  blowup->add_option("--t", shrink, "shrink factor for the ratio scan");
  blowup->add_option("--plane-grid", plane_grid_size,
                     "candidate planes for the coverage statistic");
  blowup->add_option("--seed", opt.seed, "random seed (default 42)");
  blowup->add_option("--out", opt.out, "write the JSON summary here");
  blowup->add_option("--csv-prefix", prefix, "prefix for per-point CSV tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (check_ac->parsed()) return run_check_ac(opt, point_text);
    if (convexity->parsed()) return run_convexity(opt, min_angle);
    if (first_variation->parsed())
      return run_first_variation(opt, varifold_path, field_text, fd_step);
    if (counterexample->parsed())
      return run_counterexample(opt, cert_path, radius, samples, field_count,
                                varifold_out);
    if (blowup->parsed())
      return run_blowup(opt, measure_path, density_dim, point_texts, radii, shrink,
                        plane_grid_size, prefix);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
