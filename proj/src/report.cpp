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

#include "anivar/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anivar {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void dump_value(std::string& out, const json& value, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = value.begin(); it != value.end(); ++it, ++i) {
        out += pad_in;
        out += json(it.key()).dump();
        out += ": ";
        dump_value(out, it.value(), indent, depth + 1);
        if (i + 1 < value.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        out += pad_in;
        dump_value(out, value[i], indent, depth + 1);
        if (i + 1 < value.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    const double value = std::stod(cell, &used);
    row.push_back(value);
  }
  return row;
}

json vec_to_json(const Vec& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json mat_to_json_rowmajor(const Mat& m) {
  std::vector<double> flat;
  flat.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  }
  return json(flat);
}

}  // namespace

std::string dump_json(const nlohmann::json& value, int indent) {
  std::string out;
  dump_value(out, value, indent, 0);
  out += "\n";
  return out;
}

nlohmann::json plane_to_json(const Plane& plane) {
  return json{{"n", plane.ambient_dim()},
              {"d", plane.dim()},
              {"P", mat_to_json_rowmajor(plane.matrix())}};
}

Plane plane_from_json(const nlohmann::json& value) {
  require(value.is_object() && value.contains("n") && value.contains("d") &&
              value.contains("P"),
          "plane json: expected fields \"n\", \"d\", \"P\"");
  const int n = value.at("n").get<int>();
  const int d = value.at("d").get<int>();
  const auto flat = value.at("P").get<std::vector<double>>();
  require(static_cast<int>(flat.size()) == n * n,
          "plane json: field \"P\" must have n*n entries");
  Mat p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = flat[i * n + j];
  }
  return Plane(n, d, std::move(p));
}

nlohmann::json grid_to_json(const PlaneGrid& grid) {
  json out = json::array();
  for (const Plane& plane : grid) out.push_back(plane_to_json(plane));
  return out;
}

PlaneGrid grid_from_json(const nlohmann::json& value) {
  require(value.is_array(), "grid json: expected an array of planes");
  PlaneGrid grid;
  grid.reserve(value.size());
  for (const json& entry : value) grid.push_back(plane_from_json(entry));
  return grid;
}

nlohmann::json varifold_to_json(const DiscreteVarifold& varifold) {
  json atoms = json::array();
  for (const VarifoldAtom& atom : varifold.atoms()) {
    atoms.push_back(json{{"x", vec_to_json(atom.position)},
                         {"plane", plane_to_json(atom.plane)},
                         {"mass", atom.mass}});
  }
  return json{{"n", varifold.ambient_dim()},
              {"d", varifold.plane_dim()},
              {"atoms", atoms}};
}

DiscreteVarifold varifold_from_json(const nlohmann::json& value) {
  require(value.is_object() && value.contains("n") && value.contains("d") &&
              value.contains("atoms"),
          "varifold json: expected fields \"n\", \"d\", \"atoms\"");
  const int n = value.at("n").get<int>();
  const int d = value.at("d").get<int>();
  std::vector<VarifoldAtom> atoms;
  for (const json& entry : value.at("atoms")) {
    const auto pos = entry.at("x").get<std::vector<double>>();
    require(static_cast<int>(pos.size()) == n, "varifold json: atom dimension");
    atoms.push_back(VarifoldAtom{Eigen::Map<const Vec>(pos.data(), n),
                                 plane_from_json(entry.at("plane")),
                                 entry.at("mass").get<double>()});
  }
  return DiscreteVarifold(n, d, std::move(atoms));
}

std::string varifold_to_csv(const DiscreteVarifold& varifold) {
  const int n = varifold.ambient_dim();
  const int d = varifold.plane_dim();
  std::string out = "# n=" + std::to_string(n) + " d=" + std::to_string(d) +
                    " columns: x[n], basis rows [d*n], mass\n";
  for (const VarifoldAtom& atom : varifold.atoms()) {
    const Mat basis = atom.plane.orthonormal_basis();
    std::string line;
    for (int i = 0; i < n; ++i) {
      line += format_double(atom.position[i]);
      line += ",";
    }
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < n; ++i) {
        line += format_double(basis(i, c));
        line += ",";
      }
    }
    line += format_double(atom.mass);
    out += line + "\n";
  }
  return out;
}

DiscreteVarifold varifold_from_csv(const std::string& text, int ambient_dim,
                                   int plane_dim) {
  const int n = ambient_dim;
  const int d = plane_dim;
  const int expected = n + d * n + 1;
  std::vector<VarifoldAtom> atoms;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<double> row = parse_csv_row(line);
    if (row.empty()) continue;
    require(static_cast<int>(row.size()) == expected,
            "varifold csv: line " + std::to_string(line_no) + " has " +
                std::to_string(row.size()) + " fields, expected " +
                std::to_string(expected));
    Vec position = Eigen::Map<const Vec>(row.data(), n);
    Mat basis(n, d);
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < n; ++i) basis(i, c) = row[n + c * n + i];
    }
    atoms.push_back(VarifoldAtom{std::move(position), Plane::from_basis(basis),
                                 row[expected - 1]});
  }
  return DiscreteVarifold(n, d, std::move(atoms));
}

std::string measure_to_csv(const DiscreteMeasure& measure) {
  const int n = measure.ambient_dim();
  std::string out =
      "# n=" + std::to_string(n) + " columns: x[n], mass\n";
  for (const MeasureAtom& atom : measure.atoms()) {
    std::string line;
    for (int i = 0; i < n; ++i) {
      line += format_double(atom.position[i]);
      line += ",";
    }
    line += format_double(atom.mass);
    out += line + "\n";
  }
  return out;
}

DiscreteMeasure measure_from_csv(const std::string& text, int ambient_dim) {
  const int n = ambient_dim;
  std::vector<MeasureAtom> atoms;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<double> row = parse_csv_row(line);
    if (row.empty()) continue;
    require(static_cast<int>(row.size()) == n + 1,
            "measure csv: line " + std::to_string(line_no) + " has " +
                std::to_string(row.size()) + " fields, expected " +
                std::to_string(n + 1));
    atoms.push_back(
        MeasureAtom{Eigen::Map<const Vec>(row.data(), n), row[n]});
  }
  return DiscreteMeasure(n, std::move(atoms));
}

nlohmann::json ac_report_to_json(const AcReport& report) {
  json budget{{"grid_size", report.budget.grid_size},
              {"lp_solves", report.budget.lp_solves},
              {"kernel_candidates", report.budget.kernel_candidates},
              {"pairs_tried", report.budget.pairs_tried},
              {"refinement_rounds", report.budget.refinement_rounds},
              {"seed", report.budget.seed},
              {"rank_rel_tol", report.budget.rank_rel_tol},
              {"min_pair_weight", report.budget.min_pair_weight},
              {"lp_feasibility_tol", report.budget.lp_feasibility_tol}};
  json out{{"schema", kReportSchema},
           {"status", ac_status_string(report.status)},
           {"budget", budget}};
  if (std::isfinite(report.closest_spread_ratio)) {
    out["closest_spread_ratio"] = report.closest_spread_ratio;
  }
  if (report.certificate.has_value()) {
    const AcCertificate& cert = *report.certificate;
    json weights = json::array();
    json indices = json::array();
    json planes = json::array();
    for (int j : cert.support) {
      indices.push_back(j);
      weights.push_back(cert.measure.weights()[j]);
      planes.push_back(plane_to_json(cert.measure.grid()[j]));
    }
    out["certificate"] = json{{"weights", weights},
                              {"grid_indices", indices},
                              {"planes", planes},
                              {"kernel_basis", mat_to_json_rowmajor(cert.kernel_basis)},
                              {"kernel_dim", static_cast<int>(cert.kernel_basis.cols())},
                              {"singular_values", vec_to_json(cert.singular_values)},
                              {"ratio", report.certificate_ratio}};
  }
  return out;
}

GrassmannMeasure certificate_measure_from_json(const nlohmann::json& certificate) {
  require(certificate.is_object() && certificate.contains("weights") &&
              certificate.contains("planes"),
          "certificate json: expected fields \"weights\" and \"planes\"");
  const auto raw_weights = certificate.at("weights").get<std::vector<double>>();
  PlaneGrid planes;
  for (const json& entry : certificate.at("planes")) {
    planes.push_back(plane_from_json(entry));
  }
  require(planes.size() == raw_weights.size(),
          "certificate json: weights and planes must have equal length");
  double total = 0.0;
  for (double w : raw_weights) total += w;
  require(total > 0.0, "certificate json: zero total weight");
  Vec weights(raw_weights.size());
  for (std::size_t i = 0; i < raw_weights.size(); ++i) {
    weights[i] = raw_weights[i] / total;
  }
  return GrassmannMeasure(make_plane_grid(std::move(planes)), std::move(weights));
}

nlohmann::json convexity_report_to_json(const ConvexityReport& report) {
  return json{{"schema", kReportSchema},
              {"strictly_convex", report.strictly_convex},
              {"min_subgradient_margin", report.min_subgradient_margin},
              {"argmin_subgradient",
               json::array({report.argmin_subgradient[0], report.argmin_subgradient[1]})},
              {"min_product_margin", report.min_product_margin},
              {"argmin_product",
               json::array({report.argmin_product[0], report.argmin_product[1]})},
              {"grid_spacing", report.grid_spacing},
              {"min_value", report.min_value},
              {"tol_pos", report.tol_pos},
              {"directions", report.directions},
              {"pairs_scanned", report.pairs_scanned}};
}

nlohmann::json crosscheck_report_to_json(const CrosscheckReport& report) {
  return json{{"schema", kReportSchema},
              {"verdict", crosscheck_verdict_string(report.verdict)},
              {"convexity", convexity_report_to_json(report.convexity)},
              {"atomic_condition", ac_report_to_json(report.ac)},
              {"normalized_convexity_margin", report.normalized_convexity_margin},
              {"ac_near_threshold", report.ac_near_threshold}};
}

nlohmann::json stationarity_report_to_json(const StationarityReport& report) {
  return json{{"schema", kReportSchema},
              {"max_ratio", report.max_ratio},
              {"worst_field", report.worst_field},
              {"values", json(report.values)},
              {"ratios", json(report.ratios)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
}

}  // namespace anivar
