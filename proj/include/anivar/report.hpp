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

#include <string>

#include <json.hpp>

#include "anivar/atomic.hpp"
#include "anivar/blowup.hpp"
#include "anivar/plane.hpp"
#include "anivar/varifold.hpp"

namespace anivar {

/// Report schema version stamped into every JSON report.
inline constexpr int kReportSchema = 1;

/// Serializes with floating-point numbers fixed to 17 significant digits
/// and sorted object keys, so identical reports are byte-identical.
std::string dump_json(const nlohmann::json& value, int indent = 2);

nlohmann::json plane_to_json(const Plane& plane);
Plane plane_from_json(const nlohmann::json& value);

/// Plane grids serialize as plain JSON arrays of planes.
nlohmann::json grid_to_json(const PlaneGrid& grid);
PlaneGrid grid_from_json(const nlohmann::json& value);

nlohmann::json varifold_to_json(const DiscreteVarifold& varifold);
DiscreteVarifold varifold_from_json(const nlohmann::json& value);

/// CSV rows: positions, then the plane as d orthonormal basis row-vectors
/// flattened, then the mass. Lines starting with '#' are comments.
std::string varifold_to_csv(const DiscreteVarifold& varifold);
DiscreteVarifold varifold_from_csv(const std::string& text, int ambient_dim,
                                   int plane_dim);

std::string measure_to_csv(const DiscreteMeasure& measure);
DiscreteMeasure measure_from_csv(const std::string& text, int ambient_dim);

nlohmann::json ac_report_to_json(const AcReport& report);
nlohmann::json convexity_report_to_json(const ConvexityReport& report);
nlohmann::json crosscheck_report_to_json(const CrosscheckReport& report);
nlohmann::json stationarity_report_to_json(const StationarityReport& report);

/// Reconstructs the certificate measure of a check-ac report: active planes
/// and weights are read back from the embedded certificate block.
GrassmannMeasure certificate_measure_from_json(const nlohmann::json& certificate);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace anivar
