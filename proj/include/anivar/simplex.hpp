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

#include <Eigen/Dense>

namespace anivar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Outcome of a small dense linear program.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::iteration_limit;
  /// Primal point. On `infeasible` this is the phase-one minimizer of the
  /// total constraint violation, which is still useful as a search iterate.
  Vec x;
  double objective = 0.0;
  /// Phase-one optimum: the L1 constraint violation of `x` (row-scaled).
  double infeasibility = 0.0;
};

/// Maximizes objective . x subject to eq_lhs x = eq_rhs and x >= 0, with a
/// two-phase dense simplex using Bland's rule. Rows are rescaled to unit
/// max-norm internally; a system counts as feasible when the phase-one
/// violation does not exceed `feasibility_tol`.
LpResult solve_lp(const Mat& eq_lhs, const Vec& eq_rhs, const Vec& objective,
                  double feasibility_tol = 1e-9);

/// Phase-one only: returns the minimum-violation point for the system.
LpResult lp_feasible_point(const Mat& eq_lhs, const Vec& eq_rhs,
                           double feasibility_tol = 1e-9);

}  // namespace anivar
