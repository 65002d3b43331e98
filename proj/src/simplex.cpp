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

#include "anivar/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace anivar {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-11;

struct Tableau {
  Mat rows;                 // m x (total + 1); last column is the rhs
  Vec obj;                  // total + 1 entries; obj[j] = z_j - c_j, obj[total] = z
  std::vector<int> basis;   // basis[i] = column basic in row i
  std::vector<bool> allowed;
  int total = 0;

  void pivot(int row, int col) {
    rows.row(row) /= rows(row, col);
    for (int i = 0; i < rows.rows(); ++i) {
      if (i == row) continue;
      const double factor = rows(i, col);
      if (factor != 0.0) rows.row(i) -= factor * rows.row(row);
    }
    const double factor = obj[col];
    if (factor != 0.0) obj -= factor * rows.row(row).transpose();
    basis[row] = col;
  }

  // Bland's rule: smallest improving column, smallest basic index on ties.
  LpResult::Status iterate(long max_iters) {
    const int m = static_cast<int>(rows.rows());
    for (long iter = 0; iter < max_iters; ++iter) {
      int enter = -1;
      for (int j = 0; j < total; ++j) {
        if (allowed[j] && obj[j] < -kReducedCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpResult::Status::optimal;

      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = rows(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rows(i, total) / a;
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpResult::Status::unbounded;
      pivot(leave, enter);
    }
    return LpResult::Status::iteration_limit;
  }

  void rebuild_objective(const Vec& costs) {
    obj.setZero(total + 1);
    for (int j = 0; j < total; ++j) obj[j] = -costs[j];
    obj[total] = 0.0;
    for (int i = 0; i < rows.rows(); ++i) {
      const double c = costs[basis[i]];
      if (c != 0.0) obj += c * rows.row(i).transpose();
    }
  }

  Vec extract(int vars) const {
    Vec x = Vec::Zero(vars);
    for (int i = 0; i < rows.rows(); ++i) {
      if (basis[i] < vars) x[basis[i]] = rows(i, total);
    }
    return x;
  }
};

}  // namespace

LpResult solve_lp(const Mat& eq_lhs, const Vec& eq_rhs, const Vec& objective,
                  double feasibility_tol) {
  const int m = static_cast<int>(eq_lhs.rows());
  const int n = static_cast<int>(eq_lhs.cols());
  if (eq_rhs.size() != m || objective.size() != n) {
    throw std::invalid_argument("solve_lp: shape mismatch");
  }

  Tableau t;
  t.total = n + m;
  t.rows.setZero(m, t.total + 1);
  t.basis.resize(m);
  t.allowed.assign(t.total, true);

  for (int i = 0; i < m; ++i) {
    double scale = eq_lhs.row(i).cwiseAbs().maxCoeff();
    scale = std::max(scale, std::abs(eq_rhs[i]));
    if (scale <= 0.0) scale = 1.0;
    double sign = (eq_rhs[i] < 0.0) ? -1.0 : 1.0;
    t.rows.block(i, 0, 1, n) = (sign / scale) * eq_lhs.row(i);
    t.rows(i, n + i) = 1.0;
    t.rows(i, t.total) = sign * eq_rhs[i] / scale;
    t.basis[i] = n + i;
  }

  // Phase one: minimize the artificial mass.
  Vec phase1_costs = Vec::Zero(t.total);
  phase1_costs.tail(m).setConstant(-1.0);
  t.rebuild_objective(phase1_costs);
  const long max_iters = 20000 + 50L * t.total;
  LpResult::Status status = t.iterate(max_iters);

  LpResult result;
  result.infeasibility = -t.obj[t.total];
  if (status == LpResult::Status::iteration_limit) {
    result.status = status;
    result.x = t.extract(n);
    return result;
  }
  if (result.infeasibility > feasibility_tol) {
    result.status = LpResult::Status::infeasible;
    result.x = t.extract(n);
    return result;
  }

  // Drive leftover artificials out of the basis where a structural pivot
  // exists; rows without one are redundant and keep a zero-valued artificial.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.rows(i, j)) > 1e-8) {
        t.pivot(i, j);
        break;
      }
    }
  }
  for (int j = n; j < t.total; ++j) t.allowed[j] = false;

  Vec phase2_costs = Vec::Zero(t.total);
  phase2_costs.head(n) = objective;
  t.rebuild_objective(phase2_costs);
  status = t.iterate(max_iters);

  result.status = status == LpResult::Status::optimal ? LpResult::Status::optimal
                                                      : status;
  result.x = t.extract(n);
  result.objective = objective.dot(result.x);
  return result;
}

LpResult lp_feasible_point(const Mat& eq_lhs, const Vec& eq_rhs,
                           double feasibility_tol) {
  return solve_lp(eq_lhs, eq_rhs, Vec::Zero(eq_lhs.cols()), feasibility_tol);
}

}  // namespace anivar
