// Copyright 2026 The iidsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact rational linear programming: two-phase tableau simplex with Bland's
// pivoting rule. All variables are nonnegative.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iidsp/rational.hpp"

namespace iidsp {

enum class Relation { kEq, kLe, kGe };
enum class Sense { kMaximize, kMinimize };

struct LinearConstraint {
  std::vector<std::pair<std::size_t, Rational>> terms;  // sparse row
  Relation relation = Relation::kEq;
  Rational rhs;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<LinearConstraint> constraints;
  std::vector<Rational> objective;  // empty means zero objective
  Sense sense = Sense::kMaximize;

  Rational row_value(const LinearConstraint& c, const std::vector<Rational>& x) const {
    Rational s = 0;
    for (const auto& [j, a] : c.terms) s += a * x[j];
    return s;
  }

  bool satisfied_by(const std::vector<Rational>& x) const {
    if (x.size() != num_vars) return false;
    for (const auto& xi : x)
      if (xi < 0) return false;
    for (const auto& c : constraints) {
      Rational s = row_value(c, x);
      if ((c.relation == Relation::kEq && s != c.rhs) || (c.relation == Relation::kLe && s > c.rhs) ||
          (c.relation == Relation::kGe && s < c.rhs))
        return false;
    }
    return true;
  }

  Rational objective_value(const std::vector<Rational>& x) const {
    Rational s = 0;
    for (std::size_t j = 0; j < objective.size(); ++j) s += objective[j] * x[j];
    return s;
  }
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  Rational value;
  std::vector<Rational> x;
  std::size_t pivots = 0;
};

// Holds a feasible basis for a fixed constraint system; optimize() may be
// called repeatedly with different objectives and starts from the basis the
// previous call left behind.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp) : num_vars_(lp.num_vars) {
    std::size_t slack_count = 0, art_count = 0;
    std::vector<int> sign(lp.constraints.size(), 1);
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
      const auto& c = lp.constraints[i];
      if (c.rhs < 0) sign[i] = -1;
      Relation r = effective(c.relation, sign[i]);
      if (r != Relation::kEq) ++slack_count;
      if (r != Relation::kLe) ++art_count;
    }
    first_art_ = num_vars_ + slack_count;
    cols_ = first_art_ + art_count;
    rhs_col_ = cols_;
    std::size_t next_slack = num_vars_, next_art = first_art_;
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
      const auto& c = lp.constraints[i];
      std::vector<Rational> row(cols_ + 1, Rational(0));
      for (const auto& [j, a] : c.terms) {
        if (j >= num_vars_) throw std::domain_error("constraint references unknown variable");
        row[j] += sign[i] * a;
      }
      row[rhs_col_] = sign[i] * c.rhs;
      Relation r = effective(c.relation, sign[i]);
      if (r == Relation::kLe) {
        row[next_slack] = 1;
        basis_.push_back(next_slack++);
      } else {
        if (r == Relation::kGe) row[next_slack++] = -1;
        row[next_art] = 1;
        basis_.push_back(next_art++);
      }
      rows_.push_back(std::move(row));
    }
    banned_.assign(cols_, false);
    feasible_ = phase_one();
  }

  bool feasible() const { return feasible_; }
  std::size_t pivots() const { return pivots_; }

  LPSolution optimize(const std::vector<Rational>& objective, Sense sense) {
    LPSolution sol;
    if (!feasible_) {
      sol.status = LPStatus::kInfeasible;
      return sol;
    }
    // Internally minimise cost = -objective for maximisation.
    std::vector<Rational> cost(cols_, Rational(0));
    for (std::size_t j = 0; j < objective.size() && j < num_vars_; ++j)
      cost[j] = sense == Sense::kMaximize ? Rational(-objective[j]) : objective[j];
    std::size_t before = pivots_;
    bool bounded = run(cost);
    sol.pivots = pivots_ - before;
    if (!bounded) {
      sol.status = LPStatus::kUnbounded;
      return sol;
    }
    sol.status = LPStatus::kOptimal;
    sol.x = primal();
    sol.value = 0;
    for (std::size_t j = 0; j < objective.size() && j < num_vars_; ++j) sol.value += objective[j] * sol.x[j];
    return sol;
  }

  std::vector<Rational> primal() const {
    std::vector<Rational> x(num_vars_, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < num_vars_) x[basis_[i]] = rows_[i][rhs_col_];
    return x;
  }

 private:
  static Relation effective(Relation r, int sign) {
    if (sign > 0 || r == Relation::kEq) return r;
    return r == Relation::kLe ? Relation::kGe : Relation::kLe;
  }

  bool phase_one() {
    if (first_art_ == cols_) return true;
    std::vector<Rational> cost(cols_, Rational(0));
    for (std::size_t j = first_art_; j < cols_; ++j) cost[j] = 1;
    run(cost);
    if (objective_row_[rhs_col_] != 0) return false;
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < first_art_ && !col; ++j)
        if (rows_[i][j] != 0) col = j;
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (std::size_t j = first_art_; j < cols_; ++j) banned_[j] = true;
    return true;
  }

  // Phase-two style loop from the current basis. Returns false if unbounded.
  bool run(const std::vector<Rational>& cost) {
    objective_row_.assign(cols_ + 1, Rational(0));
    for (std::size_t j = 0; j < cols_; ++j) objective_row_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j)
        if (rows_[i][j] != 0) objective_row_[j] -= cb * rows_[i][j];
    }
    while (true) {
      // Bland: lowest-index improving column, lowest-index leaving variable.
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols_ && !enter; ++j)
        if (!banned_[j] && objective_row_[j] < 0) enter = j;
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rational& a = rows_[i][*enter];
        if (a <= 0) continue;
        Rational ratio = rows_[i][rhs_col_] / a;
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    auto& prow = rows_[r];
    const Rational inv = 1 / prow[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j)
      if (prow[j] != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      const Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * prow[j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(objective_row_);
    basis_[r] = c;
  }

  std::size_t num_vars_;
  std::size_t first_art_ = 0, cols_ = 0, rhs_col_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<bool> banned_;
  std::vector<Rational> objective_row_;
  bool feasible_ = false;
  std::size_t pivots_ = 0;
};

inline LPSolution solve_lp(const LinearProgram& lp) {
  SimplexSolver solver(lp);
  return solver.optimize(lp.objective, lp.sense);
}

}  // namespace iidsp
