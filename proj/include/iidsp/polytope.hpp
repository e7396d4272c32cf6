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

// Linear relaxation of "weakly strategy-proof + eps-unanimous": pairwise
// responsiveness and pairwise isolation as equalities, eps-strong unanimity
// as inequalities, over the entries of an anonymous rule table. Every rule
// the impossibility argument covers lies inside, so the exact maximum
// distance to random dictatorship over the polytope bounds the distance of
// all of them.

#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iidsp/axioms.hpp"
#include "iidsp/simplex.hpp"

namespace iidsp {

struct PolytopeParts {
  bool responsive = true;
  bool isolated = true;
  bool unanimity = true;

  static PolytopeParts parse(const std::string& csv) {
    PolytopeParts p{false, false, false};
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "responsive") p.responsive = true;
      else if (tok == "isolated") p.isolated = true;
      else if (tok == "unanimity" || tok == "strong-unanimity") p.unanimity = true;
      else if (tok == "all") p = PolytopeParts{};
      else if (!tok.empty()) throw std::invalid_argument("unknown polytope part '" + tok + "'");
    }
    return p;
  }

  std::string to_string() const {
    std::string s;
    auto add = [&](bool on, const char* name) {
      if (!on) return;
      if (!s.empty()) s += ',';
      s += name;
    };
    add(responsive, "responsive");
    add(isolated, "isolated");
    add(unanimity, "unanimity");
    return s;
  }
};

struct Polytope {
  std::shared_ptr<const ProfileSpace> space;
  Rational eps;
  PolytopeParts parts;
  LinearProgram lp;  // variables: profile * m + candidate
  std::size_t normalization_rows = 0, responsive_rows = 0, isolation_rows = 0, unanimity_rows = 0;

  std::size_t var(std::size_t profile, Candidate x) const {
    return profile * static_cast<std::size_t>(space->m()) + static_cast<std::size_t>(x);
  }
};

inline std::vector<Rational> table_variables(const RuleTable& v) {
  std::vector<Rational> x;
  for (std::size_t p = 0; p < v.size(); ++p)
    for (Candidate c = 0; c < v.m(); ++c) x.push_back(v.at(p, c));
  return x;
}

inline RuleTable table_from_variables(std::shared_ptr<const ProfileSpace> space, const std::vector<Rational>& x) {
  const auto m = static_cast<std::size_t>(space->m());
  std::vector<Lottery> t;
  for (std::size_t p = 0; p < space->num_profiles(); ++p) t.emplace_back(x.begin() + p * m, x.begin() + (p + 1) * m);
  return RuleTable(std::move(space), std::move(t));
}

namespace detail {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

// Sorted, merged, zero-free, first coefficient positive.
inline SparseRow normalise_row(std::map<std::size_t, Rational> acc) {
  SparseRow r;
  for (auto& [j, a] : acc)
    if (a != 0) r.emplace_back(j, a);
  if (!r.empty() && r.front().second < 0)
    for (auto& t : r) t.second = -t.second;
  return r;
}

}  // namespace detail

inline Polytope build_polytope(std::shared_ptr<const ProfileSpace> space, const Rational& eps,
                               const PolytopeParts& parts = {}, std::size_t max_vars = 20000) {
  const int m = space->m();
  if (m < 2) throw std::domain_error("build_polytope: needs at least two candidates");
  if (eps < 0) throw std::domain_error("build_polytope: eps must be nonnegative");
  Polytope poly;
  poly.space = space;
  poly.eps = eps;
  poly.parts = parts;
  const auto& sp = *space;
  poly.lp.num_vars = sp.num_profiles() * static_cast<std::size_t>(m);
  if (poly.lp.num_vars > max_vars)
    throw ResourceLimitError("polytope has " + std::to_string(poly.lp.num_vars) + " variables, cap is " +
                             std::to_string(max_vars));
  auto& cons = poly.lp.constraints;

  for (std::size_t p = 0; p < sp.num_profiles(); ++p) {
    LinearConstraint c{{}, Relation::kEq, Rational(1)};
    for (Candidate x = 0; x < m; ++x) c.terms.emplace_back(poly.var(p, x), Rational(1));
    cons.push_back(std::move(c));
  }
  poly.normalization_rows = cons.size();

  std::set<detail::SparseRow> seen;
  auto add_equality = [&](std::map<std::size_t, Rational> acc) {
    auto row = detail::normalise_row(std::move(acc));
    if (row.empty() || !seen.insert(row).second) return false;
    cons.push_back({std::move(row), Relation::kEq, Rational(0)});
    return true;
  };

  if (parts.responsive) {
    for (std::size_t p = 0; p < sp.num_profiles(); ++p) {
      const auto& prof = sp.profile(p);
      for (auto oi : prof.distinct()) {
        const auto& o = sp.ordering(oi);
        for (int k = 0; k + 1 < m; ++k) {
          std::size_t q = sp.index_of(prof.replaced(oi, ordering_index(o.swapped_at(k))));
          for (Candidate z = 0; z < m; ++z)
            if (z != o[k] && z != o[k + 1] &&
                add_equality({{poly.var(q, z), Rational(1)}, {poly.var(p, z), Rational(-1)}}))
              ++poly.responsive_rows;
        }
      }
    }
  }

  if (parts.isolated) {
    const auto others = enumerate_anonymous_profiles(m, sp.n() - 1);
    for (std::size_t oi = 0; oi < sp.num_orderings(); ++oi) {
      const auto& o = sp.ordering(oi);
      for (int k = 0; k + 1 < m; ++k) {
        const Candidate x = o[k], y = o[k + 1];
        const std::size_t ri = ordering_index(o.swapped_at(k));
        std::map<int, std::pair<std::size_t, std::size_t>> anchor;  // count -> (raised, base)
        for (const auto& q : others) {
          int count = 0;
          for (auto i : q.members())
            if (sp.ordering(i).prefers(x, y)) ++count;
          std::size_t base = sp.index_of(q.with_added(oi)), raised = sp.index_of(q.with_added(ri));
          auto [it, fresh] = anchor.try_emplace(count, raised, base);
          if (fresh) continue;
          // (v(y,raised) - v(y,base)) - (v(y,raised0) - v(y,base0)) = 0
          std::map<std::size_t, Rational> acc;
          acc[poly.var(raised, y)] += 1;
          acc[poly.var(base, y)] -= 1;
          acc[poly.var(it->second.first, y)] -= 1;
          acc[poly.var(it->second.second, y)] += 1;
          if (add_equality(std::move(acc))) ++poly.isolation_rows;
        }
      }
    }
  }

  if (parts.unanimity) {
    for (std::size_t p = 0; p < sp.num_profiles(); ++p)
      for (Candidate x = 0; x < m; ++x)
        if (detail::all_tops_are(sp, sp.profile(p), x)) {
          cons.push_back({{{poly.var(p, x), Rational(1)}}, Relation::kGe, 1 - eps});
          ++poly.unanimity_rows;
        }
  }
  return poly;
}

inline Polytope build_polytope(int m, int n, const Rational& eps, const PolytopeParts& parts = {}) {
  return build_polytope(ProfileSpace::make(m, n), eps, parts);
}

// Affine parametrisation x = base + basis * t of the equality constraints,
// taking base = a known feasible point. Sparse exact Gauss-Jordan.
struct AffineHull {
  std::vector<Rational> base;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;  // per variable: (param, coeff)
  std::size_t dimension = 0;
  std::size_t rank = 0;
};

inline AffineHull equality_hull(const LinearProgram& lp, const std::vector<Rational>& base) {
  using Row = std::map<std::size_t, Rational>;
  std::map<std::size_t, Row> pivots;  // pivot column -> row with coefficient 1 there, RREF maintained
  for (const auto& c : lp.constraints) {
    if (c.relation != Relation::kEq) continue;
    if (lp.row_value(c, base) != c.rhs) throw std::logic_error("equality_hull: base point violates an equality");
    Row r;
    for (const auto& [j, a] : c.terms) r[j] += a;
    for (auto it = r.begin(); it != r.end();) it = (it->second == 0) ? r.erase(it) : std::next(it);
    // Reduce against existing pivots.
    bool changed = true;
    while (changed && !r.empty()) {
      changed = false;
      for (auto it = r.begin(); it != r.end(); ++it) {
        auto pv = pivots.find(it->first);
        if (pv == pivots.end()) continue;
        Rational f = it->second;
        for (const auto& [j, a] : pv->second) {
          Rational& t = r[j];
          t -= f * a;
        }
        for (auto jt = r.begin(); jt != r.end();) jt = (jt->second == 0) ? r.erase(jt) : std::next(jt);
        changed = true;
        break;
      }
    }
    if (r.empty()) continue;
    const std::size_t col = r.begin()->first;
    const Rational inv = 1 / r.begin()->second;
    for (auto& [j, a] : r) a *= inv;
    for (auto& [pc, prow] : pivots) {
      auto it = prow.find(col);
      if (it == prow.end()) continue;
      Rational f = it->second;
      for (const auto& [j, a] : r) prow[j] -= f * a;
      for (auto jt = prow.begin(); jt != prow.end();) jt = (jt->second == 0) ? prow.erase(jt) : std::next(jt);
    }
    pivots.emplace(col, std::move(r));
  }
  AffineHull h;
  h.base = base;
  h.rank = pivots.size();
  std::vector<std::size_t> param_of(lp.num_vars, SIZE_MAX);
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    if (!pivots.count(j)) param_of[j] = h.dimension++;
  h.rows.assign(lp.num_vars, {});
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    if (param_of[j] != SIZE_MAX) h.rows[j].emplace_back(param_of[j], Rational(1));
  for (const auto& [pc, prow] : pivots)
    for (const auto& [j, a] : prow)
      if (j != pc) h.rows[pc].emplace_back(param_of[j], Rational(-a));
  return h;
}

struct ObjectiveResult {
  std::size_t profile;
  Candidate candidate;
  int sign;              // +1: maximise v(x,P) - j/n; -1: maximise j/n - v(x,P)
  LPStatus status;
  Rational value;        // optimum of sign * (v(x,P) - j/n)
  std::vector<Rational> vertex;  // optimal table entries
};

struct MaxDistanceResult {
  Rational d_star;
  std::optional<RuleTable> witness;
  std::size_t witness_profile = 0;
  Candidate witness_candidate = 0;
  int witness_sign = 1;
  std::vector<ObjectiveResult> objectives;
  std::size_t hull_dimension = 0;
  std::size_t equality_rank = 0;
  std::size_t total_pivots = 0;
  Polytope polytope;
};

// Exact max over the polytope of |v(x,P) - topcount(x,P)/n|, one LP per
// (profile, candidate, sign). The equalities are eliminated first; random
// dictatorship is the feasible origin of the reduced problem.
inline MaxDistanceResult max_distance(std::shared_ptr<const ProfileSpace> space, const Rational& eps,
                                      const PolytopeParts& parts = {}) {
  MaxDistanceResult out;
  out.d_star = 0;
  out.polytope = build_polytope(space, eps, parts);
  const auto& poly = out.polytope;
  const auto dict = table_variables(random_dictatorship(space));
  if (!poly.lp.satisfied_by(dict)) throw std::logic_error("random dictatorship violates the polytope");
  const AffineHull hull = equality_hull(poly.lp, dict);
  out.hull_dimension = hull.dimension;
  out.equality_rank = hull.rank;
  const std::size_t d = hull.dimension;

  // Reduced LP over t = t_plus - t_minus (columns [0, d) and [d, 2d)).
  LinearProgram reduced;
  reduced.num_vars = 2 * d;
  auto lift = [&](std::size_t var, const Rational& scale) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (const auto& [k, a] : hull.rows[var]) {
      terms.emplace_back(k, scale * a);
      terms.emplace_back(d + k, -scale * a);
    }
    return terms;
  };
  // Variables tied together by the equalities lift to identical rows; keep
  // the tightest right-hand side per row.
  std::map<std::vector<std::pair<std::size_t, Rational>>, Rational> tightest;
  auto add_row = [&](std::vector<std::pair<std::size_t, Rational>> terms, const Rational& rhs) {
    auto [it, fresh] = tightest.try_emplace(std::move(terms), rhs);
    if (!fresh && rhs < it->second) it->second = rhs;
  };
  for (std::size_t j = 0; j < poly.lp.num_vars; ++j)
    if (!hull.rows[j].empty()) add_row(lift(j, Rational(-1)), hull.base[j]);
  for (const auto& c : poly.lp.constraints) {
    if (c.relation == Relation::kEq) continue;
    // unanimity rows: single variable, v >= 1 - eps  <=>  -(N t) <= base - (1 - eps)
    std::map<std::size_t, Rational> acc;
    Rational base_val = 0;
    for (const auto& [j, a] : c.terms) {
      base_val += a * hull.base[j];
      for (const auto& [k, b] : hull.rows[j]) acc[k] += a * b;
    }
    std::vector<std::pair<std::size_t, Rational>> terms;
    Rational s = c.relation == Relation::kGe ? Rational(-1) : Rational(1);
    for (const auto& [k, a] : acc)
      if (a != 0) {
        terms.emplace_back(k, s * a);
        terms.emplace_back(d + k, -s * a);
      }
    if (terms.empty()) continue;
    add_row(std::move(terms), s * (c.rhs - base_val));
  }
  for (auto& [terms, rhs] : tightest) reduced.constraints.push_back({terms, Relation::kLe, rhs});

  SimplexSolver solver(reduced);
  if (!solver.feasible()) throw std::logic_error("reduced polytope infeasible");
  const auto& sp = *space;
  // Objectives whose variable has the same hull row are the same LP.
  std::map<std::pair<std::vector<std::pair<std::size_t, Rational>>, int>, std::pair<Rational, std::vector<Rational>>>
      solved;
  bool first = true;
  for (std::size_t p = 0; p < sp.num_profiles(); ++p)
    for (Candidate x = 0; x < sp.m(); ++x) {
      const std::size_t var = poly.var(p, x);
      const Rational target = ratio(sp.profile(p).top_count(x), sp.n());
      for (int sign : {1, -1}) {
        ObjectiveResult r{p, x, sign, LPStatus::kOptimal, sign * (hull.base[var] - target), {}};
        if (hull.rows[var].empty()) {
          r.vertex = hull.base;
        } else {
          auto [cached, fresh] = solved.try_emplace({hull.rows[var], sign});
          if (fresh) {
            std::vector<Rational> obj(reduced.num_vars, Rational(0));
            for (const auto& [k, a] : hull.rows[var]) {
              obj[k] = sign * a;
              obj[d + k] = -sign * a;
            }
            auto sol = solver.optimize(obj, Sense::kMaximize);
            if (sol.status != LPStatus::kOptimal) throw std::logic_error("polytope LP not optimal");
            cached->second.first = sol.value;
            auto& vertex = cached->second.second;
            vertex = hull.base;
            for (std::size_t j = 0; j < poly.lp.num_vars; ++j)
              for (const auto& [k, a] : hull.rows[j]) vertex[j] += a * (sol.x[k] - sol.x[d + k]);
          }
          r.value += cached->second.first;
          r.vertex = cached->second.second;
        }
        if (first || r.value > out.d_star) {
          out.d_star = r.value;
          out.witness_profile = p;
          out.witness_candidate = x;
          out.witness_sign = sign;
          first = false;
        }
        out.objectives.push_back(std::move(r));
      }
    }
  out.total_pivots = solver.pivots();
  for (const auto& r : out.objectives)
    if (r.profile == out.witness_profile && r.candidate == out.witness_candidate && r.sign == out.witness_sign)
      out.witness = table_from_variables(space, r.vertex);
  return out;
}

inline MaxDistanceResult max_distance(int m, int n, const Rational& eps, const PolytopeParts& parts = {}) {
  return max_distance(ProfileSpace::make(m, n), eps, parts);
}

// Explicit constant C(m) with distance <= C(m) * eps, obtained by carrying
// exact bounds through the chain of axiom-deviation estimates.
struct TracedConstant {
  Rational value;
  std::vector<std::string> transcript;
};

inline TracedConstant traced_constant(int m) {
  if (m < 3) throw std::domain_error("traced_constant: the argument needs at least three candidates");
  TracedConstant t;
  auto line = [&](const std::string& s) { t.transcript.push_back(s); };
  const Rational M(m);
  const Rational tops_only = M;              // one eps per candidate block
  const Rational times_at_top = 2 * M;       // two tops-only hops
  const Rational v_to_vprime = times_at_top;
  const Rational anonymity = 14 * M;
  const Rational window = 64 * M;
  line("m = " + to_string(M));
  line("tops-only: |v(x,P) - v(x,P')| <= m eps = " + to_string(tops_only) + " eps");
  line("times-at-top: |v(x,P) - v(x,P')| <= 2m eps = " + to_string(times_at_top) + " eps");
  line("v vs v': |v(x,P) - v'(x,j)| <= 2m eps = " + to_string(v_to_vprime) + " eps");
  line("candidate anonymity: |v'(x,j) - v'(y,j)| <= 14m eps = " + to_string(anonymity) + " eps");
  line("sliding window: |delta| <= 64m eps = " + to_string(window) + " eps");
  // Doubling step: v'(2q) = 2 v'(q) - v'(0) + delta with v'(0) in [0, eps].
  const Rational eta = window + 1;
  line("doubling: v'(x,2q) = 2 v'(x,q) + eta, |eta| <= (64m + 1) eps = " + to_string(eta) + " eps");
  // Reflection: v'(n-q) = 1 - v'(q) + eta', eta' = v'(0) + v'(n) - 1 + delta.
  const Rational eta_reflect = window + 1;
  line("reflection: v'(x,n-q) = 1 - v'(x,q) + eta', |eta'| <= (64m + 1) eps = " + to_string(eta_reflect) + " eps");
  const Rational endpoints = 1;
  line("endpoints q in {0, n}: r_q <= eps (strong unanimity)");
  const Rational case1 = eta;
  line("maximal r_q, q <= n/2: r_q >= r_2q >= 2 r_q - |eta|  =>  r_q <= " + to_string(case1) + " eps");
  const Rational case2 = 2 * eta_reflect + eta;
  line("maximal r_q, q > n/2: r_q >= r_2q' >= 2 r_q - 2|eta'| - |eta|  =>  r_q <= " + to_string(case2) + " eps");
  Rational linear = std::max({endpoints, case1, case2});
  line("|v'(x,j) - j/n| <= " + to_string(linear) + " eps");
  t.value = v_to_vprime + linear;
  line("triangle inequality: |v(x,P) - j/n| <= (" + to_string(v_to_vprime) + " + " + to_string(linear) +
       ") eps = " + to_string(t.value) + " eps");
  return t;
}

enum class TheoremStatus { kPass, kFail, kSkipped };

inline const char* to_string(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::kPass: return "PASS";
    case TheoremStatus::kFail: return "FAIL";
    case TheoremStatus::kSkipped: return "SKIPPED";
  }
  return "?";
}

struct TheoremCheck {
  TheoremStatus status = TheoremStatus::kSkipped;
  std::string reason;
  std::optional<MaxDistanceResult> lp;
  std::optional<TracedConstant> constant;
  Rational bound;
};

// D* <= C(m) * eps over the full polytope. Skipped below three candidates,
// where the impossibility argument does not apply.
inline TheoremCheck verify_theorem(int m, int n, const Rational& eps) {
  TheoremCheck c;
  if (m < 3) {
    c.reason = "hypothesis unmet: needs at least three candidates (m = " + std::to_string(m) + ")";
    return c;
  }
  c.constant = traced_constant(m);
  c.bound = c.constant->value * eps;
  c.lp = max_distance(m, n, eps);
  bool ok = c.lp->d_star <= c.bound;
  c.status = ok ? TheoremStatus::kPass : TheoremStatus::kFail;
  c.reason = "D* = " + to_string(c.lp->d_star) + (ok ? " <= " : " > ") + "C(m) eps = " + to_string(c.bound);
  return c;
}

}  // namespace iidsp
