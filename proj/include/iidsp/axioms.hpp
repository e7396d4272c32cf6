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

// Minimal-eps checkers for the efficiency axioms and deviation meters for the
// structural properties (pairwise responsiveness, pairwise isolation, near
// tops-onliness, ...). Each report carries a witness that replays to the
// reported value.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iidsp/rules.hpp"

namespace iidsp {

enum class WitnessKind {
  kValue,          // v(c0, p0)
  kOneMinus,       // 1 - v(c0, p0)
  kAbsDiff,        // |v(c0, p0) - v(c1, p1)|
  kAbsSecondDiff,  // |(v(c0,p0) - v(c0,p1)) - (v(c0,p2) - v(c0,p3))|
  kDictGap,        // |v(c0, p0) - topcount(c0, p0) / n|
};

struct Witness {
  WitnessKind kind;
  std::vector<std::size_t> profiles;  // indices into the rule's ProfileSpace
  std::vector<Candidate> candidates;
};

struct AxiomReport {
  std::string axiom;
  Rational epsilon;
  std::optional<Witness> witness;  // absent when the quantifier is empty
};

inline Rational replay(const RuleTable& v, const Witness& w) {
  const auto& p = w.profiles;
  const auto& c = w.candidates;
  switch (w.kind) {
    case WitnessKind::kValue:
      return v.at(p[0], c[0]);
    case WitnessKind::kOneMinus:
      return 1 - v.at(p[0], c[0]);
    case WitnessKind::kAbsDiff:
      return abs_diff(v.at(p[0], c[0]), v.at(p[1], c[1]));
    case WitnessKind::kAbsSecondDiff:
      return abs_diff(v.at(p[0], c[0]) - v.at(p[1], c[0]), v.at(p[2], c[0]) - v.at(p[3], c[0]));
    case WitnessKind::kDictGap:
      return abs_diff(v.at(p[0], c[0]), ratio(v.space().profile(p[0]).top_count(c[0]), v.n()));
  }
  return 0;
}

namespace detail {

// Running maximum; the witness is materialised only on improvement.
class Maximizer {
 public:
  explicit Maximizer(std::string name) : report_{std::move(name), Rational(0), std::nullopt} {}

  template <class MakeWitness>
  void offer(const Rational& value, MakeWitness&& make) {
    if (!report_.witness || value > report_.epsilon) {
      report_.epsilon = value;
      report_.witness = make();
    }
  }

  AxiomReport take() { return std::move(report_); }

 private:
  AxiomReport report_;
};

inline bool all_tops_are(const ProfileSpace& sp, const AnonymousProfile& p, Candidate x) {
  for (auto i : p.members())
    if (sp.ordering(i).top() != x) return false;
  return true;
}

}  // namespace detail

// Least eps such that a unanimously dominated candidate never gets more than
// eps.
inline AxiomReport min_eps_pareto(const RuleTable& v) {
  detail::Maximizer best("pareto");
  const auto& sp = v.space();
  for (std::size_t p = 0; p < v.size(); ++p)
    for (Candidate x = 0; x < v.m(); ++x)
      for (Candidate y = 0; y < v.m(); ++y) {
        if (x == y) continue;
        bool dominated = true;
        for (auto i : sp.profile(p).members()) dominated = dominated && sp.ordering(i).prefers(x, y);
        if (dominated)
          best.offer(v.at(p, y), [&] { return Witness{WitnessKind::kValue, {p}, {y, x}}; });
      }
  return best.take();
}

inline AxiomReport min_eps_strong_unanimity(const RuleTable& v) {
  detail::Maximizer best("strong-unanimity");
  for (std::size_t p = 0; p < v.size(); ++p)
    for (Candidate x = 0; x < v.m(); ++x)
      if (detail::all_tops_are(v.space(), v.space().profile(p), x))
        best.offer(1 - v.at(p, x), [&] { return Witness{WitnessKind::kOneMinus, {p}, {x}}; });
  return best.take();
}

inline AxiomReport min_eps_weak_unanimity(const RuleTable& v) {
  detail::Maximizer best("weak-unanimity");
  const auto& sp = v.space();
  for (std::size_t o = 0; o < sp.num_orderings(); ++o) {
    std::size_t p = sp.index_of(AnonymousProfile(v.m(), std::vector<std::size_t>(static_cast<std::size_t>(v.n()), o)));
    Candidate x = sp.ordering(o).top();
    best.offer(1 - v.at(p, x), [&] { return Witness{WitnessKind::kOneMinus, {p}, {x}}; });
  }
  return best.take();
}

// max over x of the best (smallest) 1 - v(x, P) among profiles topped by x.
inline AxiomReport min_eps_super_weak_unanimity(const RuleTable& v) {
  detail::Maximizer best("super-weak-unanimity");
  for (Candidate x = 0; x < v.m(); ++x) {
    std::optional<std::size_t> arg;
    for (std::size_t p = 0; p < v.size(); ++p)
      if (detail::all_tops_are(v.space(), v.space().profile(p), x) && (!arg || v.at(p, x) > v.at(*arg, x))) arg = p;
    best.offer(1 - v.at(*arg, x), [&] { return Witness{WitnessKind::kOneMinus, {*arg}, {x}}; });
  }
  return best.take();
}

// Largest change of a bystander's probability under one adjacent swap in one
// voter's ordering. Zero iff the rule is pairwise responsive.
inline AxiomReport responsiveness_deviation(const RuleTable& v) {
  detail::Maximizer best("responsiveness");
  const auto& sp = v.space();
  for (std::size_t p = 0; p < v.size(); ++p) {
    const auto& prof = sp.profile(p);
    for (auto oi : prof.distinct()) {
      const Ordering& o = sp.ordering(oi);
      for (int k = 0; k + 1 < v.m(); ++k) {
        std::size_t q = sp.index_of(prof.replaced(oi, ordering_index(o.swapped_at(k))));
        for (Candidate z = 0; z < v.m(); ++z) {
          if (z == o[k] || z == o[k + 1]) continue;
          best.offer(abs_diff(v.at(q, z), v.at(p, z)), [&] { return Witness{WitnessKind::kAbsDiff, {q, p}, {z, z}}; });
        }
      }
    }
  }
  return best.take();
}

// When voter i raises y over x (x directly above y in P_i), the change in y's
// probability may depend only on P_i and how many other voters rank x over y.
// Reports the largest spread of that change within a matched group. Zero iff
// the rule is pairwise isolated.
inline AxiomReport isolation_deviation(const RuleTable& v) {
  detail::Maximizer best("isolation");
  const auto& sp = v.space();
  const auto others = enumerate_anonymous_profiles(v.m(), v.n() - 1);
  struct Extreme {
    Rational lo, hi;
    std::size_t lo_base, lo_raised, hi_base, hi_raised;
  };
  for (std::size_t oi = 0; oi < sp.num_orderings(); ++oi) {
    const Ordering& o = sp.ordering(oi);
    for (int k = 0; k + 1 < v.m(); ++k) {
      const Candidate x = o[k], y = o[k + 1];
      const std::size_t ri = ordering_index(o.swapped_at(k));
      std::map<int, Extreme> groups;
      for (const auto& q : others) {
        int count = 0;
        for (auto i : q.members())
          if (sp.ordering(i).prefers(x, y)) ++count;
        std::size_t base = sp.index_of(q.with_added(oi));
        std::size_t raised = sp.index_of(q.with_added(ri));
        Rational change = v.at(raised, y) - v.at(base, y);
        auto [it, fresh] = groups.try_emplace(count, Extreme{change, change, base, raised, base, raised});
        if (!fresh) {
          if (change < it->second.lo) it->second.lo = change, it->second.lo_base = base, it->second.lo_raised = raised;
          if (change > it->second.hi) it->second.hi = change, it->second.hi_base = base, it->second.hi_raised = raised;
        }
      }
      for (const auto& [count, e] : groups)
        best.offer(e.hi - e.lo, [&] {
          return Witness{WitnessKind::kAbsSecondDiff, {e.hi_raised, e.hi_base, e.lo_raised, e.lo_base}, {y}};
        });
    }
  }
  return best.take();
}

namespace detail {

// Largest |v(x,P) - v(x,P')| over profiles sharing group_of(P, x).
template <class GroupKey>
AxiomReport grouped_spread(const RuleTable& v, std::string name, GroupKey&& group_of) {
  Maximizer best(std::move(name));
  for (Candidate x = 0; x < v.m(); ++x) {
    using Key = decltype(group_of(std::size_t{}, x));
    std::map<Key, std::pair<std::size_t, std::size_t>> range;  // argmin, argmax
    for (std::size_t p = 0; p < v.size(); ++p) {
      auto [it, fresh] = range.try_emplace(group_of(p, x), p, p);
      if (!fresh) {
        if (v.at(p, x) < v.at(it->second.first, x)) it->second.first = p;
        if (v.at(p, x) > v.at(it->second.second, x)) it->second.second = p;
      }
    }
    for (const auto& [key, mm] : range)
      best.offer(v.at(mm.second, x) - v.at(mm.first, x),
                 [&] { return Witness{WitnessKind::kAbsDiff, {mm.second, mm.first}, {x, x}}; });
  }
  return best.take();
}

}  // namespace detail

// max |v(x,P) - v(x,P')| over profiles with the same vector of tops.
inline AxiomReport tops_only_deviation(const RuleTable& v) {
  return detail::grouped_spread(v, "tops-only",
                                [&](std::size_t p, Candidate) { return v.space().profile(p).sorted_tops(); });
}

// max |v(x,P) - v(x,P')| over profiles where x tops the same number of
// orderings.
inline AxiomReport times_at_top_deviation(const RuleTable& v) {
  return detail::grouped_spread(v, "times-at-top",
                                [&](std::size_t p, Candidate x) { return v.space().profile(p).top_count(x); });
}

// v'(x, j) = v(x, P^{x,j}): the first j voters put x on top and the rest in
// the reference order; the remaining voters use the reference order with x
// moved to the bottom.
struct VPrimeTable {
  int m = 0, n = 0;
  Ordering reference;
  std::vector<std::vector<Rational>> values;         // [x][j]
  std::vector<std::vector<std::size_t>> profiles;    // index of P^{x,j}

  const Rational& at(Candidate x, int j) const {
    return values[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)];
  }
  std::size_t profile(Candidate x, int j) const {
    return profiles[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)];
  }
};

inline AnonymousProfile canonical_profile(const Ordering& reference, int n, Candidate x, int j) {
  std::vector<std::size_t> mem;
  const std::size_t up = ordering_index(reference.with_top(x));
  const std::size_t down = ordering_index(reference.with_bottom(x));
  for (int i = 0; i < n; ++i) mem.push_back(i < j ? up : down);
  return AnonymousProfile(reference.size(), std::move(mem));
}

inline VPrimeTable vprime_table(const RuleTable& v, std::optional<Ordering> reference = std::nullopt) {
  if (v.m() < 2) throw std::domain_error("vprime_table: needs at least two candidates");
  VPrimeTable t;
  t.m = v.m();
  t.n = v.n();
  t.reference = reference ? *reference : Ordering::identity(v.m());
  if (t.reference.size() != v.m()) throw std::domain_error("vprime_table: reference ordering has wrong size");
  for (Candidate x = 0; x < v.m(); ++x) {
    t.values.emplace_back();
    t.profiles.emplace_back();
    for (int j = 0; j <= v.n(); ++j) {
      std::size_t p = v.space().index_of(canonical_profile(t.reference, v.n(), x, j));
      t.values.back().push_back(v.at(p, x));
      t.profiles.back().push_back(p);
    }
  }
  return t;
}

// max |v'(x,j) - v'(y,j)|
inline AxiomReport candidate_anonymity_deviation(const RuleTable& v) {
  detail::Maximizer best("candidate-anonymity");
  const auto t = vprime_table(v);
  for (Candidate x = 0; x < v.m(); ++x)
    for (Candidate y = x + 1; y < v.m(); ++y)
      for (int j = 0; j <= v.n(); ++j)
        best.offer(abs_diff(t.at(x, j), t.at(y, j)),
                   [&] { return Witness{WitnessKind::kAbsDiff, {t.profile(x, j), t.profile(y, j)}, {x, y}}; });
  return best.take();
}

// max |(v'(x,j+l) - v'(x,j)) - (v'(x,j'+l) - v'(x,j'))| with j, j' < n,
// 1 <= l <= n, j + l <= n and j' + l <= n.
inline AxiomReport sliding_window_deviation(const RuleTable& v) {
  detail::Maximizer best("sliding-window");
  const auto t = vprime_table(v);
  const int n = v.n();
  for (Candidate x = 0; x < v.m(); ++x)
    for (int l = 1; l <= n; ++l)
      for (int j = 0; j + l <= n && j < n; ++j)
        for (int jj = j + 1; jj + l <= n && jj < n; ++jj) {
          Rational d = abs_diff(t.at(x, j + l) - t.at(x, j), t.at(x, jj + l) - t.at(x, jj));
          best.offer(d, [&] {
            return Witness{WitnessKind::kAbsSecondDiff,
                           {t.profile(x, j + l), t.profile(x, j), t.profile(x, jj + l), t.profile(x, jj)},
                           {x}};
          });
        }
  return best.take();
}

// Largest spread of v'(x, j) across every choice of reference ordering.
inline AxiomReport vprime_reference_spread(const RuleTable& v, int max_m = 4) {
  if (v.m() > max_m) throw ResourceLimitError("vprime sweep limited to m <= " + std::to_string(max_m));
  detail::Maximizer best("vprime-spread");
  std::vector<VPrimeTable> tables;
  for (const auto& r : v.space().orderings()) tables.push_back(vprime_table(v, r));
  for (Candidate x = 0; x < v.m(); ++x)
    for (int j = 0; j <= v.n(); ++j) {
      std::size_t lo = 0, hi = 0;
      for (std::size_t r = 1; r < tables.size(); ++r) {
        if (tables[r].at(x, j) < tables[lo].at(x, j)) lo = r;
        if (tables[r].at(x, j) > tables[hi].at(x, j)) hi = r;
      }
      best.offer(tables[hi].at(x, j) - tables[lo].at(x, j), [&] {
        return Witness{WitnessKind::kAbsDiff, {tables[hi].profile(x, j), tables[lo].profile(x, j)}, {x, x}};
      });
    }
  return best.take();
}

struct DistanceReport {
  AxiomReport distance;                       // closeness to random dictatorship
  std::optional<AxiomReport> v_to_vprime;     // max |v(x,P) - v'(x, topcount)|
  std::optional<AxiomReport> vprime_to_linear;  // max |v'(x,j) - j/n|
};

inline DistanceReport distance_to_random_dictatorship(const RuleTable& v) {
  DistanceReport r;
  detail::Maximizer dist("distance");
  for (std::size_t p = 0; p < v.size(); ++p)
    for (Candidate x = 0; x < v.m(); ++x) {
      int c = v.space().profile(p).top_count(x);
      dist.offer(abs_diff(v.at(p, x), ratio(c, v.n())), [&] { return Witness{WitnessKind::kDictGap, {p}, {x}}; });
    }
  r.distance = dist.take();
  if (v.m() < 2) return r;
  const auto t = vprime_table(v);
  detail::Maximizer near("v-to-vprime");
  for (std::size_t p = 0; p < v.size(); ++p)
    for (Candidate x = 0; x < v.m(); ++x) {
      int j = v.space().profile(p).top_count(x);
      near.offer(abs_diff(v.at(p, x), t.at(x, j)),
                 [&] { return Witness{WitnessKind::kAbsDiff, {p, t.profile(x, j)}, {x, x}}; });
    }
  r.v_to_vprime = near.take();
  detail::Maximizer lin("vprime-to-linear");
  for (Candidate x = 0; x < v.m(); ++x)
    for (int j = 0; j <= v.n(); ++j)
      lin.offer(abs_diff(t.at(x, j), ratio(j, v.n())),
                [&] { return Witness{WitnessKind::kDictGap, {t.profile(x, j)}, {x}}; });
  r.vprime_to_linear = lin.take();
  return r;
}

inline const std::vector<std::string>& axiom_names() {
  static const std::vector<std::string> names{
      "pareto",       "strong-unanimity",    "weak-unanimity", "super-weak-unanimity", "responsiveness",
      "isolation",    "tops-only",           "times-at-top",   "candidate-anonymity",  "sliding-window",
      "distance",     "vprime-spread"};
  return names;
}

// Runs one named checker ("distance" yields up to three reports).
inline std::vector<AxiomReport> run_axiom(const RuleTable& v, const std::string& name) {
  if (name == "pareto") return {min_eps_pareto(v)};
  if (name == "strong-unanimity") return {min_eps_strong_unanimity(v)};
  if (name == "weak-unanimity") return {min_eps_weak_unanimity(v)};
  if (name == "super-weak-unanimity") return {min_eps_super_weak_unanimity(v)};
  if (name == "responsiveness") return {responsiveness_deviation(v)};
  if (name == "isolation") return {isolation_deviation(v)};
  if (name == "tops-only") return {tops_only_deviation(v)};
  if (name == "times-at-top") return {times_at_top_deviation(v)};
  if (name == "candidate-anonymity") return {candidate_anonymity_deviation(v)};
  if (name == "sliding-window") return {sliding_window_deviation(v)};
  if (name == "vprime-spread") return {vprime_reference_spread(v)};
  if (name == "distance") {
    auto d = distance_to_random_dictatorship(v);
    std::vector<AxiomReport> out{d.distance};
    if (d.v_to_vprime) out.push_back(*d.v_to_vprime);
    if (d.vprime_to_linear) out.push_back(*d.vprime_to_linear);
    return out;
  }
  throw std::invalid_argument("unknown axiom '" + name + "'");
}

}  // namespace iidsp
