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

// Anonymous randomized voting rules stored as exact lottery tables keyed by
// anonymous profile.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "iidsp/prefs.hpp"
#include "iidsp/rational.hpp"

namespace iidsp {

using Lottery = std::vector<Rational>;

inline bool is_valid_lottery(const Lottery& l, int m) {
  if (static_cast<int>(l.size()) != m) return false;
  Rational sum = 0;
  for (const auto& p : l) {
    if (p < 0 || p > 1) return false;
    sum += p;
  }
  return sum == 1;
}

class RuleTable {
 public:
  RuleTable(std::shared_ptr<const ProfileSpace> space, std::vector<Lottery> table)
      : space_(std::move(space)), table_(std::move(table)) {
    if (table_.size() != space_->num_profiles())
      throw std::domain_error("rule table is not total: " + std::to_string(table_.size()) + " of " +
                              std::to_string(space_->num_profiles()) + " profiles");
    for (std::size_t i = 0; i < table_.size(); ++i) {
      for (auto& p : table_[i]) p.canonicalize();
      if (!is_valid_lottery(table_[i], m()))
        throw std::domain_error("invalid lottery at profile " + std::to_string(i));
    }
  }

  int m() const { return space_->m(); }
  int n() const { return space_->n(); }
  const ProfileSpace& space() const { return *space_; }
  const std::shared_ptr<const ProfileSpace>& space_ptr() const { return space_; }
  std::size_t size() const { return table_.size(); }

  const Lottery& lottery(std::size_t profile_idx) const { return table_[profile_idx]; }
  const Rational& at(std::size_t profile_idx, Candidate x) const {
    return table_[profile_idx][static_cast<std::size_t>(x)];
  }

  // Selection probability v(x, P).
  const Rational& eval(const AnonymousProfile& p, Candidate x) const {
    check_candidate(x);
    return at(space_->index_of(p), x);
  }
  const Rational& eval(const Profile& p, Candidate x) const {
    if (static_cast<int>(p.size()) != n())
      throw std::domain_error("profile has " + std::to_string(p.size()) + " voters, rule expects " +
                              std::to_string(n()));
    for (const auto& o : p)
      if (o.size() != m()) throw std::domain_error("ordering size does not match rule's candidate count");
    return eval(canonicalize(p), x);
  }

  // Probability mass the lottery at profile_idx puts on the set s.
  Rational mass(std::size_t profile_idx, const std::vector<Candidate>& s) const {
    Rational total = 0;
    for (Candidate c : s) total += at(profile_idx, c);
    return total;
  }

  bool is_deterministic() const {
    for (const auto& l : table_)
      for (const auto& p : l)
        if (p != 0 && p != 1) return false;
    return true;
  }

  friend bool operator==(const RuleTable& a, const RuleTable& b) {
    return a.m() == b.m() && a.n() == b.n() && a.table_ == b.table_;
  }

 private:
  void check_candidate(Candidate x) const {
    if (x < 0 || x >= m()) throw std::domain_error("candidate " + std::to_string(x) + " out of range");
  }

  std::shared_ptr<const ProfileSpace> space_;
  std::vector<Lottery> table_;
};

template <class F>
RuleTable tabulate(std::shared_ptr<const ProfileSpace> space, F&& lottery_of) {
  std::vector<Lottery> t;
  t.reserve(space->num_profiles());
  for (const auto& p : space->profiles()) t.push_back(lottery_of(p));
  return RuleTable(std::move(space), std::move(t));
}

inline RuleTable random_dictatorship(std::shared_ptr<const ProfileSpace> space) {
  const int m = space->m(), n = space->n();
  const auto* sp = space.get();
  return tabulate(std::move(space), [&](const AnonymousProfile& p) {
    Lottery l(static_cast<std::size_t>(m), Rational(0));
    for (auto i : p.members()) l[static_cast<std::size_t>(sp->ordering(i).top())] += Rational(1, n);
    return l;
  });
}
inline RuleTable random_dictatorship(int m, int n) { return random_dictatorship(ProfileSpace::make(m, n)); }

inline RuleTable uniform_rule(std::shared_ptr<const ProfileSpace> space) {
  const int m = space->m();
  return tabulate(std::move(space),
                  [&](const AnonymousProfile&) { return Lottery(static_cast<std::size_t>(m), Rational(1, m)); });
}
inline RuleTable uniform_rule(int m, int n) { return uniform_rule(ProfileSpace::make(m, n)); }

// Always elects x.
inline RuleTable constant_rule(std::shared_ptr<const ProfileSpace> space, Candidate x) {
  const int m = space->m();
  return tabulate(std::move(space), [&](const AnonymousProfile&) {
    Lottery l(static_cast<std::size_t>(m), Rational(0));
    l.at(static_cast<std::size_t>(x)) = 1;
    return l;
  });
}

inline std::vector<int> top_counts(const ProfileSpace& space, const AnonymousProfile& p) {
  std::vector<int> c(static_cast<std::size_t>(space.m()), 0);
  for (auto i : p.members()) ++c[static_cast<std::size_t>(space.ordering(i).top())];
  return c;
}

// Plurality over first choices; tied leaders share the mass equally.
inline RuleTable plurality_uniform_tiebreak(std::shared_ptr<const ProfileSpace> space) {
  const auto* sp = space.get();
  return tabulate(std::move(space), [&](const AnonymousProfile& p) {
    auto c = top_counts(*sp, p);
    int best = *std::max_element(c.begin(), c.end());
    int ties = static_cast<int>(std::count(c.begin(), c.end(), best));
    Lottery l(c.size(), Rational(0));
    for (std::size_t x = 0; x < c.size(); ++x)
      if (c[x] == best) l[x] = Rational(1, ties);
    return l;
  });
}

// Plurality over first choices; ties go to the lowest candidate id.
inline RuleTable plurality_fixed_tiebreak(std::shared_ptr<const ProfileSpace> space) {
  const auto* sp = space.get();
  return tabulate(std::move(space), [&](const AnonymousProfile& p) {
    auto c = top_counts(*sp, p);
    auto winner = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    Lottery l(c.size(), Rational(0));
    l[winner] = 1;
    return l;
  });
}

// Pick a voter uniformly, then the candidate at rank r with probability
// scores[r]. scores must be a lottery over ranks.
inline RuleTable scoring_rule(std::shared_ptr<const ProfileSpace> space, const std::vector<Rational>& scores) {
  const int m = space->m(), n = space->n();
  if (!is_valid_lottery(scores, m)) throw std::domain_error("scores must be a probability vector over ranks");
  const auto* sp = space.get();
  return tabulate(std::move(space), [&](const AnonymousProfile& p) {
    Lottery l(static_cast<std::size_t>(m), Rational(0));
    for (auto i : p.members()) {
      const auto& o = sp->ordering(i);
      for (int r = 0; r < m; ++r) l[static_cast<std::size_t>(o[r])] += scores[static_cast<std::size_t>(r)] / n;
    }
    return l;
  });
}

// Chooses between x and y only; x receives choose_x[k] when exactly k voters
// rank x above y.
inline RuleTable duple_rule(std::shared_ptr<const ProfileSpace> space, Candidate x, Candidate y,
                            const std::vector<Rational>& choose_x) {
  const int m = space->m(), n = space->n();
  if (x == y || static_cast<int>(choose_x.size()) != n + 1)
    throw std::domain_error("duple_rule: need distinct candidates and n+1 probabilities");
  const auto* sp = space.get();
  return tabulate(std::move(space), [&](const AnonymousProfile& p) {
    int k = 0;
    for (auto i : p.members())
      if (sp->ordering(i).prefers(x, y)) ++k;
    Lottery l(static_cast<std::size_t>(m), Rational(0));
    l[static_cast<std::size_t>(x)] = choose_x[static_cast<std::size_t>(k)];
    l[static_cast<std::size_t>(y)] = 1 - choose_x[static_cast<std::size_t>(k)];
    return l;
  });
}

inline void require_same_dims(const RuleTable& a, const RuleTable& b) {
  if (a.m() != b.m() || a.n() != b.n())
    throw std::domain_error("rules have different dimensions (" + std::to_string(a.m()) + "," +
                            std::to_string(a.n()) + ") vs (" + std::to_string(b.m()) + "," + std::to_string(b.n()) +
                            ")");
}

inline RuleTable mixture(const std::vector<RuleTable>& rules, const std::vector<Rational>& weights) {
  if (rules.empty() || rules.size() != weights.size())
    throw std::domain_error("mixture: need one weight per rule");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw std::domain_error("mixture: weights must be positive");
    total += w;
  }
  if (total != 1) throw std::domain_error("mixture: weights sum to " + to_string(total) + ", not 1");
  for (const auto& r : rules) require_same_dims(rules.front(), r);
  const int m = rules.front().m();
  std::vector<Lottery> t(rules.front().size(), Lottery(static_cast<std::size_t>(m), Rational(0)));
  for (std::size_t r = 0; r < rules.size(); ++r)
    for (std::size_t p = 0; p < t.size(); ++p)
      for (int x = 0; x < m; ++x) t[p][static_cast<std::size_t>(x)] += weights[r] * rules[r].at(p, x);
  return RuleTable(rules.front().space_ptr(), std::move(t));
}

// Where two rules disagree most: |v(x,P) - w(x,P)| at (profile, candidate).
struct Closeness {
  Rational value;
  std::size_t profile = 0;
  Candidate candidate = 0;
};

inline Closeness closeness_with_witness(const RuleTable& a, const RuleTable& b) {
  require_same_dims(a, b);
  Closeness c{Rational(0)};
  for (std::size_t p = 0; p < a.size(); ++p)
    for (int x = 0; x < a.m(); ++x) {
      Rational d = abs_diff(a.at(p, x), b.at(p, x));
      if (d > c.value) c = {d, p, x};
    }
  return c;
}

// Least eps for which a is eps-close to b.
inline Rational closeness(const RuleTable& a, const RuleTable& b) { return closeness_with_witness(a, b).value; }

// Seeded lottery with small integer weights; reproducible across platforms
// (raw mt19937_64 output, no library distributions).
inline Lottery noise_lottery(int m, std::mt19937_64& rng) {
  std::vector<std::uint64_t> w(static_cast<std::size_t>(m));
  std::uint64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) total += (x = rng() % 17);
  }
  Lottery l;
  for (auto x : w) l.emplace_back(static_cast<unsigned long>(x), static_cast<unsigned long>(total));
  for (auto& p : l) p.canonicalize();
  return l;
}

// (1 - delta) v + delta * noise, with noise drawn per profile from seed.
inline RuleTable perturb(const RuleTable& v, const Rational& delta, std::uint64_t seed) {
  if (delta < 0 || delta > 1) throw std::domain_error("perturb: delta must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Lottery> t;
  t.reserve(v.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    Lottery noise = noise_lottery(v.m(), rng);
    Lottery l(static_cast<std::size_t>(v.m()));
    for (int x = 0; x < v.m(); ++x)
      l[static_cast<std::size_t>(x)] = (1 - delta) * v.at(p, x) + delta * noise[static_cast<std::size_t>(x)];
    t.push_back(std::move(l));
  }
  return RuleTable(v.space_ptr(), std::move(t));
}

// Structural predicates for the classical (deterministic / Gibbard) setting.
struct DictatorshipVerdict {
  bool dictatorial = false;
  // Profile on which the elected candidate is not every voter's top.
  std::optional<std::size_t> counterexample;
  std::string note;
};

// For an anonymous table, a dictator i forces v(P) = top(P_i) for every
// relabelling of voters, so the elected candidate must equal every voter's
// top on every profile. Only n == 1 (or m == 1) can satisfy this.
inline DictatorshipVerdict is_dictatorial_deterministic(const RuleTable& v) {
  if (!v.is_deterministic()) throw std::domain_error("is_dictatorial_deterministic: rule is not deterministic");
  const auto& sp = v.space();
  for (std::size_t p = 0; p < v.size(); ++p) {
    Candidate winner = 0;
    while (v.at(p, winner) != 1) ++winner;
    for (auto i : sp.profile(p).members())
      if (sp.ordering(i).top() != winner)
        return {false, p,
                v.n() == 1 ? "the single voter's top is not elected"
                           : "anonymous rule cannot follow every voter's top when tops differ"};
  }
  return {true, std::nullopt, v.n() == 1 ? "voter 0 is a dictator" : "every profile elects the common top"};
}

struct DupleVerdict {
  bool duple = false;
  std::pair<Candidate, Candidate> pair{0, 0};
  // When not duple: a profile giving positive mass to a third candidate.
  std::optional<std::size_t> witness_profile;
  std::optional<Candidate> witness_candidate;
};

inline DupleVerdict is_duple(const RuleTable& v) {
  std::vector<Candidate> support;
  for (std::size_t p = 0; p < v.size(); ++p)
    for (int x = 0; x < v.m(); ++x)
      if (v.at(p, x) > 0 && std::find(support.begin(), support.end(), x) == support.end()) {
        support.push_back(x);
        if (support.size() == 3) return {false, {support[0], support[1]}, p, x};
      }
  std::sort(support.begin(), support.end());
  DupleVerdict d;
  d.duple = true;
  if (support.size() == 2) {
    d.pair = {support[0], support[1]};
  } else {
    Candidate a = support.empty() ? 0 : support[0];
    Candidate b = a;
    if (v.m() > 1) b = (a == 0) ? 1 : 0;
    d.pair = {std::min(a, b), std::max(a, b)};
  }
  return d;
}

struct UnilateralVerdict {
  bool unilateral = false;
  // Two profiles sharing an ordering but receiving different lotteries.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

// Anonymous and unilateral together force a constant lottery when n >= 2.
inline UnilateralVerdict is_unilateral(const RuleTable& v) {
  if (v.n() == 1) return {true, std::nullopt};
  for (std::size_t p = 1; p < v.size(); ++p)
    if (v.lottery(p) != v.lottery(0)) {
      // Connect profile 0 to p through a profile sharing an ordering with each.
      const auto& sp = v.space();
      auto a = sp.profile(0), b = sp.profile(p);
      std::vector<std::size_t> mid(a.members());
      mid.back() = b.members().front();
      std::size_t q = sp.index_of(AnonymousProfile(v.m(), mid));
      if (v.lottery(q) != v.lottery(0)) return {false, std::pair{std::size_t{0}, q}};
      return {false, std::pair{q, p}};
    }
  return {true, std::nullopt};
}

}  // namespace iidsp
