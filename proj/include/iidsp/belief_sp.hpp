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

// Strategy-proofness with respect to every i.i.d. belief, decided through
// polynomial nonnegativity on the belief simplex, and the classic
// belief-free variant.
//
// A utility consistent with P is a positive combination of the indicators of
// P's upper sets plus a constant, so a misreport P' never pays off iff for
// every k in [1, m-1] the mass placed on the top-k set of P does not drop.
// Under an i.i.d. belief phi that comparison is the polynomial
//
//   f(phi) = sum_Q multinomial(Q) [v(U_k, Q+P) - v(U_k, Q+P')] phi^Q
//
// over anonymous (n-1)-voter profiles Q, homogeneous of degree n-1 in the m!
// coordinates of phi.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iidsp/polynomial.hpp"
#include "iidsp/rules.hpp"

namespace iidsp {

struct ManipulationInstance {
  std::size_t truthful;   // ordering index of P
  std::size_t misreport;  // ordering index of P'
  int k;                  // upper-set size, 1 <= k <= m-1
  friend bool operator==(const ManipulationInstance&, const ManipulationInstance&) = default;
};

// Anonymous profiles of the other n-1 voters, their multinomial weights, and
// the table index of Q plus each possible own ordering.
class OthersIndex {
 public:
  explicit OthersIndex(const RuleTable& v)
      : m_(v.m()), others_(enumerate_anonymous_profiles(v.m(), v.n() - 1)) {
    const auto& sp = v.space();
    mpz_class nfact;
    mpz_fac_ui(nfact.get_mpz_t(), static_cast<unsigned long>(v.n() - 1));
    for (const auto& q : others_) {
      Exponent e(sp.num_orderings(), 0);
      for (auto i : q.members()) ++e[i];
      mpz_class denom = 1, f;
      for (int c : e) {
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(c));
        denom *= f;
      }
      exponents_.push_back(std::move(e));
      multinomials_.push_back(mpz_class(nfact / denom));
      std::vector<std::size_t> row;
      for (std::size_t o = 0; o < sp.num_orderings(); ++o) row.push_back(sp.index_of(q.with_added(o)));
      with_own_.push_back(std::move(row));
    }
  }

  std::size_t size() const { return others_.size(); }
  const AnonymousProfile& profile(std::size_t q) const { return others_[q]; }
  const Exponent& exponent(std::size_t q) const { return exponents_[q]; }
  const mpz_class& multinomial(std::size_t q) const { return multinomials_[q]; }
  std::size_t with_own(std::size_t q, std::size_t own) const { return with_own_[q][own]; }

  // Probability of Q under phi^(n-1).
  Rational probability(std::size_t q, const std::vector<Rational>& phi) const {
    Rational p(multinomials_[q]);
    for (std::size_t i = 0; i < phi.size(); ++i)
      for (int k = 0; k < exponents_[q][i]; ++k) p *= phi[i];
    return p;
  }

 private:
  int m_;
  std::vector<AnonymousProfile> others_;
  std::vector<Exponent> exponents_;
  std::vector<mpz_class> multinomials_;
  std::vector<std::vector<std::size_t>> with_own_;
};

inline void check_instance(const RuleTable& v, const ManipulationInstance& inst) {
  const auto k = v.space().num_orderings();
  if (inst.truthful >= k || inst.misreport >= k || inst.truthful == inst.misreport || inst.k < 1 ||
      inst.k > v.m() - 1)
    throw std::domain_error("invalid manipulation instance");
}

inline SimplexPolynomial dominance_polynomial(const RuleTable& v, const OthersIndex& others,
                                              const ManipulationInstance& inst) {
  check_instance(v, inst);
  const auto upper = upper_set(v.space().ordering(inst.truthful), inst.k);
  SimplexPolynomial f(static_cast<int>(v.space().num_orderings()), v.n() - 1);
  for (std::size_t q = 0; q < others.size(); ++q) {
    Rational d = v.mass(others.with_own(q, inst.truthful), upper) - v.mass(others.with_own(q, inst.misreport), upper);
    if (d != 0) f.add_term(others.exponent(q), Rational(others.multinomial(q)) * d);
  }
  return f;
}

inline SimplexPolynomial dominance_polynomial(const RuleTable& v, const ManipulationInstance& inst) {
  return dominance_polynomial(v, OthersIndex(v), inst);
}

// Every (P, P', k) in the fixed order used by the checkers.
inline std::vector<ManipulationInstance> manipulation_instances(const RuleTable& v) {
  std::vector<ManipulationInstance> out;
  const auto k = v.space().num_orderings();
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q)
      if (p != q)
        for (int s = 1; s < v.m(); ++s) out.push_back({p, q, s});
  return out;
}

// Expected utility of reporting `own` when the other voters follow the
// anonymous distribution given by weights over OthersIndex entries.
inline Rational expected_utility(const RuleTable& v, const OthersIndex& others, std::size_t own,
                                 const std::vector<Rational>& utility, const std::vector<Rational>& q_weights) {
  Rational total = 0;
  for (std::size_t q = 0; q < others.size(); ++q) {
    if (q_weights[q] == 0) continue;
    Rational u = 0;
    for (Candidate x = 0; x < v.m(); ++x) u += utility[static_cast<std::size_t>(x)] * v.at(others.with_own(q, own), x);
    total += q_weights[q] * u;
  }
  return total;
}

// Gain of misreporting under an i.i.d. belief: E[u(v(Q,P'))] - E[u(v(Q,P))].
inline Rational misreport_gain(const RuleTable& v, const OthersIndex& others, const ManipulationInstance& inst,
                               const std::vector<Rational>& belief, const std::vector<Rational>& utility) {
  std::vector<Rational> w;
  for (std::size_t q = 0; q < others.size(); ++q) w.push_back(others.probability(q, belief));
  return expected_utility(v, others, inst.misreport, utility, w) - expected_utility(v, others, inst.truthful, utility, w);
}

// Gain of misreporting against fixed other voters.
inline Rational misreport_gain_fixed(const RuleTable& v, const OthersIndex& others, const ManipulationInstance& inst,
                                     std::size_t q, const std::vector<Rational>& utility) {
  std::vector<Rational> w(others.size(), Rational(0));
  w[q] = 1;
  return expected_utility(v, others, inst.misreport, utility, w) - expected_utility(v, others, inst.truthful, utility, w);
}

// Strictly consistent utility for P whose gain keeps the sign of the
// violated top-k indicator. gains[t-1] is the indicator gain for top-t
// (t = 1..m-1); gains[k-1] must be positive. The indicator is mixed with the
// rank bonus (m - pos)/m at weight rho and rescaled into [0, 1].
inline std::vector<Rational> witness_utility(const Ordering& truthful, int k, const std::vector<Rational>& gains) {
  const int m = truthful.size();
  Rational sum = 0;
  for (const auto& g : gains) sum += g;
  Rational rho = 1;
  if (sum < 0) {
    Rational cap = m * gains[static_cast<std::size_t>(k - 1)] / (2 * (-sum));
    if (cap < rho) rho = cap;
  }
  std::vector<Rational> u(static_cast<std::size_t>(m));
  for (int pos = 0; pos < m; ++pos) {
    Rational val = (pos < k ? 1 : 0) + rho * ratio(m - pos, m);
    u[static_cast<std::size_t>(truthful[pos])] = val / (1 + rho);
  }
  for (auto& x : u) x.canonicalize();
  return u;
}

inline bool is_consistent(const std::vector<Rational>& u, const Ordering& p) {
  for (int i = 0; i + 1 < p.size(); ++i)
    if (!(u[static_cast<std::size_t>(p[i])] > u[static_cast<std::size_t>(p[i + 1])])) return false;
  for (const auto& x : u)
    if (x < 0 || x > 1) return false;
  return true;
}

struct SPConfig {
  int polya_max = 6;
  int trials = 10000;
  std::uint64_t seed = 42;
};

struct Refutation {
  ManipulationInstance instance;
  std::vector<Rational> belief;               // i.i.d. belief over orderings (weak SP)
  std::optional<AnonymousProfile> others;     // fixed other voters (classic SP)
  std::vector<Rational> utility;
  Rational gain;
  bool belief_full_support = false;
};

enum class SPStatus { kCertified, kRefuted, kUnknown };

inline const char* to_string(SPStatus s) {
  switch (s) {
    case SPStatus::kCertified: return "certified";
    case SPStatus::kRefuted: return "refuted";
    case SPStatus::kUnknown: return "unknown";
  }
  return "?";
}

struct SPVerdict {
  SPStatus status = SPStatus::kCertified;
  int polya_degree = 0;  // largest certifying N (certified) / largest N tried (unknown)
  std::optional<Refutation> refutation;
  std::vector<ManipulationInstance> uncertified;  // instances left unknown
  std::size_t instances = 0;
};

namespace detail {

inline Refutation build_weak_refutation(const RuleTable& v, const OthersIndex& others, const ManipulationInstance& inst,
                                        std::vector<Rational> belief) {
  std::vector<Rational> gains;
  for (int t = 1; t < v.m(); ++t)
    gains.push_back(-dominance_polynomial(v, others, {inst.truthful, inst.misreport, t}).evaluate(belief));
  Refutation r;
  r.instance = inst;
  r.belief = std::move(belief);
  r.utility = witness_utility(v.space().ordering(inst.truthful), inst.k, gains);
  r.gain = misreport_gain(v, others, inst, r.belief, r.utility);
  r.belief_full_support = std::all_of(r.belief.begin(), r.belief.end(), [](const Rational& x) { return x > 0; });
  return r;
}

}  // namespace detail

// Refutation scan first (point masses and pairwise midpoints across every
// instance, then seeded random beliefs), then a Polya ladder per instance.
inline SPVerdict check_weak_sp(const RuleTable& v, const SPConfig& cfg = {}) {
  SPVerdict verdict;
  const OthersIndex others(v);
  const auto instances = manipulation_instances(v);
  verdict.instances = instances.size();
  std::vector<SimplexPolynomial> polys;
  polys.reserve(instances.size());
  for (const auto& inst : instances) polys.push_back(dominance_polynomial(v, others, inst));

  for (std::size_t i = 0; i < instances.size(); ++i)
    if (auto phi = RefutationScanner(polys[i]).structured()) {
      verdict.status = SPStatus::kRefuted;
      verdict.refutation = detail::build_weak_refutation(v, others, instances[i], std::move(*phi));
      return verdict;
    }
  if (cfg.trials > 0)
    for (std::size_t i = 0; i < instances.size(); ++i)
      if (auto phi = RefutationScanner(polys[i]).random(cfg.trials, cfg.seed + i)) {
        verdict.status = SPStatus::kRefuted;
        verdict.refutation = detail::build_weak_refutation(v, others, instances[i], std::move(*phi));
        return verdict;
      }

  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto res = polya_certify(polys[i], cfg.polya_max);
    if (res.certified) {
      verdict.polya_degree = std::max(verdict.polya_degree, res.degree);
    } else {
      verdict.status = SPStatus::kUnknown;
      verdict.uncertified.push_back(instances[i]);
    }
  }
  if (verdict.status == SPStatus::kUnknown) verdict.polya_degree = cfg.polya_max;
  return verdict;
}

// For every fixed profile of the other voters, truthful reporting must place
// at least as much mass on each upper set of P as any misreport.
inline SPVerdict check_classic_sp(const RuleTable& v) {
  SPVerdict verdict;
  const OthersIndex others(v);
  const auto instances = manipulation_instances(v);
  verdict.instances = instances.size();
  for (std::size_t q = 0; q < others.size(); ++q)
    for (const auto& inst : instances) {
      const auto upper = upper_set(v.space().ordering(inst.truthful), inst.k);
      Rational d = v.mass(others.with_own(q, inst.truthful), upper) - v.mass(others.with_own(q, inst.misreport), upper);
      if (d >= 0) continue;
      std::vector<Rational> gains;
      const auto& p = v.space().ordering(inst.truthful);
      for (int t = 1; t < v.m(); ++t) {
        const auto u = upper_set(p, t);
        gains.push_back(v.mass(others.with_own(q, inst.misreport), u) - v.mass(others.with_own(q, inst.truthful), u));
      }
      Refutation r;
      r.instance = inst;
      r.others = others.profile(q);
      r.utility = witness_utility(p, inst.k, gains);
      r.gain = misreport_gain_fixed(v, others, inst, q, r.utility);
      verdict.status = SPStatus::kRefuted;
      verdict.refutation = std::move(r);
      return verdict;
    }
  return verdict;
}

}  // namespace iidsp
