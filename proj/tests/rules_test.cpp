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

#include <gtest/gtest.h>

#include <random>

#include "iidsp/rules.hpp"
#include "oracles.hpp"

namespace iidsp {
namespace {

const CandidateSet kNames = CandidateSet::default_names(3);
Profile prof(const char* s) { return kNames.parse_profile(s); }

TEST(RandomDictatorship, HandExamples) {
  auto v = random_dictatorship(3, 3);
  Profile p = prof("a>b>c;a>c>b;b>a>c");
  EXPECT_EQ(v.eval(p, 0), Rational(2, 3));
  EXPECT_EQ(v.eval(p, 1), Rational(1, 3));
  EXPECT_EQ(v.eval(p, 2), 0);
  Profile q = prof("a>b>c;b>c>a;c>a>b");
  for (Candidate x = 0; x < 3; ++x) EXPECT_EQ(v.eval(q, x), Rational(1, 3));
  auto single = random_dictatorship(3, 1);
  EXPECT_EQ(single.eval(prof("b>c>a"), 1), 1);
}

TEST(RandomDictatorship, MatchesFormulaOnEveryOrderedProfile) {
  for (int m = 2; m <= 4; ++m)
    for (int n = 1; n <= 3; ++n) {
      auto v = random_dictatorship(m, n);
      for (const auto& p : enumerate_profiles(m, n))
        for (Candidate x = 0; x < m; ++x) ASSERT_EQ(v.eval(p, x), testing::dictatorship_formula(p, x));
    }
}

TEST(SimpleRules, UniformAndConstant) {
  auto space = ProfileSpace::make(3, 2);
  auto u = uniform_rule(space);
  auto c = constant_rule(space, 2);
  for (std::size_t p = 0; p < u.size(); ++p) {
    for (Candidate x = 0; x < 3; ++x) EXPECT_EQ(u.at(p, x), Rational(1, 3));
    EXPECT_EQ(c.at(p, 2), 1);
  }
  EXPECT_FALSE(u.is_deterministic());
  EXPECT_TRUE(c.is_deterministic());
}

TEST(SimpleRules, Plurality) {
  auto space = ProfileSpace::make(3, 3);
  auto pu = plurality_uniform_tiebreak(space);
  auto pf = plurality_fixed_tiebreak(space);
  Profile p = prof("b>a>c;b>c>a;c>a>b");
  EXPECT_EQ(pu.eval(p, 1), 1);
  EXPECT_EQ(pf.eval(p, 1), 1);
  Profile tie = prof("c>a>b;b>a>c;a>b>c");
  for (Candidate x = 0; x < 3; ++x) EXPECT_EQ(pu.eval(tie, x), Rational(1, 3));
  EXPECT_EQ(pf.eval(tie, 0), 1);
}

TEST(SimpleRules, ScoringAndDuple) {
  auto space = ProfileSpace::make(3, 2);
  auto s = scoring_rule(space, {Rational(1, 2), Rational(1, 2), Rational(0)});
  Profile p = prof("a>b>c;c>b>a");
  EXPECT_EQ(s.eval(p, 0), Rational(1, 4));
  EXPECT_EQ(s.eval(p, 1), Rational(1, 2));
  EXPECT_EQ(s.eval(p, 2), Rational(1, 4));
  EXPECT_THROW(scoring_rule(space, {Rational(1), Rational(1), Rational(0)}), std::domain_error);
  auto d = duple_rule(space, 0, 2, {Rational(0), Rational(1, 2), Rational(1)});
  EXPECT_EQ(d.eval(p, 0), Rational(1, 2));
  EXPECT_EQ(d.eval(prof("a>b>c;b>a>c"), 0), 1);
  EXPECT_THROW(duple_rule(space, 0, 0, {0, 0, 0}), std::domain_error);
}

TEST(RuleTable, RejectsBadTables) {
  auto space = ProfileSpace::make(2, 1);
  EXPECT_THROW(RuleTable(space, {{Rational(1), Rational(0)}}), std::domain_error);
  EXPECT_THROW(RuleTable(space, {{Rational(1), Rational(0)}, {Rational(1, 2), Rational(1, 3)}}), std::domain_error);
  EXPECT_THROW(RuleTable(space, {{Rational(1), Rational(0)}, {Rational(2), Rational(-1)}}), std::domain_error);
  auto v = uniform_rule(space);
  EXPECT_THROW(v.eval(Profile{Ordering::identity(2)}, 2), std::domain_error);
}

TEST(Mixture, WeightedAverage) {
  auto space = ProfileSpace::make(3, 3);
  auto v = random_dictatorship(space), u = uniform_rule(space);
  auto mix = mixture({v, u}, {Rational(1, 4), Rational(3, 4)});
  for (std::size_t p = 0; p < mix.size(); ++p)
    for (Candidate x = 0; x < 3; ++x) EXPECT_EQ(mix.at(p, x), v.at(p, x) / 4 + u.at(p, x) * 3 / 4);
  EXPECT_THROW(mixture({v, u}, {Rational(1, 2), Rational(1, 3)}), std::domain_error);
  EXPECT_THROW(mixture({v, u}, {Rational(3, 2), Rational(-1, 2)}), std::domain_error);
  EXPECT_THROW(mixture({v, random_dictatorship(3, 2)}, {Rational(1, 2), Rational(1, 2)}), std::domain_error);
}

TEST(Closeness, UniformVersusDictatorship) {
  auto space = ProfileSpace::make(3, 3);
  auto c = closeness_with_witness(random_dictatorship(space), uniform_rule(space));
  EXPECT_EQ(c.value, Rational(2, 3));
  EXPECT_EQ(abs_diff(random_dictatorship(space).at(c.profile, c.candidate), Rational(1, 3)), Rational(2, 3));
}

TEST(Closeness, IsAMetric) {
  std::mt19937_64 rng(3);
  auto space = ProfileSpace::make(3, 2);
  for (int t = 0; t < 30; ++t) {
    auto a = testing::random_rule(space, rng), b = testing::random_rule(space, rng),
         c = testing::random_rule(space, rng);
    EXPECT_EQ(closeness(a, a), 0);
    EXPECT_EQ(closeness(a, b), closeness(b, a));
    EXPECT_LE(closeness(a, c), closeness(a, b) + closeness(b, c));
    EXPECT_GE(closeness(a, b), 0);
    EXPECT_LE(closeness(a, b), 1);
  }
}

TEST(Perturb, StaysWithinDeltaAndIsDeterministic) {
  auto space = ProfileSpace::make(3, 3);
  auto v = random_dictatorship(space);
  for (const Rational& delta : {Rational(0), Rational(1, 100), Rational(1, 20), Rational(1)}) {
    auto w = perturb(v, delta, 99);
    EXPECT_LE(closeness(v, w), delta);
    EXPECT_EQ(w, perturb(v, delta, 99));
  }
  EXPECT_EQ(perturb(v, 0, 1), v);
  EXPECT_NE(perturb(v, Rational(1, 20), 1), perturb(v, Rational(1, 20), 2));
  EXPECT_THROW(perturb(v, Rational(3, 2), 1), std::domain_error);
}

TEST(Structure, Dictatorial) {
  auto d = is_dictatorial_deterministic(plurality_fixed_tiebreak(ProfileSpace::make(3, 1)));
  EXPECT_TRUE(d.dictatorial);
  auto p = is_dictatorial_deterministic(plurality_fixed_tiebreak(ProfileSpace::make(3, 3)));
  EXPECT_FALSE(p.dictatorial);
  ASSERT_TRUE(p.counterexample);
  EXPECT_FALSE(is_dictatorial_deterministic(constant_rule(ProfileSpace::make(3, 1), 0)).dictatorial);
  EXPECT_THROW(is_dictatorial_deterministic(uniform_rule(3, 2)), std::domain_error);
}

TEST(Structure, Duple) {
  auto space = ProfileSpace::make(3, 3);
  auto d = is_duple(duple_rule(space, 2, 0, {0, Rational(1, 3), Rational(2, 3), 1}));
  EXPECT_TRUE(d.duple);
  EXPECT_EQ(d.pair, (std::pair<Candidate, Candidate>{0, 2}));
  EXPECT_TRUE(is_duple(constant_rule(space, 1)).duple);
  auto u = is_duple(uniform_rule(space));
  EXPECT_FALSE(u.duple);
  EXPECT_EQ(u.witness_candidate, 2);
}

TEST(Structure, Unilateral) {
  auto space = ProfileSpace::make(3, 3);
  EXPECT_TRUE(is_unilateral(uniform_rule(space)).unilateral);
  EXPECT_TRUE(is_unilateral(random_dictatorship(ProfileSpace::make(3, 1))).unilateral);
  auto r = is_unilateral(random_dictatorship(space));
  ASSERT_FALSE(r.unilateral);
  ASSERT_TRUE(r.witness);
  // The two witness profiles share an ordering yet get different lotteries.
  auto a = space->profile(r.witness->first), b = space->profile(r.witness->second);
  auto da = a.distinct(), db = b.distinct();
  std::vector<std::size_t> common;
  std::set_intersection(da.begin(), da.end(), db.begin(), db.end(), std::back_inserter(common));
  EXPECT_FALSE(common.empty());
  auto v = random_dictatorship(space);
  EXPECT_NE(v.lottery(r.witness->first), v.lottery(r.witness->second));
}

TEST(Generators, ResponsiveFamilyProducesValidLotteries) {
  std::mt19937_64 rng(5);
  auto space = ProfileSpace::make(3, 3);
  for (int t = 0; t < 20; ++t) {
    auto v = testing::random_responsive_rule(space, rng);
    for (std::size_t p = 0; p < v.size(); ++p) EXPECT_TRUE(is_valid_lottery(v.lottery(p), 3));
  }
}

}  // namespace
}  // namespace iidsp
