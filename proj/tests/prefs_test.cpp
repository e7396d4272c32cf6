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

#include <algorithm>
#include <random>
#include <set>

#include "iidsp/prefs.hpp"
#include "oracles.hpp"

namespace iidsp {
namespace {

const CandidateSet kNames = CandidateSet::default_names(3);
Ordering ord(const char* s) { return kNames.parse_ordering(s); }

TEST(Orderings, CountsAndLexicographicOrder) {
  EXPECT_EQ(enumerate_orderings(3).size(), 6u);
  EXPECT_EQ(enumerate_orderings(1).size(), 1u);
  auto four = enumerate_orderings(4);
  ASSERT_EQ(four.size(), 24u);
  EXPECT_EQ(four.front(), Ordering::identity(4));
  EXPECT_TRUE(std::is_sorted(four.begin(), four.end()));
  EXPECT_EQ(std::set<Ordering>(four.begin(), four.end()).size(), 24u);
}

TEST(Orderings, IndexRoundTrip) {
  for (int m = 1; m <= 5; ++m) {
    auto all = enumerate_orderings(m);
    for (std::size_t i = 0; i < all.size(); ++i) {
      EXPECT_EQ(ordering_index(all[i]), i);
      EXPECT_EQ(ordering_from_index(m, i), all[i]);
    }
  }
}

TEST(Orderings, CandidateCapIsEnforced) {
  try {
    enumerate_orderings(6);
    FAIL() << "expected ResourceLimitError";
  } catch (const ResourceLimitError& e) {
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos);
  }
  Caps wide;
  wide.max_candidates = 6;
  EXPECT_EQ(enumerate_orderings(6, wide).size(), 720u);
  EXPECT_THROW(enumerate_orderings(0), std::domain_error);
}

TEST(Orderings, RejectsNonPermutations) {
  EXPECT_THROW(Ordering({0, 0, 1}), std::domain_error);
  EXPECT_THROW(Ordering({0, 3, 1}), std::domain_error);
}

TEST(Top, FirstRanked) {
  EXPECT_EQ(top(ord("a>b>c")), 0);
  EXPECT_EQ(top(ord("c>a>b")), 2);
  EXPECT_EQ(tops({ord("b>a>c"), ord("c>b>a")}), (std::vector<Candidate>{1, 2}));
}

TEST(Raise, Examples) {
  EXPECT_EQ(raise(ord("a>b>c"), 2), ord("a>c>b"));
  EXPECT_EQ(raise(ord("a>b>c"), 0), ord("a>b>c"));
  EXPECT_EQ(raise(ord("b>a>c"), 0), ord("a>b>c"));
  EXPECT_THROW(raise(ord("a>b>c"), 3), std::domain_error);
}

TEST(Raise, RepeatedRaiseReachesTop) {
  for (const auto& p : enumerate_orderings(4))
    for (Candidate y = 0; y < 4; ++y) {
      Ordering q = p;
      for (int k = 0; k < 3; ++k) q = raise(q, y);
      EXPECT_EQ(q.top(), y);
      // Relative order of the others is untouched.
      std::vector<Candidate> rest_p, rest_q;
      for (auto c : p.ranks())
        if (c != y) rest_p.push_back(c);
      for (auto c : q.ranks())
        if (c != y) rest_q.push_back(c);
      EXPECT_EQ(rest_p, rest_q);
    }
}

TEST(Raise, ChangesExactlyOneAdjacentPair) {
  for (const auto& p : enumerate_orderings(4))
    for (Candidate y = 0; y < 4; ++y) {
      Ordering q = raise(p, y);
      if (p.top() == y) {
        EXPECT_EQ(q, p);
        continue;
      }
      EXPECT_EQ(kendall_tau(p, q), 1);
      EXPECT_EQ(q.position(y) + 1, p.position(y));
    }
}

TEST(UpperSet, Prefixes) {
  EXPECT_EQ(upper_set(ord("c>a>b"), 1), (std::vector<Candidate>{2}));
  EXPECT_EQ(upper_set(ord("c>a>b"), 3), (std::vector<Candidate>{2, 0, 1}));
  EXPECT_THROW(upper_set(ord("c>a>b"), 0), std::domain_error);
  EXPECT_THROW(upper_set(ord("c>a>b"), 4), std::domain_error);
}

TEST(SwapPath, IdenticalProfilesNeedNoSwaps) {
  Profile p{ord("a>b>c"), ord("b>c>a")};
  EXPECT_TRUE(swap_path(p, p).empty());
}

TEST(SwapPath, SingleVoterReversal) {
  Profile a{ord("a>b>c")}, b{ord("c>b>a")};
  auto path = swap_path(a, b);
  EXPECT_EQ(path.size(), 3u);
  for (const auto& s : path) apply_swap(a, s);
  EXPECT_EQ(a, b);
}

TEST(SwapPath, RandomPairsWithCommonTops) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 3 + static_cast<int>(trial % 3), n = 1 + static_cast<int>(trial % 4);
    Profile a = testing::random_profile(m, n, rng), b;
    for (const auto& o : a) b.push_back(testing::random_ordering_topped(m, o.top(), rng));
    // Forbid the top of voter 0 where every voter shares it; otherwise no restriction.
    auto path = swap_path(a, b);
    int expected = 0;
    for (int i = 0; i < n; ++i) expected += kendall_tau(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
    EXPECT_EQ(static_cast<int>(path.size()), expected);
    Profile cur = a;
    for (const auto& s : path) {
      EXPECT_NE(s.upper, cur[static_cast<std::size_t>(s.voter)].top()) << "a top moved";
      apply_swap(cur, s);
      EXPECT_EQ(tops(cur), tops(a));
    }
    EXPECT_EQ(cur, b);
  }
}

TEST(SwapPath, ForbiddenCandidateNeverMoves) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 4, n = 3;
    const Candidate f = static_cast<Candidate>(trial % m);
    Profile a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(testing::random_ordering_topped(m, f, rng));
      b.push_back(testing::random_ordering_topped(m, f, rng));
    }
    auto path = swap_path(a, b, f);
    for (const auto& s : path) {
      EXPECT_NE(s.upper, f);
      EXPECT_NE(s.lower, f);
      apply_swap(a, s);
    }
    EXPECT_EQ(a, b);
  }
}

TEST(SwapPath, ForbiddenCandidateInTheMiddle) {
  Profile a{ord("a>b>c")}, b{ord("a>b>c")};
  CandidateSet four = CandidateSet::default_names(4);
  Profile c{four.parse_ordering("b>a>d>c")}, d{four.parse_ordering("a>b>d>c")};
  EXPECT_EQ(swap_path(c, d, 3).size(), 1u);
  EXPECT_TRUE(swap_path(a, b, 1).empty());
}

TEST(SwapPath, ForbiddenPreconditionNamesVoter) {
  Profile a{ord("a>b>c"), ord("a>c>b")}, b{ord("a>b>c"), ord("c>a>b")};
  try {
    swap_path(a, b, 0);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.voter(), 1);
  }
  // Same position, different candidates above: cannot be done without moving it.
  Profile c{ord("a>c>b")}, d{ord("b>c>a")};
  EXPECT_THROW(swap_path(c, d, 2), PreconditionError);
}

TEST(SwapPath, ApplySwapRejectsNonAdjacent) {
  Profile p{ord("a>b>c")};
  EXPECT_THROW(apply_swap(p, {0, 0, 2}), std::domain_error);
}

TEST(Canonicalize, OrderOfVotersIsForgotten) {
  Ordering p = ord("a>b>c"), q = ord("c>a>b");
  EXPECT_EQ(canonicalize({p, q}), canonicalize({q, p}));
  auto c = canonicalize({p, p, p});
  EXPECT_EQ(c.counts(), (std::map<std::size_t, int>{{ordering_index(p), 3}}));
  EXPECT_THROW(canonicalize({}), std::domain_error);
}

TEST(Canonicalize, PermutationInvarianceExhaustive) {
  for (int n = 1; n <= 4; ++n) {
    std::set<AnonymousProfile> seen;
    for (const auto& p : enumerate_profiles(3, n)) {
      auto c = canonicalize(p);
      seen.insert(c);
      Profile q = p;
      std::sort(q.begin(), q.end());
      do {
        ASSERT_EQ(canonicalize(q), c);
      } while (std::next_permutation(q.begin(), q.end()));
      // expand() returns some reordering of the voters.
      Profile e = c.expand();
      std::sort(e.begin(), e.end());
      std::sort(q.begin(), q.end());
      ASSERT_EQ(e, q);
    }
    EXPECT_EQ(seen.size(), multiset_count(6, static_cast<std::uint64_t>(n)));
  }
}

TEST(Profiles, Counts) {
  EXPECT_EQ(enumerate_anonymous_profiles(3, 3).size(), 56u);
  EXPECT_EQ(enumerate_profiles(3, 2).size(), 36u);
  EXPECT_EQ(enumerate_anonymous_profiles(3, 2).size(), 21u);
  EXPECT_EQ(enumerate_anonymous_profiles(2, 3).size(), 4u);
  EXPECT_EQ(enumerate_anonymous_profiles(3, 0).size(), 1u);
  EXPECT_EQ(multiset_count(24, 4), 17550u);
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      auto all = enumerate_anonymous_profiles(m, n);
      EXPECT_EQ(all.size(), multiset_count(factorial(m), static_cast<std::uint64_t>(n)));
      EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
      EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    }
}

TEST(Profiles, ProfileCapIsEnforced) {
  Caps tight;
  tight.max_profiles = 50;
  EXPECT_THROW(enumerate_anonymous_profiles(3, 3, tight), ResourceLimitError);
  EXPECT_THROW(enumerate_profiles(3, 3, tight), ResourceLimitError);
  EXPECT_THROW(ProfileSpace(3, 3, tight), ResourceLimitError);
  EXPECT_NO_THROW(ProfileSpace(3, 2, tight));
}

TEST(ProfileSpace, IndexLookup) {
  ProfileSpace sp(3, 3);
  ASSERT_EQ(sp.num_profiles(), 56u);
  for (std::size_t i = 0; i < sp.num_profiles(); ++i) EXPECT_EQ(sp.index_of(sp.profile(i)), i);
  Profile p{ord("c>b>a"), ord("a>b>c"), ord("a>b>c")};
  EXPECT_EQ(sp.profile(sp.index_of(p)), canonicalize(p));
  EXPECT_THROW(sp.index_of(Profile{ord("a>b>c")}), std::domain_error);
}

TEST(AnonymousProfileOps, ReplaceAndAdd) {
  auto p = canonicalize({ord("a>b>c"), ord("b>a>c")});
  auto r = p.replaced(ordering_index(ord("b>a>c")), ordering_index(ord("c>b>a")));
  EXPECT_EQ(r, canonicalize({ord("c>b>a"), ord("a>b>c")}));
  EXPECT_THROW(p.replaced(ordering_index(ord("c>b>a")), 0), std::domain_error);
  EXPECT_EQ(p.with_added(0).n(), 3);
  EXPECT_EQ(p.top_count(0), 1);
  EXPECT_EQ(p.sorted_tops(), (std::vector<Candidate>{0, 1}));
}

TEST(TextForms, RoundTrip) {
  Profile p = kNames.parse_profile("a>b>c;c>b>a");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(kNames.format(p), "a>b>c;c>b>a");
  EXPECT_THROW(kNames.parse_ordering("a>b"), FormatError);
  EXPECT_THROW(kNames.parse_ordering("a>b>b"), FormatError);
  EXPECT_THROW(kNames.parse_ordering("a>b>z"), FormatError);
  EXPECT_THROW(CandidateSet({"x", "x"}), FormatError);
  EXPECT_THROW(CandidateSet({"x>y"}), FormatError);
}

}  // namespace
}  // namespace iidsp
