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

// Candidates, strict orderings, voter profiles and their anonymous quotient,
// plus the adjacent-swap machinery (raise, swap paths) used by the checkers.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iidsp/errors.hpp"

namespace iidsp {

using Candidate = int;

// Enumeration guard rails. Overridable through IIDSP_MAX_CANDIDATES and
// IIDSP_MAX_PROFILES.
struct Caps {
  int max_candidates = 5;
  std::uint64_t max_profiles = 10'000'000;

  static Caps from_env() {
    Caps caps;
    if (const char* s = std::getenv("IIDSP_MAX_CANDIDATES")) caps.max_candidates = std::atoi(s);
    if (const char* s = std::getenv("IIDSP_MAX_PROFILES"))
      caps.max_profiles = std::strtoull(s, nullptr, 10);
    return caps;
  }
};

inline std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// C(n + k - 1, k): multisets of size k drawn from n kinds. Saturates at
// UINT64_MAX.
inline std::uint64_t multiset_count(std::uint64_t kinds, std::uint64_t size) {
  if (kinds == 0) return size == 0 ? 1 : 0;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= size; ++i) {
    c = c * (kinds + i - 1) / i;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

inline void check_candidate_cap(int m, const Caps& caps) {
  if (m < 1) throw std::domain_error("number of candidates must be >= 1");
  if (m > caps.max_candidates)
    throw ResourceLimitError("m = " + std::to_string(m) + " exceeds candidate cap max_candidates = " +
                             std::to_string(caps.max_candidates));
}

// Strict total order on candidates 0..m-1, highest-ranked first.
class Ordering {
 public:
  Ordering() = default;
  explicit Ordering(std::vector<Candidate> ranks) : ranks_(std::move(ranks)) {
    std::vector<bool> seen(ranks_.size(), false);
    for (Candidate c : ranks_) {
      if (c < 0 || c >= size() || seen[static_cast<std::size_t>(c)])
        throw std::domain_error("ordering is not a permutation of 0..m-1");
      seen[static_cast<std::size_t>(c)] = true;
    }
  }

  // Identity ordering 0 > 1 > ... > m-1.
  static Ordering identity(int m) {
    std::vector<Candidate> r(static_cast<std::size_t>(m));
    std::iota(r.begin(), r.end(), 0);
    return Ordering(std::move(r));
  }

  int size() const { return static_cast<int>(ranks_.size()); }
  const std::vector<Candidate>& ranks() const { return ranks_; }
  Candidate operator[](int pos) const { return ranks_[static_cast<std::size_t>(pos)]; }
  Candidate top() const { return ranks_.front(); }
  Candidate bottom() const { return ranks_.back(); }

  bool contains(Candidate c) const { return c >= 0 && c < size(); }

  int position(Candidate c) const {
    auto it = std::find(ranks_.begin(), ranks_.end(), c);
    if (it == ranks_.end()) throw std::domain_error("candidate " + std::to_string(c) + " not in ordering");
    return static_cast<int>(it - ranks_.begin());
  }

  // x is ranked strictly above y.
  bool prefers(Candidate x, Candidate y) const { return position(x) < position(y); }

  // x sits directly on top of y.
  bool directly_above(Candidate x, Candidate y) const { return position(x) + 1 == position(y); }

  // Copy with the candidates at positions pos and pos + 1 exchanged.
  Ordering swapped_at(int pos) const {
    Ordering o(*this);
    std::swap(o.ranks_[static_cast<std::size_t>(pos)], o.ranks_[static_cast<std::size_t>(pos + 1)]);
    return o;
  }

  // Copy with c moved to the bottom, others keeping their relative order.
  Ordering with_bottom(Candidate c) const {
    std::vector<Candidate> r;
    for (Candidate d : ranks_)
      if (d != c) r.push_back(d);
    r.push_back(c);
    return Ordering(std::move(r));
  }

  // Copy with c moved to the top.
  Ordering with_top(Candidate c) const {
    std::vector<Candidate> r{c};
    for (Candidate d : ranks_)
      if (d != c) r.push_back(d);
    return Ordering(std::move(r));
  }

  friend bool operator==(const Ordering&, const Ordering&) = default;
  friend auto operator<=>(const Ordering&, const Ordering&) = default;

 private:
  std::vector<Candidate> ranks_;
};

inline Candidate top(const Ordering& p) { return p.top(); }

// P^y: y exchanged with the candidate directly above it; identity when y is
// already on top.
inline Ordering raise(const Ordering& p, Candidate y) {
  if (!p.contains(y)) throw std::domain_error("raise: candidate " + std::to_string(y) + " not in ordering");
  int pos = p.position(y);
  return pos == 0 ? p : p.swapped_at(pos - 1);
}

// The k highest-ranked candidates of p, in rank order.
inline std::vector<Candidate> upper_set(const Ordering& p, int k) {
  if (k < 1 || k > p.size())
    throw std::domain_error("upper_set: k = " + std::to_string(k) + " outside [1, " + std::to_string(p.size()) + "]");
  return {p.ranks().begin(), p.ranks().begin() + k};
}

// Lexicographic rank of p among all m! orderings (Lehmer code).
inline std::size_t ordering_index(const Ordering& p) {
  const int m = p.size();
  std::size_t idx = 0;
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (int i = 0; i < m; ++i) {
    int smaller = 0;
    for (int c = 0; c < p[i]; ++c)
      if (!used[static_cast<std::size_t>(c)]) ++smaller;
    used[static_cast<std::size_t>(p[i])] = true;
    idx = idx * static_cast<std::size_t>(m - i) + static_cast<std::size_t>(smaller);
  }
  return idx;
}

inline Ordering ordering_from_index(int m, std::size_t idx) {
  std::vector<std::size_t> digits(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    std::size_t base = static_cast<std::size_t>(m - i);
    digits[static_cast<std::size_t>(i)] = idx % base;
    idx /= base;
  }
  std::vector<Candidate> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<Candidate> ranks;
  for (int i = 0; i < m; ++i) {
    auto it = pool.begin() + static_cast<std::ptrdiff_t>(digits[static_cast<std::size_t>(i)]);
    ranks.push_back(*it);
    pool.erase(it);
  }
  return Ordering(std::move(ranks));
}

// All m! orderings in lexicographic order.
inline std::vector<Ordering> enumerate_orderings(int m, const Caps& caps = {}) {
  check_candidate_cap(m, caps);
  std::vector<Ordering> out;
  std::vector<Candidate> r(static_cast<std::size_t>(m));
  std::iota(r.begin(), r.end(), 0);
  do {
    out.emplace_back(r);
  } while (std::next_permutation(r.begin(), r.end()));
  return out;
}

using Profile = std::vector<Ordering>;

inline std::vector<Candidate> tops(const Profile& p) {
  std::vector<Candidate> t;
  for (const auto& o : p) t.push_back(o.top());
  return t;
}

// Multiset of orderings, stored as sorted lexicographic ordering indices.
class AnonymousProfile {
 public:
  AnonymousProfile() = default;
  AnonymousProfile(int m, std::vector<std::size_t> members) : m_(m), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
  }

  int m() const { return m_; }
  int n() const { return static_cast<int>(members_.size()); }
  const std::vector<std::size_t>& members() const { return members_; }

  // ordering index -> multiplicity
  std::map<std::size_t, int> counts() const {
    std::map<std::size_t, int> c;
    for (auto i : members_) ++c[i];
    return c;
  }

  std::vector<std::size_t> distinct() const {
    std::vector<std::size_t> d(members_);
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
  }

  Ordering ordering(int voter) const {
    return ordering_from_index(m_, members_[static_cast<std::size_t>(voter)]);
  }

  Profile expand() const {
    Profile p;
    for (auto i : members_) p.push_back(ordering_from_index(m_, i));
    return p;
  }

  // Multiset with one copy of `from` replaced by `to`.
  AnonymousProfile replaced(std::size_t from, std::size_t to) const {
    std::vector<std::size_t> mem(members_);
    auto it = std::find(mem.begin(), mem.end(), from);
    if (it == mem.end()) throw std::domain_error("replaced: ordering not in profile");
    *it = to;
    return AnonymousProfile(m_, std::move(mem));
  }

  AnonymousProfile with_added(std::size_t idx) const {
    std::vector<std::size_t> mem(members_);
    mem.push_back(idx);
    return AnonymousProfile(m_, std::move(mem));
  }

  // Number of members whose top is x.
  int top_count(Candidate x) const {
    int c = 0;
    for (auto i : members_)
      if (ordering_from_index(m_, i).top() == x) ++c;
    return c;
  }

  std::vector<Candidate> sorted_tops() const {
    std::vector<Candidate> t;
    for (auto i : members_) t.push_back(ordering_from_index(m_, i).top());
    std::sort(t.begin(), t.end());
    return t;
  }

  std::string key() const {
    std::string k;
    k.reserve(members_.size() * 2);
    for (auto i : members_) {
      k.push_back(static_cast<char>(i & 0xff));
      k.push_back(static_cast<char>((i >> 8) & 0xff));
    }
    return k;
  }

  friend bool operator==(const AnonymousProfile&, const AnonymousProfile&) = default;
  friend auto operator<=>(const AnonymousProfile&, const AnonymousProfile&) = default;

 private:
  int m_ = 0;
  std::vector<std::size_t> members_;
};

inline AnonymousProfile canonicalize(const Profile& p) {
  if (p.empty()) throw std::domain_error("profile must contain at least one voter");
  const int m = p.front().size();
  std::vector<std::size_t> mem;
  for (const auto& o : p) {
    if (o.size() != m) throw std::domain_error("profile orderings range over different candidate sets");
    mem.push_back(ordering_index(o));
  }
  return AnonymousProfile(m, std::move(mem));
}

// Every ordered profile of (m, n) in lexicographic order of ordering indices.
inline std::vector<Profile> enumerate_profiles(int m, int n, const Caps& caps = {}) {
  check_candidate_cap(m, caps);
  if (n < 1) throw std::domain_error("number of voters must be >= 1");
  const std::uint64_t k = factorial(m);
  unsigned __int128 total = 1;
  for (int i = 0; i < n; ++i) {
    total *= k;
    if (total > caps.max_profiles)
      throw ResourceLimitError("(m!)^n exceeds profile cap max_profiles = " + std::to_string(caps.max_profiles));
  }
  auto orderings = enumerate_orderings(m, caps);
  std::vector<Profile> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  while (true) {
    Profile p;
    for (auto d : digit) p.push_back(orderings[d]);
    out.push_back(std::move(p));
    int i = n - 1;
    while (i >= 0 && ++digit[static_cast<std::size_t>(i)] == k) digit[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

// Every multiset of n orderings, in lexicographic order of the sorted index
// vectors.
inline std::vector<AnonymousProfile> enumerate_anonymous_profiles(int m, int n, const Caps& caps = {}) {
  check_candidate_cap(m, caps);
  if (n < 0) throw std::domain_error("number of voters must be >= 0");
  const std::uint64_t k = factorial(m);
  std::uint64_t total = multiset_count(k, static_cast<std::uint64_t>(n));
  if (total > caps.max_profiles)
    throw ResourceLimitError("C(m!+n-1, n) = " + std::to_string(total) +
                             " exceeds profile cap max_profiles = " + std::to_string(caps.max_profiles));
  std::vector<AnonymousProfile> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> mem(static_cast<std::size_t>(n), 0);
  while (true) {
    out.emplace_back(m, mem);
    int i = n - 1;
    while (i >= 0 && mem[static_cast<std::size_t>(i)] + 1 == k) --i;
    if (i < 0) break;
    std::size_t v = mem[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < n; ++j) mem[static_cast<std::size_t>(j)] = v;
  }
  return out;
}

// One adjacent exchange: in voter's ordering, `lower` moves up past `upper`.
struct Swap {
  int voter;
  Candidate upper;
  Candidate lower;
  friend bool operator==(const Swap&, const Swap&) = default;
};

// Applies s to p in place; throws if the pair is not adjacent.
inline void apply_swap(Profile& p, const Swap& s) {
  Ordering& o = p.at(static_cast<std::size_t>(s.voter));
  int pos = o.position(s.upper);
  if (pos + 1 >= o.size() || o[pos + 1] != s.lower)
    throw std::domain_error("swap of non-adjacent candidates");
  o = o.swapped_at(pos);
}

// Minimal sequence of adjacent swaps turning a into b. Voters are processed
// in increasing index; within a voter the highest disagreeing position is
// repaired by bubbling the target's candidate upward. When `forbidden` is
// set, no swap touches it; this needs the forbidden candidate at the same
// position, with the same candidates above it, in a_i and b_i.
inline std::vector<Swap> swap_path(const Profile& a, const Profile& b,
                                   std::optional<Candidate> forbidden = std::nullopt) {
  if (a.size() != b.size()) throw std::domain_error("swap_path: profiles differ in voter count");
  std::vector<Swap> path;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw std::domain_error("swap_path: candidate sets differ");
    const int vi = static_cast<int>(i);
    if (forbidden) {
      int pa = a[i].position(*forbidden), pb = b[i].position(*forbidden);
      if (pa != pb)
        throw PreconditionError("swap_path: forbidden candidate moves for voter " + std::to_string(i), vi);
      std::set<Candidate> above_a(a[i].ranks().begin(), a[i].ranks().begin() + pa);
      std::set<Candidate> above_b(b[i].ranks().begin(), b[i].ranks().begin() + pb);
      if (above_a != above_b)
        throw PreconditionError(
            "swap_path: candidates above the forbidden one differ for voter " + std::to_string(i), vi);
    }
    std::vector<Candidate> cur = a[i].ranks();
    const auto& target = b[i].ranks();
    for (std::size_t pos = 0; pos < cur.size(); ++pos) {
      if (cur[pos] == target[pos]) continue;
      auto at = static_cast<std::size_t>(std::find(cur.begin(), cur.end(), target[pos]) - cur.begin());
      for (std::size_t q = at; q > pos; --q) {
        path.push_back({vi, cur[q - 1], cur[q]});
        std::swap(cur[q - 1], cur[q]);
      }
    }
  }
  return path;
}

inline int kendall_tau(const Ordering& a, const Ordering& b) {
  int d = 0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      if (b.prefers(a[j], a[i])) ++d;
  return d;
}

// Display names and the "a>b>c" / "P;Q" text forms.
class CandidateSet {
 public:
  CandidateSet() = default;
  explicit CandidateSet(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& s : names_) {
      if (s.empty() || s.find_first_of(">; \t\n") != std::string::npos)
        throw FormatError("invalid candidate name '" + s + "'");
      if (!seen.insert(s).second) throw FormatError("duplicate candidate name '" + s + "'");
    }
  }

  // a, b, c, ... (then c26, c27, ... beyond the alphabet).
  static CandidateSet default_names(int m) {
    std::vector<std::string> n;
    for (int i = 0; i < m; ++i) n.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "c" + std::to_string(i));
    return CandidateSet(std::move(n));
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Candidate c) const { return names_.at(static_cast<std::size_t>(c)); }

  Candidate index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<Candidate>(i);
    throw FormatError("unknown candidate '" + std::string(name) + "'");
  }

  std::string format(const Ordering& o) const {
    std::string s;
    for (int i = 0; i < o.size(); ++i) {
      if (i) s += '>';
      s += name(o[i]);
    }
    return s;
  }

  std::string format(const Profile& p) const {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ';';
      s += format(p[i]);
    }
    return s;
  }

  Ordering parse_ordering(std::string_view text) const {
    std::vector<Candidate> r;
    std::size_t start = 0;
    while (true) {
      auto end = text.find('>', start);
      r.push_back(index_of(text.substr(start, end == std::string_view::npos ? end : end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    if (static_cast<int>(r.size()) != size())
      throw FormatError("ordering '" + std::string(text) + "' does not rank all " + std::to_string(size()) +
                        " candidates");
    try {
      return Ordering(std::move(r));
    } catch (const std::domain_error&) {
      throw FormatError("ordering '" + std::string(text) + "' repeats a candidate");
    }
  }

  Profile parse_profile(std::string_view text) const {
    Profile p;
    std::size_t start = 0;
    while (true) {
      auto end = text.find(';', start);
      p.push_back(parse_ordering(text.substr(start, end == std::string_view::npos ? end : end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    return p;
  }

 private:
  std::vector<std::string> names_;
};

// Orderings and anonymous profiles of a fixed (m, n), with index lookup.
// Shared by every rule table over the same dimensions.
class ProfileSpace {
 public:
  ProfileSpace(int m, int n, const Caps& caps = Caps::from_env())
      : m_(m), n_(n), orderings_(enumerate_orderings(m, caps)), profiles_(enumerate_anonymous_profiles(m, n, caps)) {
    if (n < 1) throw std::domain_error("number of voters must be >= 1");
    index_.reserve(profiles_.size());
    for (std::size_t i = 0; i < profiles_.size(); ++i) index_.emplace(profiles_[i].key(), i);
  }

  static std::shared_ptr<const ProfileSpace> make(int m, int n, const Caps& caps = Caps::from_env()) {
    return std::make_shared<const ProfileSpace>(m, n, caps);
  }

  int m() const { return m_; }
  int n() const { return n_; }
  std::size_t num_orderings() const { return orderings_.size(); }
  std::size_t num_profiles() const { return profiles_.size(); }
  const std::vector<Ordering>& orderings() const { return orderings_; }
  const Ordering& ordering(std::size_t idx) const { return orderings_[idx]; }
  const std::vector<AnonymousProfile>& profiles() const { return profiles_; }
  const AnonymousProfile& profile(std::size_t idx) const { return profiles_[idx]; }

  std::size_t index_of(const AnonymousProfile& a) const {
    if (a.m() != m_ || a.n() != n_)
      throw std::domain_error("profile dimensions (" + std::to_string(a.m()) + "," + std::to_string(a.n()) +
                              ") do not match (" + std::to_string(m_) + "," + std::to_string(n_) + ")");
    return index_.at(a.key());
  }
  std::size_t index_of(const Profile& p) const { return index_of(canonicalize(p)); }

 private:
  int m_, n_;
  std::vector<Ordering> orderings_;
  std::vector<AnonymousProfile> profiles_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace iidsp
