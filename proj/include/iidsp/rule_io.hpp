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

// JSON rule files:
//   {"m":3, "n":2, "candidates":["a","b","c"],
//    "entries":[{"profile":["a>b>c","a>b>c"], "lottery":["1","0","0"]}, ...]}
// Profiles list one ordering per voter (multiplicity by repetition), and
// probabilities are exact "p/q" strings. Every anonymous profile must appear
// exactly once.

#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "iidsp/rules.hpp"

namespace iidsp {

using json = nlohmann::json;

struct NamedRule {
  CandidateSet candidates;
  RuleTable rule;
};

inline json rule_to_json(const RuleTable& v, const CandidateSet& names) {
  json entries = json::array();
  const auto& sp = v.space();
  for (std::size_t p = 0; p < v.size(); ++p) {
    json prof = json::array();
    for (auto i : sp.profile(p).members()) prof.push_back(names.format(sp.ordering(i)));
    json lot = json::array();
    for (const auto& q : v.lottery(p)) lot.push_back(to_string(q));
    entries.push_back({{"profile", std::move(prof)}, {"lottery", std::move(lot)}});
  }
  return {{"m", v.m()}, {"n", v.n()}, {"candidates", names.names()}, {"entries", std::move(entries)}};
}

inline NamedRule rule_from_json(const json& j, const Caps& caps = Caps::from_env()) {
  auto need = [&](const char* key) -> const json& {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("rule file: missing field '") + key + "'");
    return j.at(key);
  };
  const json& jm = need("m");
  const json& jn = need("n");
  if (!jm.is_number_integer() || !jn.is_number_integer()) throw FormatError("rule file: m and n must be integers");
  const int m = jm.get<int>(), n = jn.get<int>();
  if (m < 1 || n < 1) throw FormatError("rule file: m and n must be >= 1");
  const json& jc = need("candidates");
  if (!jc.is_array() || static_cast<int>(jc.size()) != m)
    throw FormatError("rule file: 'candidates' must list m names");
  std::vector<std::string> names;
  for (const auto& c : jc) {
    if (!c.is_string()) throw FormatError("rule file: candidate names must be strings");
    names.push_back(c.get<std::string>());
  }
  CandidateSet cands(std::move(names));
  auto space = ProfileSpace::make(m, n, caps);
  const json& je = need("entries");
  if (!je.is_array()) throw FormatError("rule file: 'entries' must be an array");
  std::vector<std::optional<Lottery>> slots(space->num_profiles());
  for (const auto& e : je) {
    if (!e.is_object() || !e.contains("profile") || !e.contains("lottery"))
      throw FormatError("rule file: each entry needs 'profile' and 'lottery'");
    const auto& jp = e.at("profile");
    if (!jp.is_array() || static_cast<int>(jp.size()) != n)
      throw FormatError("rule file: entry profile must list n orderings");
    Profile prof;
    for (const auto& o : jp) {
      if (!o.is_string()) throw FormatError("rule file: orderings must be strings");
      prof.push_back(cands.parse_ordering(o.get<std::string>()));
    }
    const auto& jl = e.at("lottery");
    if (!jl.is_array() || static_cast<int>(jl.size()) != m)
      throw FormatError("rule file: lottery must have m entries");
    Lottery l;
    for (const auto& q : jl) {
      if (!q.is_string()) throw FormatError("rule file: probabilities must be \"p/q\" strings");
      l.push_back(parse_rational(q.get<std::string>()));
    }
    if (!is_valid_lottery(l, m))
      throw FormatError("rule file: lottery for profile " + cands.format(prof) + " is not a probability vector");
    auto idx = space->index_of(prof);
    if (slots[idx]) throw FormatError("rule file: duplicate entry for profile " + cands.format(prof));
    slots[idx] = std::move(l);
  }
  std::vector<Lottery> table;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i])
      throw FormatError("rule file: rule is not total, missing profile " +
                        cands.format(space->profile(i).expand()));
    table.push_back(std::move(*slots[i]));
  }
  return {std::move(cands), RuleTable(space, std::move(table))};
}

}  // namespace iidsp
