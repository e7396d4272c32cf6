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

// JSON encodings of checker results. Rationals appear as
// {"exact": "p/q", "decimal": <double>}; the decimal is display-only.

#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "iidsp/axioms.hpp"
#include "iidsp/belief_sp.hpp"
#include "iidsp/polytope.hpp"
#include "iidsp/rule_io.hpp"

namespace iidsp {

inline constexpr const char* kToolVersion = "0.1.0";

inline json rational_json(const Rational& r) { return {{"exact", to_string(r)}, {"decimal", to_double(r)}}; }

inline json rationals_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::kValue: return "value";
    case WitnessKind::kOneMinus: return "one-minus";
    case WitnessKind::kAbsDiff: return "abs-diff";
    case WitnessKind::kAbsSecondDiff: return "abs-second-diff";
    case WitnessKind::kDictGap: return "dictatorship-gap";
  }
  return "?";
}

inline json profile_json(const AnonymousProfile& p, const ProfileSpace& sp, const CandidateSet& names) {
  json a = json::array();
  for (auto i : p.members()) a.push_back(names.format(sp.ordering(i)));
  return a;
}

inline json axiom_json(const RuleTable& v, const CandidateSet& names, const AxiomReport& r) {
  json j{{"axiom", r.axiom}, {"epsilon", rational_json(r.epsilon)}};
  if (r.witness) {
    json profiles = json::array();
    for (auto p : r.witness->profiles) profiles.push_back(profile_json(v.space().profile(p), v.space(), names));
    json cands = json::array();
    for (auto c : r.witness->candidates) cands.push_back(names.name(c));
    j["witness"] = {{"kind", to_string(r.witness->kind)},
                    {"profiles", std::move(profiles)},
                    {"candidates", std::move(cands)},
                    {"replays", replay(v, *r.witness) == r.epsilon}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json instance_json(const ManipulationInstance& inst, const ProfileSpace& sp, const CandidateSet& names) {
  return {{"truthful", names.format(sp.ordering(inst.truthful))},
          {"misreport", names.format(sp.ordering(inst.misreport))},
          {"upper_set_size", inst.k}};
}

inline json verdict_json(const RuleTable& v, const CandidateSet& names, const SPVerdict& s, bool classic) {
  json j{{"mode", classic ? "classic" : "iid-beliefs"},
         {"status", to_string(s.status)},
         {"instances", s.instances}};
  if (!classic && s.status != SPStatus::kRefuted) j["polya_degree"] = s.polya_degree;
  if (s.refutation) {
    const auto& r = *s.refutation;
    json w{{"instance", instance_json(r.instance, v.space(), names)},
           {"utility", rationals_json(r.utility)},
           {"gain", rational_json(r.gain)}};
    if (r.others) {
      json others = json::array();
      for (auto i : r.others->members()) others.push_back(names.format(v.space().ordering(i)));
      w["others"] = std::move(others);
    } else {
      json belief = json::object();
      for (std::size_t i = 0; i < r.belief.size(); ++i)
        if (r.belief[i] != 0) belief[names.format(v.space().ordering(i))] = to_string(r.belief[i]);
      w["belief"] = std::move(belief);
      w["belief_full_support"] = r.belief_full_support;
      if (!r.belief_full_support)
        w["note"] = "witness belief is not full-support; verdicts restricted to full-support beliefs may differ";
    }
    j["witness"] = std::move(w);
  }
  if (!s.uncertified.empty()) {
    json u = json::array();
    for (const auto& inst : s.uncertified) u.push_back(instance_json(inst, v.space(), names));
    j["uncertified"] = std::move(u);
  }
  return j;
}

inline json traced_constant_json(const TracedConstant& t) {
  return {{"constant", rational_json(t.value)}, {"transcript", t.transcript}};
}

inline json max_distance_json(const MaxDistanceResult& r, const CandidateSet& names) {
  const auto& sp = *r.polytope.space;
  json objectives = json::array();
  for (const auto& o : r.objectives)
    objectives.push_back({{"profile", profile_json(sp.profile(o.profile), sp, names)},
                          {"candidate", names.name(o.candidate)},
                          {"sign", o.sign},
                          {"status", to_string(o.status)},
                          {"value", to_string(o.value)}});
  json j{{"d_star", rational_json(r.d_star)},
         {"eps", rational_json(r.polytope.eps)},
         {"parts", r.polytope.parts.to_string()},
         {"constraints",
          {{"normalization", r.polytope.normalization_rows},
           {"responsive", r.polytope.responsive_rows},
           {"isolated", r.polytope.isolation_rows},
           {"unanimity", r.polytope.unanimity_rows}}},
         {"variables", r.polytope.lp.num_vars},
         {"equality_rank", r.equality_rank},
         {"hull_dimension", r.hull_dimension},
         {"pivots", r.total_pivots},
         {"objectives", std::move(objectives)}};
  if (r.witness) {
    j["witness"] = {{"profile", profile_json(sp.profile(r.witness_profile), sp, names)},
                    {"candidate", names.name(r.witness_candidate)},
                    {"sign", r.witness_sign},
                    {"rule", rule_to_json(*r.witness, names)}};
  }
  return j;
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Temp file + rename so readers never see a partial report.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace iidsp
