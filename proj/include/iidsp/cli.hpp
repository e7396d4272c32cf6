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

// Command-line front end: gen | check | sp-check | lp-max | verify-theorem.
// Exit codes: 0 success, 1 theorem check FAIL, 2 input validation error,
// 3 resource cap exceeded.

#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "iidsp/report.hpp"

namespace iidsp {

enum ExitCode : int { kExitOk = 0, kExitTheoremFail = 1, kExitInvalid = 2, kExitResource = 3 };

namespace detail {

struct RunContext {
  std::vector<std::string> args;
  std::uint64_t seed = 42;
  json inputs = json::array();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  NamedRule load_rule(const std::string& path) {
    std::string bytes = read_file(path);
    inputs.push_back({{"path", path}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
    json j;
    try {
      j = json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
    return rule_from_json(j);
  }

  json report(json results) const {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {{"tool", "iidsp"},
            {"version", kToolVersion},
            {"command", args},
            {"seed", seed},
            {"inputs", inputs},
            {"results", std::move(results)},
            {"wall_clock_seconds", secs}};
  }
};

inline void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty() || out_path == "-")
    out << text;
  else
    write_file_atomic(out_path, text);
}

inline RuleTable generate(const std::string& kind, int m, int n, const Rational& delta, std::uint64_t seed) {
  auto space = ProfileSpace::make(m, n);
  if (kind == "random-dictatorship") return random_dictatorship(space);
  if (kind == "uniform") return uniform_rule(space);
  if (kind == "plurality-tiebreak") return plurality_uniform_tiebreak(space);
  if (kind == "perturbed") return perturb(random_dictatorship(space), delta, seed);
  throw std::invalid_argument("unknown rule kind '" + kind + "'");
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checkers for strategy-proofness of anonymous randomized voting rules", "iidsp"};
  app.require_subcommand(1);
  detail::RunContext ctx;
  for (std::size_t i = 1; i < argv.size(); ++i) ctx.args.push_back(argv[i]);

  std::string out_path;
  std::string rule_path;

  auto* gen = app.add_subcommand("gen", "Write a built-in rule as a rule file");
  std::string kind, delta_text = "1/20";
  int gm = 0, gn = 0;
  gen->add_option("kind", kind, "random-dictatorship | uniform | plurality-tiebreak | perturbed")->required();
  gen->add_option("m", gm, "number of candidates")->required();
  gen->add_option("n", gn, "number of voters")->required();
  gen->add_option("--delta", delta_text, "perturbation weight (perturbed)");
  gen->add_option("--seed", ctx.seed, "noise seed (perturbed)");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "Minimal-eps axiom and deviation report");
  std::string axiom = "all";
  check->add_option("--rule", rule_path, "rule file")->required();
  check->add_option("--axiom", axiom, "axiom name or 'all'");
  check->add_option("--seed", ctx.seed, "recorded in the report");
  check->add_option("--out", out_path, "report file (default stdout)");

  auto* sp = app.add_subcommand("sp-check", "Strategy-proofness w.r.t. all i.i.d. beliefs (or classic)");
  bool classic = false;
  SPConfig cfg;
  sp->add_option("--rule", rule_path, "rule file")->required();
  sp->add_flag("--classic", classic, "belief-free strategy-proofness");
  sp->add_option("--polya-max", cfg.polya_max, "largest Polya degree tried");
  sp->add_option("--trials", cfg.trials, "random beliefs per instance");
  sp->add_option("--seed", ctx.seed, "sampling seed");
  sp->add_option("--out", out_path, "report file (default stdout)");

  auto* lp = app.add_subcommand("lp-max", "Exact max distance to random dictatorship over the polytope");
  int lm = 3, ln = 3;
  std::string eps_text = "1/10", parts_text = "responsive,isolated,unanimity";
  lp->add_option("--m", lm, "number of candidates");
  lp->add_option("--n", ln, "number of voters");
  lp->add_option("--eps", eps_text, "unanimity slack (p/q)");
  lp->add_option("--parts", parts_text, "comma list of responsive,isolated,unanimity");
  lp->add_option("--seed", ctx.seed, "recorded in the report");
  lp->add_option("--out", out_path, "report file (default stdout)");

  auto* thm = app.add_subcommand("verify-theorem", "Check D* <= C(m) eps and print PASS/FAIL");
  int tm = 3, tn = 3;
  std::string teps = "1/10";
  thm->add_option("m", tm, "number of candidates")->required();
  thm->add_option("n", tn, "number of voters")->required();
  thm->add_option("eps", teps, "unanimity slack (p/q)")->required();
  thm->add_option("--seed", ctx.seed, "recorded in the report");
  thm->add_option("--out", out_path, "report file (default stdout)");

  try {
    std::vector<std::string> rev(argv.rbegin(), argv.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (gen->parsed()) {
      auto rule = detail::generate(kind, gm, gn, parse_rational(delta_text), ctx.seed);
      detail::emit(out_path, dump(rule_to_json(rule, CandidateSet::default_names(gm))), out);
      return kExitOk;
    }
    if (check->parsed()) {
      auto named = ctx.load_rule(rule_path);
      const auto& v = named.rule;
      json reports = json::array();
      std::vector<std::string> names;
      if (axiom == "all") {
        for (const auto& a : axiom_names()) {
          if (v.m() < 2 && (a == "candidate-anonymity" || a == "sliding-window" || a == "vprime-spread")) continue;
          if (a == "vprime-spread" && v.m() > 4) continue;
          names.push_back(a);
        }
      } else {
        names.push_back(axiom);
      }
      for (const auto& a : names)
        for (const auto& r : run_axiom(v, a)) reports.push_back(axiom_json(v, named.candidates, r));
      json results{{"m", v.m()}, {"n", v.n()}, {"reports", std::move(reports)}};
      detail::emit(out_path, dump(ctx.report(std::move(results))), out);
      return kExitOk;
    }
    if (sp->parsed()) {
      auto named = ctx.load_rule(rule_path);
      cfg.seed = ctx.seed;
      SPVerdict verdict = classic ? check_classic_sp(named.rule) : check_weak_sp(named.rule, cfg);
      json results = verdict_json(named.rule, named.candidates, verdict, classic);
      if (!classic) results["config"] = {{"polya_max", cfg.polya_max}, {"trials", cfg.trials}};
      detail::emit(out_path, dump(ctx.report(std::move(results))), out);
      return kExitOk;
    }
    if (lp->parsed()) {
      auto parts = PolytopeParts::parse(parts_text);
      auto result = max_distance(lm, ln, parse_rational(eps_text), parts);
      json results = max_distance_json(result, CandidateSet::default_names(lm));
      if (lm >= 3) results["traced_constant"] = traced_constant_json(traced_constant(lm));
      detail::emit(out_path, dump(ctx.report(std::move(results))), out);
      return kExitOk;
    }
    if (thm->parsed()) {
      auto check_result = verify_theorem(tm, tn, parse_rational(teps));
      json results{{"m", tm}, {"n", tn}, {"eps", rational_json(parse_rational(teps))},
                   {"status", to_string(check_result.status)}, {"reason", check_result.reason}};
      if (check_result.constant) {
        results["traced_constant"] = traced_constant_json(*check_result.constant);
        results["bound"] = rational_json(check_result.bound);
      }
      if (check_result.lp) results["d_star"] = rational_json(check_result.lp->d_star);
      detail::emit(out_path, dump(ctx.report(std::move(results))), out);
      err << to_string(check_result.status) << ": " << check_result.reason << "\n";
      return check_result.status == TheoremStatus::kFail ? kExitTheoremFail : kExitOk;
    }
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const FormatError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace iidsp
