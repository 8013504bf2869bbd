/*
 * Copyright 2026 The HSA Lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hsa/cli.h"

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "hsa/bounds.h"
#include "hsa/error.h"
#include "hsa/rng.h"
#include "hsa/verify.h"

namespace hsa {

namespace {

std::string Str(const Rational& r) { return FormatRational(r); }

RunConfig LoadConfig(const CliOptions& o) {
  if (o.config_path.empty()) {
    throw Error(ErrorCode::kParseError, "--config is required");
  }
  RunConfig c = ConfigFromJson(ReadJsonFile(o.config_path));
  if (o.all_sizes) c.all_sizes = true;
  if (c.relay_budget == 0) {
    throw Error(ErrorCode::kInvalidArgument, "security.T_h must be at least 1");
  }
  gf::Field check(c.field_q);
  (void)check;
  return c;
}

Scheme LoadScheme(const CliOptions& o, const RunConfig& c) {
  if (o.scheme_path.empty()) {
    throw Error(ErrorCode::kParseError, "--scheme is required");
  }
  Scheme s = SchemeFromJson(ReadJsonFile(o.scheme_path));
  if (!(s.topology == BuildTopology(c.topology))) {
    throw Error(ErrorCode::kParseError,
                "scheme topology does not match the config");
  }
  if (s.field.q() != c.field_q) {
    throw Error(ErrorCode::kParseError, "scheme field does not match config");
  }
  return s;
}

// Writes to path, or to out when path is empty.
void Emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    WriteJsonFile(path, j);
  }
}

int ExitCodeFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kConstructionFailed:
    case ErrorCode::kProtocolViolation:
      return kExitFailure;
    default:
      return kExitConfig;
  }
}

template <typename Fn>
int Guard(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

bool IsTwoRegularCyclic(const Topology& t) {
  return t.N() == t.K() && t.n() == 2 && t.N() >= 3 &&
         t == Topology::Cyclic(t.K(), 2);
}

bool AllSizes(const RunConfig& c, const Topology& t) {
  if (c.all_sizes) return *c.all_sizes;
  return t.N() <= 6 && t.K() <= 6;
}

std::string Compare(const Rational& achieved,
                    const std::optional<Rational>& lower) {
  if (!lower) return "no known bound";
  if (achieved == *lower) return "optimal";
  if (achieved > *lower) return "achievable, not tight";
  return "violation";
}

Json PatternJson(const CollusionPattern& p) {
  return Json{{"relays", p.relays}, {"users", p.users}};
}

}  // namespace

Scheme BuildFromConfig(const RunConfig& c) {
  gf::Field f(c.field_q);
  Topology t = BuildTopology(c.topology);
  if (c.scheme == "A") {
    if (c.injected_D) {
      return BuildSchemeA(t, f, gf::Matrix::FromRows(f, *c.injected_D));
    }
    return BuildSchemeA(t, f, c.seed);
  }
  if (c.scheme == "B") {
    return BuildSchemeB(t, f, c.scheme_user_budget, c.seed);
  }
  if (!IsTwoRegularCyclic(t)) {
    throw Error(ErrorCode::kInvalidTopology,
                "scheme C needs a cyclic network with N = K and n = 2");
  }
  return BuildSchemeC(t.N(), f);
}

Json BoundsFragment(const RunConfig& c) {
  Topology t = BuildTopology(c.topology);
  BoundsReport b = Bounds(t, c.relay_budget, c.user_budget);
  Json j{{"verdict", VerdictName(b.feasible)},
         {"witness", WitnessName(b.witness)},
         {"comm_lower", {Str(b.comm_lower_x), Str(b.comm_lower_y)}}};
  if (b.key) {
    j["rz_lower"] = Str(b.key->rz);
    j["rzsigma_lower"] = b.key->rzsigma ? Json(Str(*b.key->rzsigma))
                                        : Json("unknown");
    j["special_case"] =
        b.key->special_case ? Json(*b.key->special_case) : Json(nullptr);
  } else {
    j["rz_lower"] = nullptr;
    j["rzsigma_lower"] = nullptr;
    j["special_case"] = nullptr;
  }
  if (IsTwoRegularCyclic(t) && c.relay_budget == 1) {
    KeyRegion r = OptimalKeyRegion(t.N(), c.user_budget);
    j["optimal_key_region"] =
        r.exists ? Json{{"exists", true}, {"rz", Str(r.rz)},
                        {"rzsigma", Str(r.rzsigma)}}
                 : Json{{"exists", false}};
  }
  std::optional<ReferenceRegion> ref;
  if (c.topology.kind == "tree") {
    ref = TreeRegion(c.topology.groups, c.topology.group_size, c.user_budget);
  } else if (c.topology.kind == "cyclic") {
    ref = CyclicRegion(c.topology.K, c.topology.n);
  }
  if (ref) {
    Json terms = Json::array();
    for (const auto& term : ref->terms) {
      terms.push_back({{"term", term.name},
                       {"bound", Str(term.bound)},
                       {"server_security", term.server_security}});
    }
    j["reference_region"] = {{"kind", ref->kind},
                             {"empty", ref->empty},
                             {"terms", terms}};
    if (ref->empty) {
      j["reference_region"]["notice"] =
          "empty region: no scheme exists for this collusion level";
    }
  }
  return j;
}

ReportResult MakeReport(const RunConfig& c, const Scheme& s) {
  auto start = std::chrono::steady_clock::now();
  const Topology& t = s.topology;
  ReportResult result;
  Json& r = result.report;
  r["schema"] = kReportSchema;
  r["config"] = ConfigToJson(c);
  Json bounds = BoundsFragment(c);
  r["bounds"] = bounds;
  bool feasible = bounds["verdict"] == "feasible";

  RateTuple rates = Rates(s);
  r["scheme"] = {{"variant", VariantName(s.variant)},
                 {"construction", s.construction},
                 {"attempts", s.attempts}};
  r["achieved"] = {{"R_X", Str(rates.r_x)},
                   {"R_Y", Str(rates.r_y)},
                   {"R_Z", Str(rates.r_z)},
                   {"R_ZSigma", Str(rates.r_zsigma)}};

  bool violation = false;
  Json table = Json::array();
  if (feasible) {
    BoundsReport b = Bounds(t, c.relay_budget, c.user_budget);
    auto row = [&](const char* name, const Rational& achieved,
                   const std::optional<Rational>& lower) {
      std::string status = Compare(achieved, lower);
      if (status == "violation") violation = true;
      table.push_back({{"quantity", name},
                       {"achieved", Str(achieved)},
                       {"lower", lower ? Json(Str(*lower)) : Json("unknown")},
                       {"status", status}});
    };
    row("R_X", rates.r_x, b.comm_lower_x);
    row("R_Y", rates.r_y, b.comm_lower_y);
    row("R_Z", rates.r_z, b.key->rz);
    row("R_ZSigma", rates.r_zsigma, b.key->rzsigma);
  }
  r["comparison"] = table;

  // Decodability.
  auto states = StateCount(s, c.block);
  bool exhaustive = states && *states <= c.enumeration_cap;
  DecodabilityResult dec = CheckDecodability(
      s, exhaustive ? DecodeMode::kExhaustive : DecodeMode::kSampled,
      c.decode_samples, c.block, c.seed, c.enumeration_cap);
  r["decodability"] = {{"mode", exhaustive ? "exhaustive" : "sampled"},
                       {"ok", dec.ok},
                       {"certificate", dec.certificate},
                       {"simulation", dec.simulation},
                       {"rounds", dec.rounds},
                       {"mismatches", dec.mismatches}};

  // Security.
  SweepOptions opts;
  opts.all_sizes = AllSizes(c, t);
  opts.budget = c.sweep_budget;
  opts.seed = c.seed;
  opts.use_oracle = true;
  opts.enumeration_cap = c.enumeration_cap;
  std::size_t relay_budget = std::min(c.relay_budget, t.K());
  std::size_t user_budget = std::min(c.user_budget, t.N());
  SweepReport sweep = SweepSecurity(s, relay_budget, user_budget, opts);
  std::string oracle = sweep.oracle_skipped_cap
                           ? "skipped (cap)"
                           : (sweep.oracle_disagreements == 0 ? "agrees"
                                                              : "disagrees");
  Json sec{{"T_h", c.relay_budget},
           {"T_u", c.user_budget},
           {"all_sizes", opts.all_sizes},
           {"total_patterns", sweep.total_patterns},
           {"checked", sweep.checked},
           {"passed", sweep.passed},
           {"failed", sweep.failed},
           {"subsampled", sweep.subsampled},
           {"oracle", oracle},
           {"counterexample", sweep.counterexample
                                  ? PatternJson(*sweep.counterexample)
                                  : Json(nullptr)}};
  bool intersection_sound = true;
  if (s.variant == Variant::kA) {
    std::uint64_t checked = 0, held = 0, unsound = 0;
    for (const auto& p : EnumeratePatterns(t.K(), t.N(), relay_budget,
                                           user_budget, false)) {
      if (checked >= c.sweep_budget) break;
      ++checked;
      if (CheckTrivialIntersection(s, p)) {
        ++held;
        if (!CheckSecurityRank(s, p)) ++unsound;
      }
    }
    intersection_sound = unsound == 0;
    sec["trivial_intersection"] = {{"checked", checked},
                                   {"held", held},
                                   {"held_but_insecure", unsound}};
  }
  r["security"] = sec;

  if (t.N() == 3 && t.K() == 3 && t.n() == 2) {
    try {
      ConverseChecks conv = RunConverseChecks(s, c.block, c.enumeration_cap);
      r["converse"] = {{"link_keys_determined", conv.link_keys_determined},
                       {"key_entropy_sum", conv.key_entropy_sum},
                       {"input_length", conv.input_length},
                       {"sum_at_least_3L", conv.sum_bound},
                       {"sum_equals_3L", conv.sum_tight}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLargeToEnumerate) throw;
      r["converse"] = "skipped (cap)";
    }
  }

  result.pass = dec.ok && sweep.all_pass() && !violation && intersection_sound;
  r["pass"] = result.pass;
  if (violation) r["defect"] = "achieved rate below a lower bound";
  auto ms = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
  r["timing"] = {{"total_ms", ms}};
  return result;
}

int CmdBounds(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    RunConfig c = LoadConfig(o);
    Json j{{"schema", kReportSchema},
           {"config", ConfigToJson(c)},
           {"bounds", BoundsFragment(c)}};
    Emit(j, o.out_path, out);
    bool feasible = j["bounds"]["verdict"] == "feasible";
    if (!feasible) err << "parameters are infeasible\n";
    return o.expect_feasible && !feasible ? kExitFailure : kExitOk;
  });
}

int CmdBuild(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    RunConfig c = LoadConfig(o);
    Scheme s = BuildFromConfig(c);
    Emit(SchemeToJson(s), o.out_path.empty() ? c.out_scheme : o.out_path, out);
    return kExitOk;
  });
}

int CmdVerify(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    RunConfig c = LoadConfig(o);
    Scheme s = LoadScheme(o, c);
    ReportResult rr = MakeReport(c, s);
    Emit(rr.report, o.out_path.empty() ? c.out_report : o.out_path, out);
    return rr.pass ? kExitOk : kExitFailure;
  });
}

int CmdSimulate(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    RunConfig c = LoadConfig(o);
    Scheme s = LoadScheme(o, c);
    Rng rng(c.seed);
    std::vector<gf::Matrix> inputs;
    for (std::size_t i = 0; i < s.topology.N(); ++i) {
      gf::Matrix w(s.field, s.topology.n(), c.block);
      for (std::size_t p = 0; p < w.rows(); ++p) {
        for (std::size_t b = 0; b < c.block; ++b) {
          w(p, b) = static_cast<gf::Residue>(rng.Below(s.field.q()));
        }
      }
      inputs.push_back(std::move(w));
    }
    Transcript tr = RunRound(s, std::move(inputs), c.block, c.seed + 1);
    Emit(TranscriptToJson(s, tr),
         o.out_path.empty() ? c.out_transcript : o.out_path, out);
    err << "decoded " << MatrixToJson(tr.decoded).dump() << " direct sum "
        << MatrixToJson(tr.direct_sum).dump()
        << (tr.mismatch ? " MISMATCH" : " match") << "\n";
    return tr.mismatch ? kExitFailure : kExitOk;
  });
}

int CmdReport(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    RunConfig c = LoadConfig(o);
    Scheme s = BuildFromConfig(c);
    if (!c.out_scheme.empty()) WriteJsonFile(c.out_scheme, SchemeToJson(s));
    ReportResult rr = MakeReport(c, s);
    Emit(rr.report, o.out_path.empty() ? c.out_report : o.out_path, out);
    return rr.pass ? kExitOk : kExitFailure;
  });
}

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical secure aggregation lab"};
  app.require_subcommand(1);
  CliOptions o;
  auto add_common = [&](CLI::App* cmd, bool needs_scheme) {
    cmd->add_option("--config", o.config_path, "Run config (JSON)")
        ->required();
    if (needs_scheme) {
      cmd->add_option("--scheme", o.scheme_path, "Scheme file (JSON)")
          ->required();
    }
    cmd->add_option("--out", o.out_path, "Output path (default: stdout)");
    cmd->add_flag("--all-sizes", o.all_sizes,
                  "Sweep every coalition size, not only the largest");
  };
  CLI::App* bounds = app.add_subcommand("bounds", "Feasibility and bounds");
  add_common(bounds, false);
  bounds->add_flag("--expect-feasible", o.expect_feasible,
                   "Exit 1 when the parameters are infeasible");
  CLI::App* build = app.add_subcommand("build", "Construct a scheme");
  add_common(build, false);
  CLI::App* verify = app.add_subcommand("verify", "Verify a scheme file");
  add_common(verify, true);
  CLI::App* simulate = app.add_subcommand("simulate", "Run one round");
  add_common(simulate, true);
  CLI::App* report = app.add_subcommand("report", "Build and verify");
  add_common(report, false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }
  if (*bounds) return CmdBounds(o, out, err);
  if (*build) return CmdBuild(o, out, err);
  if (*verify) return CmdVerify(o, out, err);
  if (*simulate) return CmdSimulate(o, out, err);
  return CmdReport(o, out, err);
}

}  // namespace hsa
