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

#include "hsa/serialize.h"

#include <fstream>
#include <sstream>

#include "hsa/error.h"

namespace hsa {

namespace {

[[noreturn]] void Bad(const std::string& msg) {
  throw Error(ErrorCode::kParseError, msg);
}

const Json& Need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    Bad(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

template <typename T>
T Get(const Json& j, const char* key) {
  const Json& v = Need(j, key);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    Bad(std::string("field \"") + key + "\" has the wrong type");
  }
}

template <typename T>
T GetOr(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? Get<T>(j, key) : fallback;
}

void CheckSchema(const Json& j, const char* expected) {
  std::string got = Get<std::string>(j, "schema");
  if (got != expected) {
    Bad("schema \"" + got + "\" where \"" + expected + "\" was expected");
  }
}

}  // namespace

Json MatrixToJson(const gf::Matrix& m) {
  Json rows = Json::array();
  for (const auto& r : m.to_rows()) rows.push_back(r);
  return rows;
}

gf::Matrix MatrixFromJson(const gf::Field& f, const Json& j) {
  if (!j.is_array()) Bad("matrix must be an array of rows");
  std::vector<std::vector<std::int64_t>> rows;
  try {
    rows = j.get<std::vector<std::vector<std::int64_t>>>();
  } catch (const nlohmann::json::exception&) {
    Bad("matrix entries must be integers");
  }
  for (const auto& r : rows) {
    for (std::int64_t v : r) {
      if (v < 0 || static_cast<std::uint64_t>(v) >= f.q()) {
        Bad("matrix entry " + std::to_string(v) + " outside [0, q)");
      }
    }
  }
  return gf::Matrix::FromRows(f, rows);
}

Topology BuildTopology(const TopologySpec& spec) {
  if (spec.kind == "explicit") {
    return Topology::BuildExplicit(spec.N, spec.K, spec.user_links);
  }
  if (spec.kind == "cyclic") return Topology::Cyclic(spec.K, spec.n);
  if (spec.kind == "multiple_cyclic") {
    return Topology::MultipleCyclic(spec.K, spec.n, spec.copies);
  }
  if (spec.kind == "tree") return Topology::Tree(spec.groups, spec.group_size);
  Bad("unknown topology kind \"" + spec.kind + "\"");
}

Json TopologyToJson(const Topology& t) {
  return Json{{"N", t.N()}, {"K", t.K()}, {"n", t.n()},
              {"user_links", t.user_links()}};
}

Topology TopologyFromJson(const Json& j) {
  return Topology::BuildExplicit(
      Get<std::size_t>(j, "N"), Get<std::size_t>(j, "K"),
      Get<std::vector<std::vector<std::size_t>>>(j, "user_links"));
}

RunConfig ConfigFromJson(const Json& j) {
  CheckSchema(j, kConfigSchema);
  RunConfig c;
  const Json& topo = Need(j, "topology");
  c.topology.kind = Get<std::string>(topo, "kind");
  if (c.topology.kind == "explicit") {
    c.topology.N = Get<std::size_t>(topo, "N");
    c.topology.K = Get<std::size_t>(topo, "K");
    c.topology.user_links =
        Get<std::vector<std::vector<std::size_t>>>(topo, "user_links");
  } else if (c.topology.kind == "cyclic") {
    c.topology.K = Get<std::size_t>(topo, "K");
    c.topology.n = Get<std::size_t>(topo, "n");
  } else if (c.topology.kind == "multiple_cyclic") {
    c.topology.K = Get<std::size_t>(topo, "K");
    c.topology.n = Get<std::size_t>(topo, "n");
    c.topology.copies = Get<std::size_t>(topo, "t");
  } else if (c.topology.kind == "tree") {
    c.topology.groups = Get<std::size_t>(topo, "U");
    c.topology.group_size = Get<std::size_t>(topo, "V");
  } else {
    Bad("unknown topology kind \"" + c.topology.kind + "\"");
  }
  c.field_q = Get<std::uint64_t>(j, "field_q");
  const Json& sec = Need(j, "security");
  c.relay_budget = Get<std::size_t>(sec, "T_h");
  c.user_budget = Get<std::size_t>(sec, "T_u");
  const Json& scheme = Need(j, "scheme");
  c.scheme = Get<std::string>(scheme, "variant");
  if (c.scheme != "A" && c.scheme != "B" && c.scheme != "C") {
    Bad("scheme variant must be A, B or C");
  }
  c.scheme_user_budget = GetOr<std::size_t>(scheme, "T_u", c.user_budget);
  if (scheme.contains("D")) {
    c.injected_D = Get<std::vector<std::vector<std::int64_t>>>(scheme, "D");
  }
  c.block = GetOr<std::size_t>(j, "block", 1);
  if (c.block == 0) Bad("block must be positive");
  c.seed = GetOr<std::uint64_t>(j, "seed", 1);
  if (j.contains("caps")) {
    const Json& caps = j.at("caps");
    c.enumeration_cap = GetOr(caps, "enumeration", c.enumeration_cap);
    c.sweep_budget = GetOr(caps, "sweep_budget", c.sweep_budget);
    c.decode_samples = GetOr(caps, "decode_samples", c.decode_samples);
  }
  if (j.contains("all_sizes") && !j.at("all_sizes").is_null()) {
    c.all_sizes = Get<bool>(j, "all_sizes");
  }
  if (j.contains("outputs")) {
    const Json& out = j.at("outputs");
    c.out_scheme = GetOr<std::string>(out, "scheme", "");
    c.out_report = GetOr<std::string>(out, "report", "");
    c.out_transcript = GetOr<std::string>(out, "transcript", "");
  }
  return c;
}

Json ConfigToJson(const RunConfig& c) {
  Json topo{{"kind", c.topology.kind}};
  if (c.topology.kind == "explicit") {
    topo["N"] = c.topology.N;
    topo["K"] = c.topology.K;
    topo["user_links"] = c.topology.user_links;
  } else if (c.topology.kind == "tree") {
    topo["U"] = c.topology.groups;
    topo["V"] = c.topology.group_size;
  } else {
    topo["K"] = c.topology.K;
    topo["n"] = c.topology.n;
    if (c.topology.kind == "multiple_cyclic") topo["t"] = c.topology.copies;
  }
  Json scheme{{"variant", c.scheme}, {"T_u", c.scheme_user_budget}};
  if (c.injected_D) scheme["D"] = *c.injected_D;
  Json j{{"schema", kConfigSchema},
         {"topology", topo},
         {"field_q", c.field_q},
         {"scheme", scheme},
         {"security", {{"T_h", c.relay_budget}, {"T_u", c.user_budget}}},
         {"block", c.block},
         {"seed", c.seed},
         {"caps",
          {{"enumeration", c.enumeration_cap},
           {"sweep_budget", c.sweep_budget},
           {"decode_samples", c.decode_samples}}}};
  j["all_sizes"] = c.all_sizes ? Json(*c.all_sizes) : Json(nullptr);
  j["outputs"] = {{"scheme", c.out_scheme},
                  {"report", c.out_report},
                  {"transcript", c.out_transcript}};
  return j;
}

Json SchemeToJson(const Scheme& s) {
  Json e = Json::array();
  for (const auto& m : s.E) e.push_back(MatrixToJson(m));
  Json j{{"schema", kSchemeSchema},
         {"variant", VariantName(s.variant)},
         {"construction", s.construction},
         {"field_q", s.field.q()},
         {"topology", TopologyToJson(s.topology)},
         {"seed", s.seed},
         {"attempts", s.attempts},
         {"D", MatrixToJson(s.D)},
         {"E", e},
         {"seed_count", s.seed_count},
         {"key_map", MatrixToJson(s.key_map)}};
  if (s.variant == Variant::kBLambda) {
    j["T_u"] = s.user_budget;
    j["Lambda"] = MatrixToJson(*s.Lambda);
  }
  return j;
}

Scheme SchemeFromJson(const Json& j) {
  CheckSchema(j, kSchemeSchema);
  gf::Field f(Get<std::uint64_t>(j, "field_q"));
  Scheme s(TopologyFromJson(Need(j, "topology")), f);
  const Topology& t = s.topology;
  std::string variant = Get<std::string>(j, "variant");
  if (variant == "A") {
    s.variant = Variant::kA;
  } else if (variant == "BLambda") {
    s.variant = Variant::kBLambda;
  } else {
    Bad("unknown variant \"" + variant + "\"");
  }
  s.construction = Get<std::string>(j, "construction");
  s.seed = Get<std::uint64_t>(j, "seed");
  s.attempts = Get<std::size_t>(j, "attempts");
  s.D = MatrixFromJson(f, Need(j, "D"));
  if (s.D.rows() != t.n() || s.D.cols() != t.K()) Bad("D must be n x K");
  const Json& e = Need(j, "E");
  if (!e.is_array() || e.size() != t.N()) Bad("E must list one matrix per user");
  for (const auto& m : e) {
    s.E.push_back(MatrixFromJson(f, m));
    if (s.E.back().rows() != t.n() || s.E.back().cols() != t.n()) {
      Bad("every E_i must be n x n");
    }
  }
  s.seed_count = Get<std::size_t>(j, "seed_count");
  s.key_map = MatrixFromJson(f, Need(j, "key_map"));
  std::size_t keys = s.variant == Variant::kA ? t.N() * t.n() : t.N();
  if (s.key_map.rows() != s.seed_count || s.key_map.cols() != keys) {
    Bad("key_map must be seed_count x " + std::to_string(keys));
  }
  if (s.variant == Variant::kBLambda) {
    s.user_budget = Get<std::size_t>(j, "T_u");
    s.Lambda = MatrixFromJson(f, Need(j, "Lambda"));
    if (s.Lambda->rows() != t.N() || s.Lambda->cols() != t.K()) {
      Bad("Lambda must be N x K");
    }
  }
  return s;
}

Json TranscriptToJson(const Scheme& s, const Transcript& tr) {
  Json inputs = Json::array();
  for (const auto& w : tr.inputs) inputs.push_back(MatrixToJson(w));
  Json keys = Json::array();
  for (const auto& z : tr.keys.per_user) keys.push_back(MatrixToJson(z));
  Json x = Json::array();
  for (const auto& [link, msg] : tr.x_msgs) {
    x.push_back({{"user", link.first}, {"relay", link.second}, {"symbols", msg}});
  }
  Json y = Json::array();
  for (const auto& [relay, msg] : tr.y_msgs) {
    y.push_back({{"relay", relay}, {"symbols", msg}});
  }
  return Json{{"schema", kTranscriptSchema},
              {"field_q", s.field.q()},
              {"block", tr.keys.seeds.cols()},
              {"inputs", inputs},
              {"seeds", MatrixToJson(tr.keys.seeds)},
              {"user_keys", keys},
              {"x_msgs", x},
              {"y_msgs", y},
              {"decoded", MatrixToJson(tr.decoded)},
              {"direct_sum", MatrixToJson(tr.direct_sum)},
              {"mismatch", tr.mismatch}};
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Bad(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) Bad("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace hsa
