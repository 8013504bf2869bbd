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

// JSON documents for configs, schemes, transcripts and reports. Every
// document carries a "schema" tag of the form hsa-lab/<kind>/v1.

#ifndef HSA_SERIALIZE_H_
#define HSA_SERIALIZE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "hsa/gf.h"
#include "hsa/protocol.h"
#include "hsa/schemes.h"
#include "hsa/topology.h"

namespace hsa {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "hsa-lab/config/v1";
inline constexpr const char* kSchemeSchema = "hsa-lab/scheme/v1";
inline constexpr const char* kTranscriptSchema = "hsa-lab/transcript/v1";
inline constexpr const char* kReportSchema = "hsa-lab/report/v1";

// How the topology was described in the config.
struct TopologySpec {
  std::string kind;  // explicit | cyclic | multiple_cyclic | tree
  std::size_t N = 0, K = 0, n = 0, copies = 1, groups = 0, group_size = 0;
  std::vector<std::vector<std::size_t>> user_links;
};

struct RunConfig {
  TopologySpec topology;
  std::uint64_t field_q = 0;
  std::string scheme;  // A | B | C
  std::size_t scheme_user_budget = 0;  // T_u used to build B
  std::optional<std::vector<std::vector<std::int64_t>>> injected_D;
  std::size_t relay_budget = 1;  // T_h
  std::size_t user_budget = 0;   // T_u
  std::size_t block = 1;
  std::uint64_t seed = 1;
  std::uint64_t enumeration_cap = 1'000'000;
  std::uint64_t sweep_budget = 100'000;
  std::uint64_t decode_samples = 10'000;
  std::optional<bool> all_sizes;  // unset: on when N, K <= 6
  std::string out_scheme, out_report, out_transcript;
};

gf::Matrix MatrixFromJson(const gf::Field& f, const Json& j);
Json MatrixToJson(const gf::Matrix& m);

Topology BuildTopology(const TopologySpec& spec);
Json TopologyToJson(const Topology& t);
Topology TopologyFromJson(const Json& j);

// Throws ParseError on missing or malformed fields.
RunConfig ConfigFromJson(const Json& j);
Json ConfigToJson(const RunConfig& c);

Json SchemeToJson(const Scheme& s);
Scheme SchemeFromJson(const Json& j);

Json TranscriptToJson(const Scheme& s, const Transcript& t);

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);

}  // namespace hsa

#endif  // HSA_SERIALIZE_H_
