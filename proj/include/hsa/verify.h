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

// Decodability and (0, T_h, T_u)-security certificates.
//
// Two independent routes: rank identities on the linear view, and a brute
// force oracle that enumerates every input and seed assignment, runs the real
// protocol and tabulates exact joint counts.

#ifndef HSA_VERIFY_H_
#define HSA_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsa/gf.h"
#include "hsa/schemes.h"

namespace hsa {

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

// A coalition of relays and users, both 1-based and sorted.
struct CollusionPattern {
  std::vector<std::size_t> relays;
  std::vector<std::size_t> users;

  friend bool operator==(const CollusionPattern&,
                         const CollusionPattern&) = default;
};

std::string DescribePattern(const CollusionPattern& p);
// Throws InvalidArgument on out-of-range or repeated ids.
void ValidatePattern(const Scheme& s, const CollusionPattern& p);

// The colluding relays' received messages as linear forms in the seed vector
// (W coordinates user-major, then the key seeds).
struct LinearView {
  gf::Matrix c_w;  // rows x N n
  gf::Matrix c_r;  // rows x seed_count
  std::vector<std::pair<std::size_t, std::size_t>> row_labels;  // (i, j)
};
LinearView AdversaryView(const Scheme& s, const CollusionPattern& p);

// Coefficients over the full seed vector of the colluding users' own inputs
// and keys.
gf::Matrix CollusionSideInfo(const Scheme& s, const CollusionPattern& p,
                             bool all_inputs);

// I(W_[N]; view | W_Tu, Z_Tu) in log_q units per block column, from ranks.
std::size_t SecurityRankDeficit(const Scheme& s, const CollusionPattern& p);
bool CheckSecurityRank(const Scheme& s, const CollusionPattern& p);

// Link-key incidence of the colluding relays restricted to the free users,
// and the matching blocks (D_i : i free). Only for variant A.
struct IntersectionMatrices {
  gf::Matrix M;
  gf::Matrix DZ;
};
IntersectionMatrices BuildIntersectionMatrices(const Scheme& s, const CollusionPattern& p);
// True iff the two row spaces intersect trivially.
bool CheckTrivialIntersection(const Scheme& s, const CollusionPattern& p);

struct OracleResult {
  bool is_zero = false;
  double mi_value = 0.0;  // log_q units
  // Set when every conditional law is uniform on its support, which makes
  // the value log_q of an integer ratio; holds for linear schemes.
  std::optional<std::int64_t> mi_integer;
};

// q^((N n + seed_count) l), or nullopt on overflow.
std::optional<std::uint64_t> StateCount(const Scheme& s, std::size_t block);

// Throws TooLargeToEnumerate above the cap. One pass over the state space
// serves every pattern.
std::vector<OracleResult> MiOracle(const Scheme& s,
                                   const std::vector<CollusionPattern>& patterns,
                                   std::size_t block = 1,
                                   std::uint64_t cap = kDefaultEnumerationCap);
OracleResult MiOracle(const Scheme& s, const CollusionPattern& p,
                      std::size_t block = 1,
                      std::uint64_t cap = kDefaultEnumerationCap);

enum class DecodeMode { kExhaustive, kSampled };

struct DecodabilityResult {
  bool ok = false;
  bool certificate = false;    // local inverses and key cancellation
  bool simulation = false;     // every simulated round decoded the sum
  std::uint64_t rounds = 0;
  std::uint64_t mismatches = 0;
};
DecodabilityResult CheckDecodability(const Scheme& s, DecodeMode mode,
                                     std::uint64_t samples = 10'000,
                                     std::size_t block = 1,
                                     std::uint64_t seed = 1,
                                     std::uint64_t cap = kDefaultEnumerationCap);

// All (relays, users) with |relays| = T_h, |users| = T_u, or every size up to
// those when all_sizes is set. Relays nonempty.
std::vector<CollusionPattern> EnumeratePatterns(std::size_t num_relays,
                                                std::size_t num_users,
                                                std::size_t relay_budget,
                                                std::size_t user_budget,
                                                bool all_sizes);

struct SweepOptions {
  bool all_sizes = false;
  std::uint64_t budget = 100'000;  // patterns checked before subsampling
  std::uint64_t seed = 1;
  bool use_oracle = false;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t threads = 0;  // 0: HSA_LAB_THREADS or hardware concurrency
};

struct SweepReport {
  std::uint64_t total_patterns = 0;
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  bool subsampled = false;
  bool oracle_run = false;
  bool oracle_skipped_cap = false;
  std::uint64_t oracle_disagreements = 0;
  std::optional<CollusionPattern> counterexample;
  bool all_pass() const { return failed == 0 && oracle_disagreements == 0; }
};
SweepReport SweepSecurity(const Scheme& s, std::size_t relay_budget,
                          std::size_t user_budget, const SweepOptions& opts);

// Worker count for sweeps: HSA_LAB_THREADS if set and positive, else the
// hardware concurrency (at least 1).
std::size_t WorkerCount(std::size_t requested = 0);

// Enumerates x uniform over F_q^s and returns H(A x | B x) in log_q units
// from the empirical joint counts.
double EnumeratedConditionalEntropy(const gf::Matrix& A, const gf::Matrix& B,
                                    std::uint64_t cap = kDefaultEnumerationCap);

// Entropies of key subsets, by enumerating the seeds. Keys are named by
// link (user, relay); per-user keys of a B-Lambda scheme are named (user, 0).
using KeyName = std::pair<std::size_t, std::size_t>;
double KeyEntropy(const Scheme& s, const std::vector<KeyName>& target,
                  const std::vector<KeyName>& given, std::size_t block = 1,
                  std::uint64_t cap = kDefaultEnumerationCap);

struct ConverseChecks {
  bool link_keys_determined = false;  // H(Z_{i,j} | Z_others) = 0 for all
  double key_entropy_sum = 0.0;       // sum_i H(Z_i), symbols
  double input_length = 0.0;          // L = n l, symbols
  bool sum_bound = false;             // key_entropy_sum >= 3 L
  bool sum_tight = false;             // key_entropy_sum == 3 L
};
// Three-user cyclic checks at optimal load. Requires N = 3.
ConverseChecks RunConverseChecks(const Scheme& s, std::size_t block = 1,
                                 std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace hsa

#endif  // HSA_VERIFY_H_
