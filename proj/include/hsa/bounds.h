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

// Feasibility thresholds and rate lower bounds for secure aggregation on
// homogeneous three-layer networks, all in exact rationals.

#ifndef HSA_BOUNDS_H_
#define HSA_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "hsa/topology.h"

namespace hsa {

using Rational = boost::rational<std::int64_t>;

std::string FormatRational(const Rational& r);

struct RateTuple {
  Rational r_x;
  Rational r_y;
  Rational r_z;
  Rational r_zsigma;

  friend bool operator==(const RateTuple&, const RateTuple&) = default;
};

enum class Verdict { kFeasible, kInfeasible };

// Which result decided the verdict.
enum class Witness {
  kRelayThreshold,   // T_h >= K - n + 1
  kUserThreshold,    // T_u >= n(N, T_h)
  kKeyedNetworkCode  // achievable by the keyed network code construction
};

std::string_view VerdictName(Verdict v);
std::string_view WitnessName(Witness w);

struct KeyLower {
  Rational rz;
  std::optional<Rational> rzsigma;  // absent when no bound is known
  std::optional<std::string> special_case;
};

struct BoundsReport {
  Verdict feasible;
  Witness witness;
  Rational comm_lower_x;
  Rational comm_lower_y;
  // Only populated on feasible inputs.
  std::optional<KeyLower> key;
};

// Tag attached when the cyclic n = 2, T_h = 1, T_u = N - 2 bound applies.
inline constexpr const char* kCyclicFullCollusionCase =
    "cyclic_n2_full_collusion";

// (1/n, 1/n).
std::pair<Rational, Rational> CommLower(const Topology& t);

struct Feasibility {
  Verdict verdict;
  Witness witness;
};
// Requires T_h >= 1.
Feasibility CheckFeasibility(const Topology& t, std::size_t relay_budget,
                             std::size_t user_budget);

// Requires a feasible point, else InfeasibleParameters.
KeyLower KeyLowerBound(const Topology& t, std::size_t relay_budget,
                       std::size_t user_budget);

BoundsReport Bounds(const Topology& t, std::size_t relay_budget,
                    std::size_t user_budget);

// Optimal key rates for cyclic n = m = 2 networks at optimal load with
// T_h = 1 and T_u = T.
struct KeyRegion {
  bool exists;
  Rational rz;
  Rational rzsigma;
};
KeyRegion OptimalKeyRegion(std::size_t num_users, std::size_t t);

// Known optimal regions of earlier settings, for report comparison.
struct RegionTerm {
  std::string name;
  Rational bound;
  // True if the term only arises from protecting inputs against the server.
  bool server_security = false;
};
struct ReferenceRegion {
  std::string kind;
  bool empty = false;
  std::vector<RegionTerm> terms;
};
// U groups of V users behind one relay each, T colluding users.
ReferenceRegion TreeRegion(std::size_t groups, std::size_t group_size,
                           std::size_t t);
// Cyclic wrap-around association without relay collusion.
ReferenceRegion CyclicRegion(std::size_t num_relays, std::size_t n);

}  // namespace hsa

#endif  // HSA_BOUNDS_H_
