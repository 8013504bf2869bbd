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

#include "hsa/bounds.h"

#include <algorithm>
#include <functional>

#include "hsa/error.h"

namespace hsa {

namespace {

Rational R(std::size_t num, std::size_t den = 1) {
  return Rational(static_cast<std::int64_t>(num),
                  static_cast<std::int64_t>(den));
}

// Depth-first connectivity check over the user/relay bipartite graph.
bool Connected(const Topology& t) {
  std::vector<bool> seen_user(t.N() + 1, false), seen_relay(t.K() + 1, false);
  std::vector<std::size_t> stack = {1};
  seen_user[1] = true;
  std::size_t users = 0;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    ++users;
    for (std::size_t j : t.H(i)) {
      if (seen_relay[j]) continue;
      seen_relay[j] = true;
      for (std::size_t k : t.U(j)) {
        if (!seen_user[k]) {
          seen_user[k] = true;
          stack.push_back(k);
        }
      }
    }
  }
  return users == t.N();
}

}  // namespace

std::string FormatRational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string_view VerdictName(Verdict v) {
  return v == Verdict::kFeasible ? "feasible" : "infeasible";
}

std::string_view WitnessName(Witness w) {
  switch (w) {
    case Witness::kRelayThreshold: return "relay_threshold";
    case Witness::kUserThreshold: return "user_threshold";
    case Witness::kKeyedNetworkCode: return "keyed_network_code";
  }
  return "unknown";
}

std::pair<Rational, Rational> CommLower(const Topology& t) {
  return {R(1, t.n()), R(1, t.n())};
}

Feasibility CheckFeasibility(const Topology& t, std::size_t relay_budget,
                             std::size_t user_budget) {
  if (relay_budget == 0) {
    throw Error(ErrorCode::kInvalidArgument, "feasibility needs T_h >= 1");
  }
  if (relay_budget + t.n() >= t.K() + 1) {
    return {Verdict::kInfeasible, Witness::kRelayThreshold};
  }
  if (user_budget >= CollusionThreshold(t, relay_budget)) {
    return {Verdict::kInfeasible, Witness::kUserThreshold};
  }
  return {Verdict::kFeasible, Witness::kKeyedNetworkCode};
}

KeyLower KeyLowerBound(const Topology& t, std::size_t relay_budget,
                       std::size_t user_budget) {
  if (CheckFeasibility(t, relay_budget, user_budget).verdict !=
      Verdict::kFeasible) {
    throw Error(ErrorCode::kInfeasibleParameters,
                "no secure scheme exists at T_h = " +
                    std::to_string(relay_budget) +
                    ", T_u = " + std::to_string(user_budget));
  }
  const std::size_t N = t.N(), n = t.n(), m = t.m();
  if (N == t.K() && n == 2 && relay_budget == 1 && user_budget + 2 == N &&
      Connected(t)) {
    return {R(1), R(N - 1), kCyclicFullCollusionCase};
  }
  KeyLower out;
  out.rz = std::min(R(relay_budget, n), R(1));
  if (relay_budget * m + user_budget < N) {
    out.rzsigma = std::min(R(relay_budget * (user_budget + m), n),
                           R(user_budget * n + relay_budget * m, n));
  }
  return out;
}

BoundsReport Bounds(const Topology& t, std::size_t relay_budget,
                    std::size_t user_budget) {
  Feasibility f = CheckFeasibility(t, relay_budget, user_budget);
  auto [x, y] = CommLower(t);
  BoundsReport report{f.verdict, f.witness, x, y, std::nullopt};
  if (f.verdict == Verdict::kFeasible) {
    report.key = KeyLowerBound(t, relay_budget, user_budget);
  }
  return report;
}

KeyRegion OptimalKeyRegion(std::size_t num_users, std::size_t t) {
  if (num_users < 3) {
    throw Error(ErrorCode::kInvalidArgument, "optimal key region needs N >= 3");
  }
  if (t + 3 <= num_users) return {true, R(1, 2), R(t, 2) + 1};
  if (t + 2 == num_users) return {true, R(1), R(num_users - 1)};
  return {false, R(0), R(0)};
}

ReferenceRegion TreeRegion(std::size_t groups, std::size_t group_size,
                           std::size_t t) {
  if (groups < 2 || group_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tree region needs U >= 2, V >= 1");
  }
  ReferenceRegion region{"tree", false, {}};
  if (t >= (groups - 1) * group_size) {
    region.empty = true;
    return region;
  }
  Rational relay_term = R(group_size + t);
  Rational server_term =
      std::min(R(groups * group_size - 1), R(groups + t - 1));
  region.terms = {{"R_X", R(1)},
                  {"R_Y", R(1)},
                  {"R_Z", R(1)},
                  {"R_ZSigma", std::max(relay_term, server_term)},
                  {"R_ZSigma.relay_term", relay_term},
                  {"R_ZSigma.server_term", server_term, true}};
  return region;
}

ReferenceRegion CyclicRegion(std::size_t num_relays, std::size_t n) {
  if (n == 0 || n + 1 > num_relays) {
    throw Error(ErrorCode::kInvalidArgument, "cyclic region needs n <= K - 1");
  }
  Rational server_term = R(num_relays, n) - 1;
  return {"cyclic",
          false,
          {{"R_X", R(1, n)},
           {"R_Y", R(1, n)},
           {"R_Z", R(1, n)},
           {"R_ZSigma", std::max(R(1), server_term)},
           {"R_ZSigma.relay_term", R(1)},
           {"R_ZSigma.server_term", server_term, true}}};
}

}  // namespace hsa
