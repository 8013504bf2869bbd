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

// Homogeneous three-layer user -> relay -> server networks.

#ifndef HSA_TOPOLOGY_H_
#define HSA_TOPOLOGY_H_

#include <cstddef>
#include <vector>

namespace hsa {

// Users and relays are 1-based. user_links[i - 1] is H_i (sorted ascending)
// and relay_links[j - 1] is U_j (sorted ascending).
class Topology {
 public:
  // Validates degrees and consistency. Throws InvalidTopology.
  static Topology BuildExplicit(std::size_t num_users, std::size_t num_relays,
                                std::vector<std::vector<std::size_t>> links);
  // N = K, H_i = {i, i + 1, ..., i + n - 1} wrapped onto [1..K].
  static Topology Cyclic(std::size_t num_relays, std::size_t n);
  // N = tK; user pK + i copies the links of user i in Cyclic(K, n).
  static Topology MultipleCyclic(std::size_t num_relays, std::size_t n,
                                 std::size_t copies);
  // U groups of V users, one relay per group (n = 1, m = V).
  static Topology Tree(std::size_t groups, std::size_t group_size);

  std::size_t N() const { return num_users_; }
  std::size_t K() const { return num_relays_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  const std::vector<std::size_t>& H(std::size_t user) const {
    return user_links_[user - 1];
  }
  const std::vector<std::size_t>& U(std::size_t relay) const {
    return relay_links_[relay - 1];
  }
  const std::vector<std::vector<std::size_t>>& user_links() const {
    return user_links_;
  }
  bool linked(std::size_t user, std::size_t relay) const;
  // Rank of relay within sorted H_user (0-based). Throws InvalidArgument
  // when the pair is not a link.
  std::size_t pos(std::size_t user, std::size_t relay) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Topology() = default;

  std::size_t num_users_ = 0;
  std::size_t num_relays_ = 0;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<std::size_t>> user_links_;
  std::vector<std::vector<std::size_t>> relay_links_;
};

// n(N, T_h): the fewest users whose relays cover some K - T_h - n + 1 relays
// exactly, i.e. min over relay sets of that size of |union of U_j|.
// Requires 0 < T_h <= K - n, else InvalidArgument.
std::size_t CollusionThreshold(const Topology& t, std::size_t relay_budget);

// Smallest user-to-server edge cut, via unit-capacity max flow from each user
// to the server.
std::size_t MinCut(const Topology& t);

}  // namespace hsa

#endif  // HSA_TOPOLOGY_H_
