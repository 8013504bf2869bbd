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

#include "hsa/topology.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "hsa/error.h"

namespace hsa {

namespace {

[[noreturn]] void Invalid(const std::string& msg) {
  throw Error(ErrorCode::kInvalidTopology, msg);
}

std::size_t Wrap(std::size_t a, std::size_t k) {
  std::size_t r = a % k;
  return r == 0 ? k : r;
}

struct ThresholdSearch {
  const Topology& topo;
  std::size_t subset_size;
  std::vector<int> hits;
  std::size_t covered = 0;
  std::size_t best = std::numeric_limits<std::size_t>::max();

  void Add(std::size_t relay) {
    for (std::size_t u : topo.U(relay)) {
      if (hits[u - 1]++ == 0) ++covered;
    }
  }
  void Remove(std::size_t relay) {
    for (std::size_t u : topo.U(relay)) {
      if (--hits[u - 1] == 0) --covered;
    }
  }
  void Recurse(std::size_t next, std::size_t chosen) {
    if (covered >= best) return;
    if (chosen == subset_size) {
      best = covered;
      return;
    }
    for (std::size_t j = next; j + (subset_size - chosen) <= topo.K() + 1; ++j) {
      Add(j);
      Recurse(j + 1, chosen + 1);
      Remove(j);
    }
  }
};

// Unit-capacity Edmonds-Karp on the layered graph: source user, relays,
// server.
std::size_t MaxFlowFromUser(const Topology& t, std::size_t user) {
  // Nodes: 0..N-1 users, N..N+K-1 relays, N+K server.
  const std::size_t nodes = t.N() + t.K() + 1;
  const std::size_t sink = nodes - 1;
  std::vector<std::vector<int>> cap(nodes, std::vector<int>(nodes, 0));
  for (std::size_t i = 1; i <= t.N(); ++i) {
    for (std::size_t j : t.H(i)) cap[i - 1][t.N() + j - 1] = 1;
  }
  for (std::size_t j = 1; j <= t.K(); ++j) cap[t.N() + j - 1][sink] = 1;
  const std::size_t source = user - 1;
  std::size_t flow = 0;
  while (true) {
    std::vector<std::size_t> parent(nodes, nodes);
    parent[source] = source;
    std::queue<std::size_t> frontier;
    frontier.push(source);
    while (!frontier.empty() && parent[sink] == nodes) {
      std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w = 0; w < nodes; ++w) {
        if (cap[v][w] > 0 && parent[w] == nodes) {
          parent[w] = v;
          frontier.push(w);
        }
      }
    }
    if (parent[sink] == nodes) return flow;
    for (std::size_t v = sink; v != source; v = parent[v]) {
      --cap[parent[v]][v];
      ++cap[v][parent[v]];
    }
    ++flow;
  }
}

}  // namespace

Topology Topology::BuildExplicit(std::size_t num_users, std::size_t num_relays,
                                 std::vector<std::vector<std::size_t>> links) {
  if (num_users == 0 || num_relays == 0) Invalid("empty network");
  if (links.size() != num_users) {
    Invalid("expected " + std::to_string(num_users) + " link lists, got " +
            std::to_string(links.size()));
  }
  Topology t;
  t.num_users_ = num_users;
  t.num_relays_ = num_relays;
  t.relay_links_.assign(num_relays, {});
  for (std::size_t i = 0; i < num_users; ++i) {
    auto& h = links[i];
    std::sort(h.begin(), h.end());
    if (std::adjacent_find(h.begin(), h.end()) != h.end()) {
      Invalid("user " + std::to_string(i + 1) + " has a duplicate link");
    }
    for (std::size_t j : h) {
      if (j < 1 || j > num_relays) {
        Invalid("user " + std::to_string(i + 1) + " links to unknown relay " +
                std::to_string(j));
      }
      t.relay_links_[j - 1].push_back(i + 1);
    }
    if (h.size() != links[0].size()) {
      Invalid("user " + std::to_string(i + 1) + " has degree " +
              std::to_string(h.size()) + ", user 1 has " +
              std::to_string(links[0].size()));
    }
  }
  t.n_ = links[0].size();
  if (t.n_ == 0) Invalid("users must connect to at least one relay");
  if (t.n_ >= num_relays) Invalid("need n < K");
  t.m_ = t.relay_links_[0].size();
  for (std::size_t j = 0; j < num_relays; ++j) {
    if (t.relay_links_[j].size() != t.m_) {
      Invalid("relay " + std::to_string(j + 1) + " has degree " +
              std::to_string(t.relay_links_[j].size()) + ", relay 1 has " +
              std::to_string(t.m_));
    }
  }
  if (num_users * t.n_ != num_relays * t.m_) Invalid("N n != K m");
  t.user_links_ = std::move(links);
  return t;
}

Topology Topology::Cyclic(std::size_t num_relays, std::size_t n) {
  return MultipleCyclic(num_relays, n, 1);
}

Topology Topology::MultipleCyclic(std::size_t num_relays, std::size_t n,
                                  std::size_t copies) {
  if (num_relays == 0 || n == 0 || n >= num_relays) Invalid("need 0 < n < K");
  if (copies == 0) Invalid("need at least one copy");
  std::vector<std::vector<std::size_t>> links;
  for (std::size_t p = 0; p < copies; ++p) {
    for (std::size_t i = 1; i <= num_relays; ++i) {
      std::vector<std::size_t> h;
      for (std::size_t d = 0; d < n; ++d) h.push_back(Wrap(i + d, num_relays));
      links.push_back(std::move(h));
    }
  }
  return BuildExplicit(copies * num_relays, num_relays, std::move(links));
}

Topology Topology::Tree(std::size_t groups, std::size_t group_size) {
  if (groups < 2 || group_size == 0) Invalid("tree needs U >= 2 and V >= 1");
  std::vector<std::vector<std::size_t>> links;
  for (std::size_t u = 1; u <= groups; ++u) {
    for (std::size_t v = 0; v < group_size; ++v) links.push_back({u});
  }
  return BuildExplicit(groups * group_size, groups, std::move(links));
}

bool Topology::linked(std::size_t user, std::size_t relay) const {
  const auto& h = H(user);
  return std::binary_search(h.begin(), h.end(), relay);
}

std::size_t Topology::pos(std::size_t user, std::size_t relay) const {
  const auto& h = H(user);
  auto it = std::lower_bound(h.begin(), h.end(), relay);
  if (it == h.end() || *it != relay) {
    throw Error(ErrorCode::kInvalidArgument,
                "user " + std::to_string(user) + " is not linked to relay " +
                    std::to_string(relay));
  }
  return static_cast<std::size_t>(it - h.begin());
}

std::size_t CollusionThreshold(const Topology& t, std::size_t relay_budget) {
  if (relay_budget == 0 || relay_budget + t.n() > t.K()) {
    throw Error(ErrorCode::kInvalidArgument,
                "collusion threshold needs 0 < T_h <= K - n, got T_h = " +
                    std::to_string(relay_budget));
  }
  ThresholdSearch search{t, t.K() - relay_budget - t.n() + 1,
                         std::vector<int>(t.N(), 0)};
  search.Recurse(1, 0);
  return search.best;
}

std::size_t MinCut(const Topology& t) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 1; i <= t.N(); ++i) {
    best = std::min(best, MaxFlowFromUser(t, i));
  }
  return best;
}

}  // namespace hsa
