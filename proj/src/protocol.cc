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

#include "hsa/protocol.h"

#include <string>

#include "hsa/error.h"

namespace hsa {

namespace {

[[noreturn]] void Violation(const std::string& msg) {
  throw Error(ErrorCode::kProtocolViolation, msg);
}

}  // namespace

std::map<std::size_t, Message> UserEncode(const Scheme& s, std::size_t user,
                                          const gf::Matrix& input,
                                          const KeyMaterial& keys) {
  const Topology& t = s.topology;
  if (user < 1 || user > t.N()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no user " + std::to_string(user));
  }
  if (input.rows() != t.n() || input.cols() != keys.seeds.cols()) {
    throw Error(ErrorCode::kShapeError,
                "input of user " + std::to_string(user) + " must be " +
                    std::to_string(t.n()) + " x " +
                    std::to_string(keys.seeds.cols()));
  }
  gf::Matrix coded = gf::Multiply(s.E[user - 1], input);
  std::map<std::size_t, Message> out;
  for (std::size_t p = 0; p < t.n(); ++p) {
    std::size_t relay = t.H(user)[p];
    Message key = LinkKey(s, keys, user, relay);
    Message msg(coded.cols());
    for (std::size_t c = 0; c < coded.cols(); ++c) {
      msg[c] = s.field.add(coded(p, c), key[c]);
    }
    out.emplace(relay, std::move(msg));
  }
  return out;
}

Message RelayAggregate(const Scheme& s, std::size_t relay,
                       const std::map<std::size_t, Message>& incoming) {
  const auto& expected = s.topology.U(relay);
  if (incoming.size() != expected.size()) {
    Violation("relay " + std::to_string(relay) + " expects " +
              std::to_string(expected.size()) + " senders, got " +
              std::to_string(incoming.size()));
  }
  Message sum;
  for (std::size_t user : expected) {
    auto it = incoming.find(user);
    if (it == incoming.end()) {
      Violation("relay " + std::to_string(relay) + " is missing user " +
                std::to_string(user));
    }
    if (sum.empty()) sum.assign(it->second.size(), 0);
    if (it->second.size() != sum.size()) {
      Violation("ragged message at relay " + std::to_string(relay));
    }
    for (std::size_t c = 0; c < sum.size(); ++c) {
      sum[c] = s.field.add(sum[c], it->second[c]);
    }
  }
  return sum;
}

gf::Matrix ServerDecode(const Scheme& s,
                        const std::map<std::size_t, Message>& y) {
  const std::size_t K = s.topology.K();
  if (y.size() != K) {
    Violation("server expects " + std::to_string(K) + " relay messages, got " +
              std::to_string(y.size()));
  }
  std::size_t block = y.begin()->second.size();
  gf::Matrix stacked(s.field, K, block);
  for (std::size_t j = 1; j <= K; ++j) {
    auto it = y.find(j);
    if (it == y.end()) Violation("missing relay " + std::to_string(j));
    if (it->second.size() != block) Violation("ragged relay messages");
    for (std::size_t c = 0; c < block; ++c) stacked(j - 1, c) = it->second[c];
  }
  return gf::Multiply(s.D, stacked);
}

Transcript RunRoundWithKeys(const Scheme& s, std::vector<gf::Matrix> inputs,
                            KeyMaterial keys) {
  const Topology& t = s.topology;
  if (inputs.size() != t.N()) {
    throw Error(ErrorCode::kShapeError,
                "expected " + std::to_string(t.N()) + " inputs");
  }
  const std::size_t block = keys.seeds.cols();
  Transcript tr{std::move(inputs), std::move(keys), {}, {},
                gf::Matrix(s.field, t.n(), block),
                gf::Matrix(s.field, t.n(), block)};
  std::vector<std::map<std::size_t, Message>> inbox(t.K());
  for (std::size_t i = 1; i <= t.N(); ++i) {
    tr.direct_sum = gf::Add(tr.direct_sum, tr.inputs[i - 1]);
    for (auto& [relay, msg] : UserEncode(s, i, tr.inputs[i - 1], tr.keys)) {
      tr.x_msgs[{i, relay}] = msg;
      inbox[relay - 1].emplace(i, std::move(msg));
    }
  }
  for (std::size_t j = 1; j <= t.K(); ++j) {
    tr.y_msgs[j] = RelayAggregate(s, j, inbox[j - 1]);
  }
  tr.decoded = ServerDecode(s, tr.y_msgs);
  tr.mismatch = !(tr.decoded == tr.direct_sum);
  return tr;
}

Transcript RunRound(const Scheme& s, std::vector<gf::Matrix> inputs,
                    std::size_t block, std::uint64_t seed) {
  return RunRoundWithKeys(s, std::move(inputs), SampleKeys(s, block, seed));
}

}  // namespace hsa
