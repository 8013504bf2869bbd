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

// One synchronous aggregation round: users encode, relays add, the server
// decodes.

#ifndef HSA_PROTOCOL_H_
#define HSA_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hsa/gf.h"
#include "hsa/schemes.h"

namespace hsa {

// l symbols, one per block column.
using Message = std::vector<gf::Residue>;

struct Transcript {
  std::vector<gf::Matrix> inputs;  // W_i, n x l
  KeyMaterial keys;
  std::map<std::pair<std::size_t, std::size_t>, Message> x_msgs;  // (i, j)
  std::map<std::size_t, Message> y_msgs;
  gf::Matrix decoded;     // n x l
  gf::Matrix direct_sum;  // sum of inputs, n x l
  bool mismatch = false;
};

// X_{i,j} for every j in H_i.
std::map<std::size_t, Message> UserEncode(const Scheme& s, std::size_t user,
                                          const gf::Matrix& input,
                                          const KeyMaterial& keys);

// incoming must be keyed by exactly U_j, else ProtocolViolation.
Message RelayAggregate(const Scheme& s, std::size_t relay,
                       const std::map<std::size_t, Message>& incoming);

// y must hold every relay, else ProtocolViolation.
gf::Matrix ServerDecode(const Scheme& s,
                        const std::map<std::size_t, Message>& y);

Transcript RunRoundWithKeys(const Scheme& s, std::vector<gf::Matrix> inputs,
                            KeyMaterial keys);
Transcript RunRound(const Scheme& s, std::vector<gf::Matrix> inputs,
                    std::size_t block, std::uint64_t seed);

}  // namespace hsa

#endif  // HSA_PROTOCOL_H_
