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

// Concrete secure aggregation codes.
//
// Every scheme sends X_{i,j} = (E_i W_i)[pos(j)] + (key term) on link (i, j),
// relays forward Y_j = sum of X_{i,j} over U_j, and the server outputs
// D [Y_1 .. Y_K]^T. The key term is a fixed linear function of a seed vector
// R, which is what the verifiers work with.

#ifndef HSA_SCHEMES_H_
#define HSA_SCHEMES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsa/bounds.h"
#include "hsa/gf.h"
#include "hsa/topology.h"

namespace hsa {

enum class Variant {
  kA,       // one independent key per link, all but one user's keys free
  kBLambda  // one key per user, spread onto links by the weights Lambda
};

std::string_view VariantName(Variant v);

struct Scheme {
  Scheme(Topology t, const gf::Field& f)
      : topology(std::move(t)), field(f), D(f, 0, 0), key_map(f, 0, 0) {}

  Variant variant = Variant::kA;
  // "A", "B" or "C"; C is a closed-form member of the B-Lambda family.
  std::string construction;
  Topology topology;
  gf::Field field;
  gf::Matrix D;               // n x K
  std::vector<gf::Matrix> E;  // E[i - 1] = inverse of D restricted to H_i
  std::size_t seed_count = 0;
  // seed_count x (number of keys). Row vector R times key_map gives the keys:
  // for kA the N n link keys (user-major, position within H_i minor); for
  // kBLambda the N per-user keys.
  gf::Matrix key_map;
  // kBLambda only.
  std::size_t user_budget = 0;
  std::optional<gf::Matrix> Lambda;  // N x K
  // Construction bookkeeping.
  std::uint64_t seed = 0;
  std::size_t attempts = 1;
};

// Key symbols a user holds per block column.
std::size_t KeyLength(const Scheme& s);

// seed_count x (N n): column (i, p) is the coefficient vector of the key
// term added to X_{i, H_i[p]}.
gf::Matrix LinkKeyCoefficients(const Scheme& s);

// (N n) x n stack of D_i^T. The keys cancel at the server iff
// LinkKeyCoefficients(s) times this is zero.
gf::Matrix DecodeStack(const Scheme& s);

// Columns of D indexed by the sorted H_i.
gf::Matrix LocalDecoder(const Scheme& s, std::size_t user);

// Seeded Vandermonde D. Throws FieldTooSmall when q < K.
Scheme BuildSchemeA(const Topology& t, const gf::Field& field,
                    std::uint64_t seed);
// Uses the given n x K matrix as D. Throws ConstructionFailed unless it is
// MDS.
Scheme BuildSchemeA(const Topology& t, const gf::Field& field,
                    const gf::Matrix& D);

inline constexpr std::size_t kDefaultAttemptBudget = 1000;

// Multiple cyclic networks, one colluding relay.
Scheme BuildSchemeB(const Topology& t, const gf::Field& field,
                    std::size_t user_budget, std::uint64_t seed,
                    std::size_t attempt_budget = kDefaultAttemptBudget);

// Cyclic n = m = 2 networks with T_u = N - 3. Needs prime q >= N + 2.
Scheme BuildSchemeC(std::size_t num_users, const gf::Field& field);

// The three algebraic conditions of the B-Lambda family.
struct LambdaConditions {
  bool mds = false;      // B and D are MDS
  bool support = false;  // Lambda(i, j) = 0 whenever j is not in H_i
  bool cancel = false;   // B Lambda D^T = 0
};
LambdaConditions CheckLambdaConditions(const Scheme& s);

// E_i D_i = I for every user.
bool CheckLocalInverses(const Scheme& s);
// Keys vanish at the server.
bool CheckKeyCancellation(const Scheme& s);

// Closed form of the summed Cauchy blocks:
// sum_k 1 / (a + c w^k) = t a^(t-1) / (a^t - (-c)^t).
gf::Residue SummedCauchyEntry(const gf::Field& f, gf::Residue alpha,
                              gf::Residue c, std::size_t copies);

struct KeyMaterial {
  gf::Matrix seeds;                  // seed_count x l
  std::vector<gf::Matrix> per_user;  // KeyLength x l each
};

KeyMaterial DeriveKeys(const Scheme& s, const gf::Matrix& seeds);
KeyMaterial SampleKeys(const Scheme& s, std::size_t block, std::uint64_t seed);

// Key term on link (user, relay), length l.
std::vector<gf::Residue> LinkKey(const Scheme& s, const KeyMaterial& keys,
                                 std::size_t user, std::size_t relay);

// Read off the structure, not from simulation.
RateTuple Rates(const Scheme& s);

}  // namespace hsa

#endif  // HSA_SCHEMES_H_
