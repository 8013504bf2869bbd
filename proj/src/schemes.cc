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

#include "hsa/schemes.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "hsa/error.h"
#include "hsa/rng.h"

namespace hsa {

namespace {

using gf::Field;
using gf::Matrix;
using gf::Residue;

void FillInverses(Scheme& s) {
  s.E.clear();
  for (std::size_t i = 1; i <= s.topology.N(); ++i) {
    s.E.push_back(gf::Inverse(LocalDecoder(s, i)));
  }
}

// key_map = [I | -S E_N^T] where S stacks D_i^T for i < N, so the last user's
// keys cancel everyone else's at the server.
void FillSchemeAKeys(Scheme& s) {
  const std::size_t N = s.topology.N(), n = s.topology.n();
  s.seed_count = (N - 1) * n;
  Matrix stack(s.field, 0, n);
  for (std::size_t i = 1; i < N; ++i) {
    stack = gf::VStack(stack, LocalDecoder(s, i).transpose());
  }
  Matrix last = gf::Multiply(stack, s.E[N - 1].transpose());
  s.key_map = gf::HStack(Matrix::Identity(s.field, s.seed_count),
                         gf::Scale(last, s.field.neg(1 % s.field.q())));
}

Matrix RandomMatrix(const Field& f, std::size_t rows, std::size_t cols,
                    Rng& rng) {
  Matrix m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = static_cast<Residue>(rng.Below(f.q()));
    }
  }
  return m;
}

// Picks c_1..c_K so that the Cauchy parameters a_i = i and c_j w^k are valid
// and the summed blocks stay Cauchy-shaped (distinct a_i^t and c_j^t).
bool SampleCauchyOffsets(const Field& f, std::size_t rows, std::size_t relays,
                         std::size_t copies, Residue w, Rng& rng,
                         std::vector<Residue>& offsets) {
  offsets.clear();
  std::set<Residue> used_powers;
  for (std::size_t j = 0; j < relays; ++j) {
    bool placed = false;
    for (int tries = 0; tries < 64 && !placed; ++tries) {
      Residue c = static_cast<Residue>(rng.NonZeroBelow(f.q()));
      Residue ct = f.pow(c, copies);
      if (used_powers.count(ct)) continue;
      bool ok = true;
      for (std::size_t i = 1; i <= rows && ok; ++i) {
        Residue alpha = f.from_int(static_cast<std::int64_t>(i));
        Residue beta = c;
        for (std::size_t k = 0; k < copies && ok; ++k) {
          ok = f.add(alpha, beta) != 0;
          beta = f.mul(beta, w);
        }
      }
      if (!ok) continue;
      used_powers.insert(ct);
      offsets.push_back(c);
      placed = true;
    }
    if (!placed) return false;
  }
  return true;
}

}  // namespace

std::string_view VariantName(Variant v) {
  return v == Variant::kA ? "A" : "BLambda";
}

std::size_t KeyLength(const Scheme& s) {
  return s.variant == Variant::kA ? s.topology.n() : 1;
}

Matrix LocalDecoder(const Scheme& s, std::size_t user) {
  std::vector<std::size_t> cols;
  for (std::size_t j : s.topology.H(user)) cols.push_back(j - 1);
  return s.D.select_columns(cols);
}

Matrix LinkKeyCoefficients(const Scheme& s) {
  if (s.variant == Variant::kA) return s.key_map;
  const Topology& t = s.topology;
  Matrix out(s.field, s.seed_count, t.N() * t.n());
  for (std::size_t i = 1; i <= t.N(); ++i) {
    for (std::size_t p = 0; p < t.n(); ++p) {
      Residue lambda = (*s.Lambda)(i - 1, t.H(i)[p] - 1);
      for (std::size_t r = 0; r < s.seed_count; ++r) {
        out(r, (i - 1) * t.n() + p) = s.field.mul(lambda, s.key_map(r, i - 1));
      }
    }
  }
  return out;
}

Matrix DecodeStack(const Scheme& s) {
  Matrix stack(s.field, 0, s.topology.n());
  for (std::size_t i = 1; i <= s.topology.N(); ++i) {
    stack = gf::VStack(stack, LocalDecoder(s, i).transpose());
  }
  return stack;
}

Scheme BuildSchemeA(const Topology& t, const Field& field, const Matrix& D) {
  if (D.rows() != t.n() || D.cols() != t.K() || !(D.field() == field)) {
    throw Error(ErrorCode::kShapeError, "D must be n x K over the scheme field");
  }
  if (!gf::IsMds(D)) {
    throw Error(ErrorCode::kConstructionFailed, "injected D is not MDS");
  }
  Scheme s(t, field);
  s.construction = "A";
  s.D = D;
  FillInverses(s);
  FillSchemeAKeys(s);
  return s;
}

Scheme BuildSchemeA(const Topology& t, const Field& field, std::uint64_t seed) {
  if (field.q() < t.K()) {
    throw Error(ErrorCode::kFieldTooSmall,
                "q = " + std::to_string(field.q()) + " < K = " +
                    std::to_string(t.K()));
  }
  Rng rng(seed);
  for (std::size_t attempt = 1; attempt <= kDefaultAttemptBudget; ++attempt) {
    // Distinct evaluation points by a partial Fisher-Yates shuffle of F_q.
    std::vector<Residue> points(field.q());
    std::iota(points.begin(), points.end(), 0);
    for (std::size_t c = 0; c < t.K(); ++c) {
      std::swap(points[c], points[c + rng.Below(field.q() - c)]);
    }
    Matrix D(field, t.n(), t.K());
    for (std::size_t c = 0; c < t.K(); ++c) {
      for (std::size_t r = 0; r < t.n(); ++r) D(r, c) = field.pow(points[c], r);
    }
    if (!gf::IsMds(D)) continue;
    Scheme s = BuildSchemeA(t, field, D);
    s.seed = seed;
    s.attempts = attempt;
    return s;
  }
  throw Error(ErrorCode::kConstructionFailed,
              "no MDS Vandermonde matrix after " +
                  std::to_string(kDefaultAttemptBudget) + " attempts");
}

Residue SummedCauchyEntry(const Field& f, Residue alpha, Residue c,
                          std::size_t copies) {
  Residue num = f.mul(f.from_int(static_cast<std::int64_t>(copies)),
                      f.pow(alpha, copies - 1));
  Residue neg_c_pow = f.pow(f.neg(c), copies);
  return f.div(num, f.sub(f.pow(alpha, copies), neg_c_pow));
}

Scheme BuildSchemeB(const Topology& t, const Field& field,
                    std::size_t user_budget, std::uint64_t seed,
                    std::size_t attempt_budget) {
  const std::size_t N = t.N(), K = t.K(), n = t.n(), m = t.m();
  auto infeasible = [](const std::string& msg) {
    throw Error(ErrorCode::kInfeasibleParameters, msg);
  };
  if (N % K != 0 || !(Topology::MultipleCyclic(K, n, N / K) == t)) {
    infeasible("topology is not a multiple cyclic network");
  }
  const std::size_t copies = N / K;
  const std::size_t rows = user_budget + m;
  if (rows > std::min(N - 1, K - n)) {
    infeasible("need T_u + m <= min(N - 1, K - n), got T_u + m = " +
               std::to_string(rows));
  }
  if (user_budget + 1 > CollusionThreshold(t, 1)) {
    infeasible("T_u = " + std::to_string(user_budget) +
               " reaches the collusion threshold");
  }
  if ((field.q() - 1) % copies != 0) {
    infeasible("t = " + std::to_string(copies) + " does not divide q - 1");
  }
  const Residue w = gf::RootOfUnity(field, copies);
  std::vector<Residue> alphas(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    alphas[i] = field.from_int(static_cast<std::int64_t>(i + 1));
  }
  {
    std::set<Residue> alpha_powers;
    for (Residue a : alphas) alpha_powers.insert(field.pow(a, copies));
    if (alpha_powers.size() != rows || alpha_powers.count(0)) {
      infeasible("the t-th powers of 1.." + std::to_string(rows) +
                 " are not distinct and nonzero in F_" +
                 std::to_string(field.q()));
    }
  }

  Rng rng(seed);
  std::vector<Residue> offsets;
  for (std::size_t attempt = 1; attempt <= attempt_budget; ++attempt) {
    if (!SampleCauchyOffsets(field, rows, K, copies, w, rng, offsets)) continue;
    std::vector<Residue> betas(N);
    for (std::size_t k = 0; k < copies; ++k) {
      for (std::size_t j = 0; j < K; ++j) {
        betas[k * K + j] = field.mul(offsets[j], field.pow(w, k));
      }
    }
    Matrix B = gf::Cauchy(alphas, betas, field);
    Matrix summed(field, rows, K);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < K; ++j) {
        Residue acc = 0;
        for (std::size_t k = 0; k < copies; ++k) {
          acc = field.add(acc, B(i, k * K + j));
        }
        if (acc != SummedCauchyEntry(field, alphas[i], offsets[j], copies)) {
          throw Error(ErrorCode::kConstructionFailed,
                      "summed Cauchy blocks disagree with the closed form");
        }
        summed(i, j) = acc;
      }
    }
    if (!gf::IsMds(B) || !gf::IsMds(summed)) continue;

    Matrix padded = gf::VStack(summed, RandomMatrix(field, K - rows, K, rng));
    if (gf::Rank(padded) != K) continue;
    Matrix inverse = gf::Inverse(padded);
    std::vector<std::size_t> tail(n);
    std::iota(tail.begin(), tail.end(), K - n);
    Matrix Q = inverse.select_columns(tail);
    if (!gf::IsMds(Q.transpose())) continue;

    std::vector<Residue> first_row(K, 0);
    for (std::size_t p = 0; p < n; ++p) {
      first_row[p] = static_cast<Residue>(rng.NonZeroBelow(field.q()));
    }
    Matrix lambda1 = gf::Circulant(first_row, field);
    if (gf::Rank(lambda1) != K) continue;
    Matrix D = gf::Multiply(gf::Inverse(lambda1), Q).transpose();
    if (!gf::IsMds(D)) continue;

    Scheme s(t, field);
    s.variant = Variant::kBLambda;
    s.construction = "B";
    s.D = D;
    s.user_budget = user_budget;
    s.seed_count = rows;
    s.key_map = B;
    Matrix lambda = lambda1;
    for (std::size_t k = 1; k < copies; ++k) {
      lambda = gf::VStack(lambda, lambda1);
    }
    s.Lambda = lambda;
    s.seed = seed;
    s.attempts = attempt;
    FillInverses(s);
    LambdaConditions cond = CheckLambdaConditions(s);
    if (!cond.mds || !cond.support || !cond.cancel) {
      throw Error(ErrorCode::kConstructionFailed,
                  "constructed scheme violates its algebraic conditions");
    }
    return s;
  }
  throw Error(ErrorCode::kConstructionFailed,
              "no valid scheme after " + std::to_string(attempt_budget) +
                  " attempts");
}

Scheme BuildSchemeC(std::size_t num_users, const Field& field) {
  const std::size_t N = num_users;
  if (N < 3) {
    throw Error(ErrorCode::kInvalidArgument, "scheme C needs N >= 3");
  }
  if (field.q() < N + 2) {
    throw Error(ErrorCode::kFieldTooSmall,
                "scheme C needs q >= N + 2 = " + std::to_string(N + 2));
  }
  auto I = [&](std::size_t v) {
    return field.from_int(static_cast<std::int64_t>(v));
  };
  Scheme s(Topology::Cyclic(N, 2), field);
  s.variant = Variant::kBLambda;
  s.construction = "C";
  s.user_budget = N - 3;
  s.seed_count = N - 1;

  s.D = Matrix(field, 2, N);
  for (std::size_t j = 0; j < N; ++j) {
    s.D(0, j) = 1;
    s.D(1, j) = I(j + 1);
  }
  Matrix lambda(field, N, N);
  for (std::size_t i = 1; i < N; ++i) {
    lambda(i - 1, i - 1) = 1;
    lambda(i - 1, i) =
        field.div(field.sub(I(i), I(N + 1)), I(N - i));
  }
  // The wrap weight is -1/N: only then does the last row of Lambda D^T
  // become (N + 1) times its first entry, like every other row.
  lambda(N - 1, N - 1) = 1;
  lambda(N - 1, 0) = field.neg(field.inv(I(N)));
  s.Lambda = lambda;

  // b_N(i) = -(1 + lambda_i) / (1 + lambda_N) = N / ((N - 1)(N - i)).
  s.key_map = Matrix(field, N - 1, N);
  for (std::size_t i = 1; i < N; ++i) {
    s.key_map(i - 1, i - 1) = 1;
    s.key_map(i - 1, N - 1) = field.div(I(N), field.mul(I(N - 1), I(N - i)));
  }
  FillInverses(s);
  LambdaConditions cond = CheckLambdaConditions(s);
  if (!cond.mds || !cond.support || !cond.cancel) {
    throw Error(ErrorCode::kConstructionFailed,
                "closed-form scheme violates its algebraic conditions");
  }
  return s;
}

LambdaConditions CheckLambdaConditions(const Scheme& s) {
  LambdaConditions out;
  if (s.variant != Variant::kBLambda || !s.Lambda) return out;
  const Matrix& lambda = *s.Lambda;
  out.mds = s.key_map.rows() <= s.key_map.cols() && gf::IsMds(s.key_map) &&
            gf::IsMds(s.D);
  out.support = true;
  for (std::size_t i = 1; i <= s.topology.N(); ++i) {
    for (std::size_t j = 1; j <= s.topology.K(); ++j) {
      if (!s.topology.linked(i, j) && lambda(i - 1, j - 1) != 0) {
        out.support = false;
      }
    }
  }
  out.cancel =
      gf::Multiply(gf::Multiply(s.key_map, lambda), s.D.transpose()).is_zero();
  return out;
}

bool CheckLocalInverses(const Scheme& s) {
  for (std::size_t i = 1; i <= s.topology.N(); ++i) {
    Matrix product = gf::Multiply(s.E[i - 1], LocalDecoder(s, i));
    if (!(product == Matrix::Identity(s.field, s.topology.n()))) return false;
  }
  return true;
}

bool CheckKeyCancellation(const Scheme& s) {
  return gf::Multiply(LinkKeyCoefficients(s), DecodeStack(s)).is_zero();
}

KeyMaterial DeriveKeys(const Scheme& s, const Matrix& seeds) {
  if (seeds.rows() != s.seed_count) {
    throw Error(ErrorCode::kShapeError,
                "expected " + std::to_string(s.seed_count) + " seed rows");
  }
  // Keys as rows: (key_map^T) seeds, one column per block column.
  Matrix all = gf::Multiply(s.key_map.transpose(), seeds);
  const std::size_t len = KeyLength(s);
  KeyMaterial out{seeds, {}};
  for (std::size_t i = 0; i < s.topology.N(); ++i) {
    std::vector<std::size_t> rows(len);
    std::iota(rows.begin(), rows.end(), i * len);
    out.per_user.push_back(all.select_rows(rows));
  }
  return out;
}

KeyMaterial SampleKeys(const Scheme& s, std::size_t block, std::uint64_t seed) {
  if (block == 0) {
    throw Error(ErrorCode::kInvalidArgument, "block width must be positive");
  }
  Rng rng(seed);
  return DeriveKeys(s, RandomMatrix(s.field, s.seed_count, block, rng));
}

std::vector<Residue> LinkKey(const Scheme& s, const KeyMaterial& keys,
                             std::size_t user, std::size_t relay) {
  const Matrix& z = keys.per_user[user - 1];
  if (s.variant == Variant::kA) {
    auto row = z.row(s.topology.pos(user, relay));
    return {row.begin(), row.end()};
  }
  Residue lambda = (*s.Lambda)(user - 1, relay - 1);
  std::vector<Residue> out(z.cols());
  for (std::size_t c = 0; c < z.cols(); ++c) {
    out[c] = s.field.mul(lambda, z(0, c));
  }
  return out;
}

RateTuple Rates(const Scheme& s) {
  auto n = static_cast<std::int64_t>(s.topology.n());
  return {Rational(1, n), Rational(1, n),
          Rational(static_cast<std::int64_t>(KeyLength(s)), n),
          Rational(static_cast<std::int64_t>(s.seed_count), n)};
}

}  // namespace hsa
