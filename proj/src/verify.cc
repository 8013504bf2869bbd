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

#include "hsa/verify.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>

#include "hsa/error.h"
#include "hsa/protocol.h"
#include "hsa/rng.h"

namespace hsa {

namespace {

using gf::Matrix;
using gf::Residue;

constexpr double kEps = 1e-9;

void ParallelFor(std::size_t count, std::size_t workers,
                 const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::optional<std::uint64_t> CheckedPower(std::uint64_t base,
                                          std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t e = 0; e < exp; ++e) {
    if (out > UINT64_MAX / base) return std::nullopt;
    out *= base;
  }
  return out;
}

std::uint64_t RequireEnumerable(std::uint64_t q, std::uint64_t digits,
                                std::uint64_t cap) {
  auto states = CheckedPower(q, digits);
  if (!states || *states > cap) {
    throw Error(ErrorCode::kTooLargeToEnumerate,
                std::to_string(q) + "^" + std::to_string(digits) +
                    " states exceed the cap of " + std::to_string(cap));
  }
  return *states;
}

// Residues packed into a byte string, used as hash keys for tallies.
class KeyWriter {
 public:
  explicit KeyWriter(std::uint64_t q) : wide_(q > 256) {}
  void Put(Residue r, std::string& out) const {
    if (!wide_) {
      out.push_back(static_cast<char>(r));
      return;
    }
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>(r >> (8 * b)));
  }

 private:
  bool wide_;
};

// Little-endian base-q digits of a state index.
void Digits(std::uint64_t index, std::uint64_t q, std::vector<Residue>& out) {
  for (auto& d : out) {
    d = static_cast<Residue>(index % q);
    index /= q;
  }
}

struct Observation {
  std::vector<Matrix> inputs;
  KeyMaterial keys;
};

// Splits state digits into inputs (user-major, then coordinate, then block
// column) and seeds (row-major).
Observation Decompose(const Scheme& s, const std::vector<Residue>& digits,
                      std::size_t block) {
  const Topology& t = s.topology;
  Observation obs;
  std::size_t d = 0;
  for (std::size_t i = 0; i < t.N(); ++i) {
    Matrix w(s.field, t.n(), block);
    for (std::size_t p = 0; p < t.n(); ++p) {
      for (std::size_t c = 0; c < block; ++c) w(p, c) = digits[d++];
    }
    obs.inputs.push_back(std::move(w));
  }
  Matrix seeds(s.field, s.seed_count, block);
  for (std::size_t r = 0; r < s.seed_count; ++r) {
    for (std::size_t c = 0; c < block; ++c) seeds(r, c) = digits[d++];
  }
  obs.keys = DeriveKeys(s, seeds);
  return obs;
}

Matrix UnitRows(const gf::Field& f, std::size_t width,
                const std::vector<std::size_t>& cols) {
  Matrix m(f, cols.size(), width);
  for (std::size_t r = 0; r < cols.size(); ++r) m(r, cols[r]) = 1;
  return m;
}

// Exact joint tallies. Each outcome is a base-q number; the radices are
// checked up front so the packed keys never overflow.
using Code = unsigned __int128;

struct CodeHash {
  std::size_t operator()(Code x) const {
    std::uint64_t h = static_cast<std::uint64_t>(x) ^
                      (static_cast<std::uint64_t>(x >> 64) * 0x9e3779b97f4a7c15ULL);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

using CodeCounts = std::unordered_map<Code, std::uint64_t, CodeHash>;

struct Tally {
  struct PerC {
    std::uint64_t n = 0;
    std::uint64_t distinct_w = 0;
    std::uint64_t distinct_v = 0;
    std::uint64_t distinct_wv = 0;
  };
  Code radix_w = 1;
  Code radix_v = 1;
  CodeCounts wvc, wc, vc;
  std::unordered_map<Code, PerC, CodeHash> c;

  void Add(Code w, Code v, Code cc) {
    PerC& pc = c[cc];
    ++pc.n;
    const Code key_vc = cc * radix_v + v;
    if (wc[cc * radix_w + w]++ == 0) ++pc.distinct_w;
    if (vc[key_vc]++ == 0) ++pc.distinct_v;
    if (wvc[key_vc * radix_w + w]++ == 0) ++pc.distinct_wv;
  }
};

// q^digits, or nullopt once it would pass 2^126.
std::optional<Code> Radix(std::uint64_t q, std::size_t digits) {
  const Code limit = Code{1} << 126;
  Code out = 1;
  for (std::size_t d = 0; d < digits; ++d) {
    if (out > limit / q) return std::nullopt;
    out *= q;
  }
  return out;
}

void Push(Code& code, std::uint64_t q, Residue r) { code = code * q + r; }

// Separator-free keys would be ambiguous for variable-length fields, so the
// conditioning part carries its own length prefix.
std::string Framed(const std::string& body) {
  std::string out;
  std::uint32_t len = static_cast<std::uint32_t>(body.size());
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>(len >> (8 * b)));
  return out + body;
}

OracleResult Evaluate(const Tally& tally, std::uint64_t total,
                      std::uint64_t q) {
  OracleResult out;
  out.is_zero = true;
  for (const auto& [cc, pc] : tally.c) {
    if (pc.distinct_wv != pc.distinct_w * pc.distinct_v) out.is_zero = false;
  }
  double mi = 0.0;
  for (const auto& [key, n_wvc] : tally.wvc) {
    const Code w = key % tally.radix_w;
    const Code key_vc = key / tally.radix_w;
    const Code cc = key_vc / tally.radix_v;
    std::uint64_t n_c = tally.c.at(cc).n;
    std::uint64_t n_wc = tally.wc.at(cc * tally.radix_w + w);
    std::uint64_t n_vc = tally.vc.at(key_vc);
    unsigned __int128 lhs = static_cast<unsigned __int128>(n_wvc) * n_c;
    unsigned __int128 rhs = static_cast<unsigned __int128>(n_wc) * n_vc;
    if (lhs != rhs) out.is_zero = false;
    mi += static_cast<double>(n_wvc) / static_cast<double>(total) *
          std::log(static_cast<double>(lhs) / static_cast<double>(rhs));
  }
  out.mi_value = mi / std::log(static_cast<double>(q));
  if (out.is_zero) out.mi_value = 0.0;
  // Support sizes give the exact value when every conditional law is uniform.
  double support_value =
      (std::log(static_cast<double>(tally.wc.size())) +
       std::log(static_cast<double>(tally.vc.size())) -
       std::log(static_cast<double>(tally.wvc.size())) -
       std::log(static_cast<double>(tally.c.size()))) /
      std::log(static_cast<double>(q));
  double rounded = std::round(support_value);
  if (std::abs(support_value - rounded) < kEps &&
      std::abs(out.mi_value - rounded) < kEps) {
    out.mi_integer = static_cast<std::int64_t>(rounded);
  }
  return out;
}

Code PatternSideCode(const CollusionPattern& p, const Observation& obs,
                     std::uint64_t q) {
  Code out = 0;
  for (std::size_t i : p.users) {
    for (Residue r : obs.inputs[i - 1].entries()) Push(out, q, r);
    for (Residue r : obs.keys.per_user[i - 1].entries()) Push(out, q, r);
  }
  return out;
}

}  // namespace

std::string DescribePattern(const CollusionPattern& p) {
  auto list = [](const std::vector<std::size_t>& xs) {
    std::string out = "{";
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(xs[k]);
    }
    return out + "}";
  };
  return "relays " + list(p.relays) + " users " + list(p.users);
}

void ValidatePattern(const Scheme& s, const CollusionPattern& p) {
  auto check = [](const std::vector<std::size_t>& xs, std::size_t hi,
                  const char* what) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (xs[k] < 1 || xs[k] > hi || (k > 0 && xs[k] <= xs[k - 1])) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(what) + " ids must be sorted, distinct and in "
                                        "range");
      }
    }
  };
  check(p.relays, s.topology.K(), "relay");
  check(p.users, s.topology.N(), "user");
}

LinearView AdversaryView(const Scheme& s, const CollusionPattern& p) {
  ValidatePattern(s, p);
  const Topology& t = s.topology;
  Matrix links = LinkKeyCoefficients(s);
  std::size_t rows = 0;
  for (std::size_t j : p.relays) rows += t.U(j).size();
  LinearView view{Matrix(s.field, rows, t.N() * t.n()),
                  Matrix(s.field, rows, s.seed_count), {}};
  std::size_t r = 0;
  for (std::size_t j : p.relays) {
    for (std::size_t i : t.U(j)) {
      std::size_t pos = t.pos(i, j);
      for (std::size_t c = 0; c < t.n(); ++c) {
        view.c_w(r, (i - 1) * t.n() + c) = s.E[i - 1](pos, c);
      }
      for (std::size_t c = 0; c < s.seed_count; ++c) {
        view.c_r(r, c) = links(c, (i - 1) * t.n() + pos);
      }
      view.row_labels.emplace_back(i, j);
      ++r;
    }
  }
  return view;
}

Matrix CollusionSideInfo(const Scheme& s, const CollusionPattern& p,
                         bool all_inputs) {
  const Topology& t = s.topology;
  const std::size_t w_width = t.N() * t.n();
  const std::size_t width = w_width + s.seed_count;
  std::vector<std::size_t> w_cols;
  for (std::size_t i = 1; i <= t.N(); ++i) {
    bool known = all_inputs ||
                 std::binary_search(p.users.begin(), p.users.end(), i);
    if (!known) continue;
    for (std::size_t c = 0; c < t.n(); ++c) w_cols.push_back((i - 1) * t.n() + c);
  }
  Matrix out = UnitRows(s.field, width, w_cols);
  const std::size_t len = KeyLength(s);
  for (std::size_t i : p.users) {
    Matrix z(s.field, len, width);
    for (std::size_t k = 0; k < len; ++k) {
      for (std::size_t r = 0; r < s.seed_count; ++r) {
        z(k, w_width + r) = s.key_map(r, (i - 1) * len + k);
      }
    }
    out = gf::VStack(out, z);
  }
  return out;
}

std::size_t SecurityRankDeficit(const Scheme& s, const CollusionPattern& p) {
  LinearView view = AdversaryView(s, p);
  if (view.c_w.rows() == 0) return 0;
  Matrix a = gf::HStack(view.c_w, view.c_r);
  Matrix b = CollusionSideInfo(s, p, false);
  Matrix f = CollusionSideInfo(s, p, true);
  std::size_t given_side = gf::Rank(gf::VStack(a, b)) - gf::Rank(b);
  std::size_t given_all = gf::Rank(gf::VStack(a, f)) - gf::Rank(f);
  return given_side - given_all;
}

bool CheckSecurityRank(const Scheme& s, const CollusionPattern& p) {
  return SecurityRankDeficit(s, p) == 0;
}

IntersectionMatrices BuildIntersectionMatrices(const Scheme& s, const CollusionPattern& p) {
  if (s.variant != Variant::kA) {
    throw Error(ErrorCode::kInvalidArgument,
                "the link-key incidence test applies to variant A only");
  }
  ValidatePattern(s, p);
  const Topology& t = s.topology;
  std::vector<std::size_t> free_users;
  for (std::size_t i = 1; i <= t.N(); ++i) {
    if (!std::binary_search(p.users.begin(), p.users.end(), i)) {
      free_users.push_back(i);
    }
  }
  const std::size_t width = free_users.size() * t.n();
  std::size_t rows = 0;
  for (std::size_t j : p.relays) rows += t.U(j).size();
  IntersectionMatrices out{Matrix(s.field, rows, width),
                     Matrix(s.field, t.n(), width)};
  std::size_t r = 0;
  for (std::size_t j : p.relays) {
    for (std::size_t i : t.U(j)) {
      auto it = std::find(free_users.begin(), free_users.end(), i);
      if (it != free_users.end()) {
        std::size_t block = static_cast<std::size_t>(it - free_users.begin());
        out.M(r, block * t.n() + t.pos(i, j)) = 1;
      }
      ++r;
    }
  }
  for (std::size_t b = 0; b < free_users.size(); ++b) {
    Matrix d = LocalDecoder(s, free_users[b]);
    for (std::size_t rr = 0; rr < t.n(); ++rr) {
      for (std::size_t c = 0; c < t.n(); ++c) {
        out.DZ(rr, b * t.n() + c) = d(rr, c);
      }
    }
  }
  return out;
}

bool CheckTrivialIntersection(const Scheme& s, const CollusionPattern& p) {
  IntersectionMatrices m = BuildIntersectionMatrices(s, p);
  if (m.M.cols() == 0) return true;
  return gf::Rank(gf::VStack(m.M, m.DZ)) == gf::Rank(m.M) + gf::Rank(m.DZ);
}

std::optional<std::uint64_t> StateCount(const Scheme& s, std::size_t block) {
  return CheckedPower(
      s.field.q(),
      (s.topology.N() * s.topology.n() + s.seed_count) * block);
}

std::vector<OracleResult> MiOracle(const Scheme& s,
                                   const std::vector<CollusionPattern>& patterns,
                                   std::size_t block, std::uint64_t cap) {
  for (const auto& p : patterns) ValidatePattern(s, p);
  const Topology& t = s.topology;
  const std::uint64_t q = s.field.q();
  const std::size_t w_digits = t.N() * t.n() * block;
  const std::size_t digits = w_digits + s.seed_count * block;
  const std::uint64_t states = RequireEnumerable(q, digits, cap);
  const std::size_t workers = WorkerCount();

  std::vector<Tally> tallies(patterns.size());
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    const CollusionPattern& p = patterns[pi];
    std::size_t view_digits = 0;
    for (std::size_t j : p.relays) view_digits += t.U(j).size() * block;
    const std::size_t side_digits =
        p.users.size() * (t.n() + KeyLength(s)) * block;
    auto rw = Radix(q, w_digits);
    auto rv = Radix(q, view_digits);
    auto all = Radix(q, w_digits + view_digits + side_digits);
    if (!rw || !rv || !all) {
      throw Error(ErrorCode::kTooLargeToEnumerate,
                  "outcomes of " + DescribePattern(p) + " are too wide to tally");
    }
    tallies[pi].radix_w = *rw;
    tallies[pi].radix_v = *rv;
  }

  constexpr std::uint64_t kChunk = 4096;
  std::vector<Transcript> chunk;
  std::vector<Observation> observations;
  std::vector<Code> input_codes;
  for (std::uint64_t begin = 0; begin < states; begin += kChunk) {
    const std::size_t len =
        static_cast<std::size_t>(std::min(kChunk, states - begin));
    chunk.assign(len, Transcript{});
    observations.assign(len, Observation{});
    input_codes.assign(len, 0);
    ParallelFor(len, workers, [&](std::size_t k) {
      std::vector<Residue> d(digits);
      Digits(begin + k, q, d);
      observations[k] = Decompose(s, d, block);
      chunk[k] = RunRoundWithKeys(s, observations[k].inputs,
                                  observations[k].keys);
      for (const Matrix& in : observations[k].inputs) {
        for (Residue r : in.entries()) Push(input_codes[k], q, r);
      }
    });
    ParallelFor(patterns.size(), workers, [&](std::size_t pi) {
      const CollusionPattern& p = patterns[pi];
      for (std::size_t k = 0; k < len; ++k) {
        Code v = 0;
        for (std::size_t j : p.relays) {
          for (std::size_t i : t.U(j)) {
            for (Residue r : chunk[k].x_msgs.at({i, j})) Push(v, q, r);
          }
        }
        tallies[pi].Add(input_codes[k], v,
                        PatternSideCode(p, observations[k], q));
      }
    });
  }
  std::vector<OracleResult> out(patterns.size());
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    out[pi] = Evaluate(tallies[pi], states, q);
  }
  return out;
}

OracleResult MiOracle(const Scheme& s, const CollusionPattern& p,
                      std::size_t block, std::uint64_t cap) {
  return MiOracle(s, std::vector<CollusionPattern>{p}, block, cap).front();
}

DecodabilityResult CheckDecodability(const Scheme& s, DecodeMode mode,
                                     std::uint64_t samples, std::size_t block,
                                     std::uint64_t seed, std::uint64_t cap) {
  const std::uint64_t q = s.field.q();
  const std::size_t digits =
      (s.topology.N() * s.topology.n() + s.seed_count) * block;
  DecodabilityResult out;
  out.certificate = CheckLocalInverses(s) && CheckKeyCancellation(s);
  std::uint64_t rounds = samples;
  if (mode == DecodeMode::kExhaustive) {
    rounds = RequireEnumerable(q, digits, cap);
  }
  Rng rng(seed);
  std::vector<Residue> d(digits);
  for (std::uint64_t k = 0; k < rounds; ++k) {
    if (mode == DecodeMode::kExhaustive) {
      Digits(k, q, d);
    } else {
      for (auto& x : d) x = static_cast<Residue>(rng.Below(q));
    }
    Observation obs = Decompose(s, d, block);
    Transcript tr = RunRoundWithKeys(s, std::move(obs.inputs),
                                     std::move(obs.keys));
    if (tr.mismatch) ++out.mismatches;
  }
  out.rounds = rounds;
  out.simulation = out.mismatches == 0;
  out.ok = out.certificate && out.simulation;
  return out;
}

std::vector<CollusionPattern> EnumeratePatterns(std::size_t num_relays,
                                                std::size_t num_users,
                                                std::size_t relay_budget,
                                                std::size_t user_budget,
                                                bool all_sizes) {
  auto subsets = [](std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 1);
    while (true) {
      out.push_back(pick);
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i) --i;
      if (i == 0) return out;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  };
  std::vector<CollusionPattern> out;
  std::size_t relay_lo = all_sizes ? 1 : relay_budget;
  std::size_t user_lo = all_sizes ? 0 : user_budget;
  for (std::size_t a = relay_lo; a <= std::min(relay_budget, num_relays); ++a) {
    for (const auto& relays : subsets(num_relays, a)) {
      for (std::size_t b = user_lo; b <= std::min(user_budget, num_users);
           ++b) {
        for (const auto& users : subsets(num_users, b)) {
          out.push_back({relays, users});
        }
      }
    }
  }
  return out;
}

std::size_t WorkerCount(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HSA_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepReport SweepSecurity(const Scheme& s, std::size_t relay_budget,
                          std::size_t user_budget, const SweepOptions& opts) {
  std::vector<CollusionPattern> patterns =
      EnumeratePatterns(s.topology.K(), s.topology.N(), relay_budget,
                        user_budget, opts.all_sizes);
  SweepReport report;
  report.total_patterns = patterns.size();
  if (patterns.size() > opts.budget) {
    Rng rng(opts.seed);
    std::vector<std::size_t> idx(patterns.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = 0; k < opts.budget; ++k) {
      std::swap(idx[k], idx[k + rng.Below(idx.size() - k)]);
    }
    idx.resize(opts.budget);
    std::sort(idx.begin(), idx.end());
    std::vector<CollusionPattern> kept;
    for (std::size_t k : idx) kept.push_back(std::move(patterns[k]));
    patterns = std::move(kept);
    report.subsampled = true;
  }
  report.checked = patterns.size();
  std::vector<char> verdicts(patterns.size(), 0);
  ParallelFor(patterns.size(), WorkerCount(opts.threads), [&](std::size_t k) {
    verdicts[k] = CheckSecurityRank(s, patterns[k]) ? 1 : 0;
  });
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    if (verdicts[k]) {
      ++report.passed;
    } else {
      ++report.failed;
      if (!report.counterexample) report.counterexample = patterns[k];
    }
  }
  if (opts.use_oracle) {
    auto states = StateCount(s, 1);
    if (!states || *states > opts.enumeration_cap) {
      report.oracle_skipped_cap = true;
    } else {
      auto oracle = MiOracle(s, patterns, 1, opts.enumeration_cap);
      report.oracle_run = true;
      for (std::size_t k = 0; k < patterns.size(); ++k) {
        if (oracle[k].is_zero != static_cast<bool>(verdicts[k])) {
          ++report.oracle_disagreements;
        }
      }
    }
  }
  return report;
}

double EnumeratedConditionalEntropy(const Matrix& A, const Matrix& B,
                                    std::uint64_t cap) {
  if (A.cols() != B.cols()) {
    throw Error(ErrorCode::kShapeError, "A and B must share the seed width");
  }
  const std::uint64_t q = A.field().q();
  const std::uint64_t states = RequireEnumerable(q, A.cols(), cap);
  const KeyWriter kw(q);
  std::unordered_map<std::string, std::uint64_t> joint, given;
  std::vector<Residue> x(A.cols());
  Matrix col(A.field(), A.cols(), 1);
  for (std::uint64_t k = 0; k < states; ++k) {
    Digits(k, q, x);
    for (std::size_t c = 0; c < x.size(); ++c) col(c, 0) = x[c];
    std::string a, b;
    const Matrix ax = gf::Multiply(A, col);
    const Matrix bx = gf::Multiply(B, col);
    for (Residue r : ax.entries()) kw.Put(r, a);
    for (Residue r : bx.entries()) kw.Put(r, b);
    ++given[b];
    ++joint[Framed(b) + a];
  }
  auto entropy = [&](const std::unordered_map<std::string, std::uint64_t>& m) {
    double h = 0.0;
    for (const auto& [k, n] : m) {
      double p = static_cast<double>(n) / static_cast<double>(states);
      h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(q));
  };
  return entropy(joint) - entropy(given);
}

double KeyEntropy(const Scheme& s, const std::vector<KeyName>& target,
                  const std::vector<KeyName>& given, std::size_t block,
                  std::uint64_t cap) {
  const std::uint64_t q = s.field.q();
  const std::uint64_t states = RequireEnumerable(q, s.seed_count * block, cap);
  const KeyWriter kw(q);
  std::unordered_map<std::string, std::uint64_t> joint, cond;
  std::vector<Residue> d(s.seed_count * block);
  auto put = [&](const KeyMaterial& keys, const KeyName& name,
                 std::string& out) {
    if (name.second == 0) {
      for (Residue r : keys.per_user[name.first - 1].entries()) kw.Put(r, out);
    } else {
      for (Residue r : LinkKey(s, keys, name.first, name.second)) {
        kw.Put(r, out);
      }
    }
  };
  for (std::uint64_t k = 0; k < states; ++k) {
    Digits(k, q, d);
    Matrix seeds(s.field, s.seed_count, block);
    for (std::size_t r = 0; r < s.seed_count; ++r) {
      for (std::size_t c = 0; c < block; ++c) seeds(r, c) = d[r * block + c];
    }
    KeyMaterial keys = DeriveKeys(s, seeds);
    std::string a, b;
    for (const auto& name : target) put(keys, name, a);
    for (const auto& name : given) put(keys, name, b);
    ++cond[b];
    ++joint[Framed(b) + a];
  }
  auto entropy = [&](const std::unordered_map<std::string, std::uint64_t>& m) {
    double h = 0.0;
    for (const auto& [key, n] : m) {
      double p = static_cast<double>(n) / static_cast<double>(states);
      h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(q));
  };
  return entropy(joint) - entropy(cond);
}

ConverseChecks RunConverseChecks(const Scheme& s, std::size_t block,
                                 std::uint64_t cap) {
  const Topology& t = s.topology;
  if (t.N() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "the three-user key checks need N = 3");
  }
  ConverseChecks out;
  out.link_keys_determined = true;
  for (std::size_t i = 1; i <= 3; ++i) {
    std::vector<KeyName> others;
    for (std::size_t k = 1; k <= 3; ++k) {
      if (k != i) others.emplace_back(k, 0);
    }
    for (std::size_t j : t.H(i)) {
      double h = KeyEntropy(s, {{i, j}}, others, block, cap);
      if (std::abs(h) > kEps) out.link_keys_determined = false;
    }
    out.key_entropy_sum += KeyEntropy(s, {{i, 0}}, {}, block, cap);
  }
  out.input_length = static_cast<double>(t.n() * block);
  out.sum_bound = out.key_entropy_sum >= 3 * out.input_length - kEps;
  out.sum_tight = std::abs(out.key_entropy_sum - 3 * out.input_length) < kEps;
  return out;
}

}  // namespace hsa
