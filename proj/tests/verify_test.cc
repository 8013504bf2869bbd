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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hsa/error.h"
#include "hsa/protocol.h"
#include "hsa/rng.h"

namespace hsa {
namespace {

using gf::Field;
using gf::Matrix;

Scheme WorkedExample(std::uint64_t q = 5) {
  Field f(q);
  return BuildSchemeA(Topology::Cyclic(3, 2), f,
                      Matrix::FromRows(f, {{1, 0, 1}, {0, 1, 1}}));
}

Scheme ZeroKeys(Scheme s) {
  s.key_map = Matrix(s.field, s.key_map.rows(), s.key_map.cols());
  return s;
}

Matrix RandomMatrix(const Field& f, std::size_t rows, std::size_t cols,
                    Rng& rng) {
  Matrix m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = static_cast<gf::Residue>(rng.Below(f.q()));
    }
  }
  return m;
}

TEST(ViewTest, WorkedExampleRelayOne) {
  Scheme s = WorkedExample();
  LinearView v = AdversaryView(s, {{1}, {}});
  ASSERT_EQ(v.row_labels.size(), 2u);
  EXPECT_EQ(v.row_labels[0], std::make_pair(std::size_t{1}, std::size_t{1}));
  EXPECT_EQ(v.row_labels[1], std::make_pair(std::size_t{3}, std::size_t{1}));
  EXPECT_EQ(v.c_w, Matrix::FromRows(s.field, {{1, 0, 0, 0, 0, 0},
                                              {0, 0, 0, 0, 1, -1}}));
  EXPECT_EQ(v.c_r, Matrix::FromRows(s.field, {{1, 0, 0, 0}, {-1, 1, 1, 0}}));
}

TEST(ViewTest, RowsReconstructMessages) {
  Scheme s = BuildSchemeB(Topology::Cyclic(6, 2), Field(13), 1, 2);
  Rng rng(6);
  std::vector<Matrix> inputs;
  Matrix w_flat(s.field, 12, 1);
  for (std::size_t i = 0; i < 6; ++i) {
    inputs.push_back(RandomMatrix(s.field, 2, 1, rng));
    w_flat(2 * i, 0) = inputs.back()(0, 0);
    w_flat(2 * i + 1, 0) = inputs.back()(1, 0);
  }
  Matrix seeds = RandomMatrix(s.field, s.seed_count, 1, rng);
  Transcript tr = RunRoundWithKeys(s, inputs, DeriveKeys(s, seeds));
  LinearView v = AdversaryView(s, {{2, 5}, {}});
  EXPECT_EQ(v.row_labels.size(), 4u);
  Matrix predicted = gf::Add(gf::Multiply(v.c_w, w_flat),
                             gf::Multiply(v.c_r, seeds));
  for (std::size_t r = 0; r < v.row_labels.size(); ++r) {
    EXPECT_EQ(predicted(r, 0), tr.x_msgs.at(v.row_labels[r])[0]);
  }
}

TEST(ViewTest, SchemeCRelayTwo) {
  Scheme s = BuildSchemeC(5, Field(7));
  LinearView v = AdversaryView(s, {{2}, {}});
  ASSERT_EQ(v.row_labels.size(), 2u);
  // Relay 2 hears users 1 and 2; Z_1 = R_1 weighted by lambda_1 = 4.
  EXPECT_EQ(v.c_r, Matrix::FromRows(s.field, {{4, 0, 0, 0}, {0, 1, 0, 0}}));
}

TEST(ViewTest, EmptyRelaySet) {
  Scheme s = WorkedExample();
  LinearView v = AdversaryView(s, {{}, {1}});
  EXPECT_EQ(v.row_labels.size(), 0u);
  EXPECT_EQ(v.c_w.rows(), 0u);
}

TEST(SecurityRankTest, WorkedExample) {
  Scheme s = WorkedExample();
  EXPECT_TRUE(CheckSecurityRank(s, {{3}, {1}}));
  for (std::size_t j = 1; j <= 3; ++j) {
    for (std::size_t u = 1; u <= 3; ++u) {
      EXPECT_TRUE(CheckSecurityRank(s, {{j}, {u}}));
    }
  }
}

TEST(SecurityRankTest, ZeroKeysLeak) {
  Scheme broken = ZeroKeys(WorkedExample());
  for (std::size_t j = 1; j <= 3; ++j) {
    EXPECT_FALSE(CheckSecurityRank(broken, {{j}, {}}));
  }
}

TEST(SecurityRankTest, SchemeCAllPairs) {
  Scheme s = BuildSchemeC(5, Field(7));
  int checked = 0;
  for (std::size_t j = 1; j <= 5; ++j) {
    for (std::size_t a = 1; a <= 5; ++a) {
      for (std::size_t b = a + 1; b <= 5; ++b) {
        EXPECT_TRUE(CheckSecurityRank(s, {{j}, {a, b}}));
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 50);
}

TEST(IntersectionTest, WorkedExampleBlocks) {
  Scheme s = WorkedExample();
  IntersectionMatrices m = BuildIntersectionMatrices(s, {{1}, {3}});
  EXPECT_EQ(m.M, Matrix::FromRows(s.field, {{1, 0, 0, 0}, {0, 0, 0, 0}}));
  EXPECT_EQ(m.DZ, Matrix::FromRows(s.field, {{1, 0, 0, 1}, {0, 1, 1, 1}}));
  EXPECT_TRUE(CheckTrivialIntersection(s, {{1}, {3}}));
}

TEST(IntersectionTest, NoFreeUsersIsVacuous) {
  EXPECT_TRUE(CheckTrivialIntersection(WorkedExample(), {{2}, {1, 2, 3}}));
}

TEST(IntersectionTest, WrongVariant) {
  try {
    CheckTrivialIntersection(BuildSchemeC(5, Field(7)), {{1}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(IntersectionTest, CyclicFourTwo) {
  Scheme s = BuildSchemeA(Topology::Cyclic(4, 2), Field(5), 1);
  for (const CollusionPattern& p : EnumeratePatterns(4, 4, 1, 1, false)) {
    EXPECT_TRUE(CheckTrivialIntersection(s, p)) << DescribePattern(p);
  }
}

TEST(IntersectionPropertyTest, ImpliesRankSecurity) {
  std::vector<Scheme> schemes;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    schemes.push_back(BuildSchemeA(Topology::Cyclic(5, 2), Field(7), seed));
    schemes.push_back(BuildSchemeA(Topology::Cyclic(5, 3), Field(7), seed));
    schemes.push_back(BuildSchemeA(Topology::MultipleCyclic(4, 2, 2), Field(5), seed));
  }
  for (const Scheme& s : schemes) {
    for (const CollusionPattern& p :
         EnumeratePatterns(s.topology.K(), s.topology.N(), 2, 2, true)) {
      if (CheckTrivialIntersection(s, p)) EXPECT_TRUE(CheckSecurityRank(s, p));
    }
  }
}

TEST(OracleTest, WorkedExampleOverThree) {
  Scheme s = WorkedExample(3);
  std::vector<CollusionPattern> patterns;
  for (std::size_t j = 1; j <= 3; ++j) {
    for (std::size_t u = 1; u <= 3; ++u) patterns.push_back({{j}, {u}});
  }
  for (const OracleResult& r : MiOracle(s, patterns)) {
    EXPECT_TRUE(r.is_zero);
    EXPECT_EQ(r.mi_value, 0.0);
  }
}

TEST(OracleTest, ZeroKeysLeak) {
  OracleResult r = MiOracle(ZeroKeys(WorkedExample(3)), CollusionPattern{{1}, {}});
  EXPECT_FALSE(r.is_zero);
  EXPECT_GT(r.mi_value, 0.0);
}

TEST(OracleTest, NoCollusion) {
  OracleResult r = MiOracle(WorkedExample(3), CollusionPattern{{}, {2}});
  EXPECT_TRUE(r.is_zero);
  EXPECT_EQ(r.mi_value, 0.0);
}

TEST(OracleTest, TwoRelaysLeakOneSymbol) {
  Scheme s = WorkedExample(3);
  OracleResult r = MiOracle(s, CollusionPattern{{1, 2}, {}});
  EXPECT_FALSE(r.is_zero);
  ASSERT_TRUE(r.mi_integer);
  EXPECT_EQ(*r.mi_integer, 1);
  EXPECT_NEAR(r.mi_value, 1.0, 1e-9);
  EXPECT_EQ(SecurityRankDeficit(s, {{1, 2}, {}}), 1u);
}

TEST(OracleTest, CapEnforced) {
  Scheme s = BuildSchemeA(Topology::Cyclic(6, 2), Field(13), 1);
  try {
    MiOracle(s, CollusionPattern{{1}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLargeToEnumerate);
  }
  EXPECT_FALSE(StateCount(s, 1).has_value() &&
               *StateCount(s, 1) <= kDefaultEnumerationCap);
}

// Randomized schemes over small fields, a third of them with a corrupted
// key map, checked pattern by pattern against the rank identity.
TEST(OraclePropertyTest, AgreesWithRankOnRandomInstances) {
  struct Family {
    Topology t;
    std::uint64_t q;
  };
  std::vector<Family> families = {{Topology::Cyclic(3, 1), 3},
                                  {Topology::Tree(2, 2), 3},
                                  {Topology::Cyclic(3, 1), 5},
                                  {Topology::Cyclic(3, 2), 3}};
  Rng rng(31337);
  int instances = 0, broken = 0, leaking = 0;
  for (int round = 0; round < 120; ++round) {
    const Family& fam = families[round % 10 == 0 ? 3 : round % 3];
    Scheme s = BuildSchemeA(fam.t, Field(fam.q), rng.Next());
    if (round % 3 == 0) {
      std::size_t r = rng.Below(s.key_map.rows());
      std::size_t c = rng.Below(s.key_map.cols());
      s.key_map(r, c) = s.field.add(s.key_map(r, c), 1);
      ++broken;
    }
    const std::size_t th = std::min<std::size_t>(2, s.topology.K());
    std::vector<CollusionPattern> patterns =
        EnumeratePatterns(s.topology.K(), s.topology.N(), th, 1, true);
    std::vector<OracleResult> results = MiOracle(s, patterns);
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const std::size_t deficit = SecurityRankDeficit(s, patterns[k]);
      ASSERT_EQ(results[k].is_zero, deficit == 0)
          << "round " << round << " " << DescribePattern(patterns[k]);
      ASSERT_TRUE(results[k].mi_integer);
      EXPECT_EQ(*results[k].mi_integer, static_cast<std::int64_t>(deficit));
      EXPECT_NEAR(results[k].mi_value, static_cast<double>(deficit), 1e-9);
      leaking += deficit > 0;
    }
    ++instances;
  }
  EXPECT_GE(instances, 100);
  EXPECT_GT(broken, 0);
  EXPECT_GT(leaking, 0);
}

TEST(OraclePropertyTest, AgreesOnSchemeC) {
  Scheme s = BuildSchemeC(3, Field(5));
  std::vector<CollusionPattern> patterns = EnumeratePatterns(3, 3, 2, 1, true);
  std::vector<OracleResult> results = MiOracle(s, patterns);
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    EXPECT_EQ(results[k].is_zero, CheckSecurityRank(s, patterns[k]));
  }
}

TEST(EntropyPropertyTest, EnumeratedEntropyIsRank) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    Field f(trial % 2 == 0 ? 2 : 3);
    const std::size_t cols = 1 + rng.Below(5);
    Matrix a = RandomMatrix(f, 1 + rng.Below(3), cols, rng);
    Matrix b = RandomMatrix(f, rng.Below(3), cols, rng);
    const double expected = static_cast<double>(gf::Rank(gf::VStack(a, b))) -
                            static_cast<double>(gf::Rank(b));
    ASSERT_NEAR(EnumeratedConditionalEntropy(a, b), expected, 1e-9)
        << "trial " << trial;
  }
}

TEST(SecurityPropertyTest, DeficitMonotoneInRelays) {
  std::vector<Scheme> schemes = {
      WorkedExample(), ZeroKeys(WorkedExample()),
      BuildSchemeA(Topology::Cyclic(5, 2), Field(7), 3),
      BuildSchemeB(Topology::Cyclic(6, 2), Field(13), 1, 1),
      BuildSchemeC(6, Field(11))};
  for (const Scheme& s : schemes) {
    const std::size_t th = std::min<std::size_t>(3, s.topology.K());
    for (const CollusionPattern& p :
         EnumeratePatterns(s.topology.K(), s.topology.N(), th, 1, true)) {
      const std::size_t full = SecurityRankDeficit(s, p);
      for (std::size_t drop = 0; drop < p.relays.size(); ++drop) {
        CollusionPattern smaller = p;
        smaller.relays.erase(smaller.relays.begin() + static_cast<long>(drop));
        EXPECT_LE(SecurityRankDeficit(s, smaller), full);
      }
    }
  }
  // Same check on enumerated values.
  Scheme s = ZeroKeys(WorkedExample(3));
  for (const CollusionPattern& p : EnumeratePatterns(3, 3, 2, 1, true)) {
    if (p.relays.size() < 2) continue;
    CollusionPattern smaller = p;
    smaller.relays.pop_back();
    EXPECT_LE(MiOracle(s, smaller).mi_value, MiOracle(s, p).mi_value + 1e-9);
  }
}

TEST(DecodabilityTest, ExhaustiveWorkedExample) {
  DecodabilityResult r = CheckDecodability(WorkedExample(3), DecodeMode::kExhaustive);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.certificate);
  EXPECT_EQ(r.rounds, 59049u);
  EXPECT_EQ(r.mismatches, 0u);
}

TEST(DecodabilityTest, SampledSchemeC) {
  DecodabilityResult r =
      CheckDecodability(BuildSchemeC(5, Field(7)), DecodeMode::kSampled, 10000);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.rounds, 10000u);
}

TEST(DecodabilityTest, PerturbedKeyMapFails) {
  Scheme s = WorkedExample(5);
  s.key_map(0, 4) = s.field.add(s.key_map(0, 4), 1);
  DecodabilityResult r = CheckDecodability(s, DecodeMode::kSampled, 500);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.certificate);
  EXPECT_GT(r.mismatches, 0u);
}

TEST(DecodabilityTest, ExhaustiveCap) {
  EXPECT_THROW(CheckDecodability(BuildSchemeC(7, Field(11)),
                                 DecodeMode::kExhaustive),
               Error);
}

TEST(PatternsTest, Counts) {
  EXPECT_EQ(EnumeratePatterns(3, 3, 1, 1, false).size(), 9u);
  EXPECT_EQ(EnumeratePatterns(6, 6, 1, 2, false).size(), 90u);
  // Relay sizes 1..2 (3 + 3) times user sizes 0..1 (1 + 3).
  EXPECT_EQ(EnumeratePatterns(3, 3, 2, 1, true).size(), 24u);
}

TEST(SweepTest, SchemeAFullSweep) {
  SweepReport r = SweepSecurity(WorkedExample(), 1, 1, {});
  EXPECT_EQ(r.total_patterns, 9u);
  EXPECT_EQ(r.passed, 9u);
  EXPECT_TRUE(r.all_pass());
}

TEST(SweepTest, SchemeBFullSweep) {
  SweepReport r = SweepSecurity(
      BuildSchemeB(Topology::Cyclic(6, 2), Field(13), 2, 1), 1, 2, {});
  EXPECT_EQ(r.checked, 90u);
  EXPECT_TRUE(r.all_pass());
}

TEST(SweepTest, InfeasibleBudgetFindsCounterexample) {
  SweepReport r = SweepSecurity(WorkedExample(), 2, 0, {});
  EXPECT_GT(r.failed, 0u);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->relays.size(), 2u);
}

TEST(SweepTest, OracleCrossCheck) {
  SweepOptions opts;
  opts.use_oracle = true;
  opts.all_sizes = true;
  SweepReport r = SweepSecurity(WorkedExample(3), 1, 1, opts);
  EXPECT_TRUE(r.oracle_run);
  EXPECT_EQ(r.oracle_disagreements, 0u);
  EXPECT_TRUE(r.all_pass());
}

TEST(SweepTest, Subsampling) {
  SweepOptions opts;
  opts.budget = 20;
  SweepReport r = SweepSecurity(
      BuildSchemeB(Topology::Cyclic(6, 2), Field(13), 2, 1), 1, 2, opts);
  EXPECT_TRUE(r.subsampled);
  EXPECT_EQ(r.checked, 20u);
  EXPECT_EQ(r.total_patterns, 90u);
  SweepOptions again = opts;
  again.threads = 1;
  SweepReport serial = SweepSecurity(
      BuildSchemeB(Topology::Cyclic(6, 2), Field(13), 2, 1), 1, 2, again);
  EXPECT_EQ(serial.checked, r.checked);
  EXPECT_EQ(serial.passed, r.passed);
}

TEST(ConverseTest, WorkedExample) {
  Scheme s = WorkedExample();
  ConverseChecks c = RunConverseChecks(s);
  EXPECT_TRUE(c.link_keys_determined);
  EXPECT_NEAR(c.key_entropy_sum, 6.0, 1e-9);
  EXPECT_NEAR(c.input_length, 2.0, 1e-9);
  EXPECT_TRUE(c.sum_bound);
  EXPECT_TRUE(c.sum_tight);
  EXPECT_NEAR(KeyEntropy(s, {{3, 1}}, {{1, 0}, {2, 0}}), 0.0, 1e-9);
  EXPECT_NEAR(KeyEntropy(s, {{1, 0}}, {}), 2.0, 1e-9);
  EXPECT_NEAR(KeyEntropy(s, {{1, 0}, {2, 0}, {3, 0}}, {}), 4.0, 1e-9);
}

}  // namespace
}  // namespace hsa
