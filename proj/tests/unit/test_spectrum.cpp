#include <gtest/gtest.h>

#include <cmath>

#include "bcfdim/errors.hpp"
#include "bcfdim/spectrum.hpp"

namespace bcfdim {
namespace {

const SystemSpec kBcf = make_system(Family::BCF);

TEST(Greedy, TargetZeroKeepsOneIndex) {
  const SpectrumResult r = greedy_build(kBcf, parse_alphabet("3.."), 0.0, 8, 1e-3);
  EXPECT_EQ(r.chosen, std::vector<int>{3});
  EXPECT_EQ(r.achieved.t_hi, 0.0);
  EXPECT_EQ(r.step_log.size(), 6u);
  EXPECT_TRUE(r.certified);
}

TEST(Greedy, TargetBelowHalf) {
  const double target = 0.45;
  const SpectrumResult r = greedy_build(kBcf, parse_alphabet("3.."), target, 12, 1e-3);
  ASSERT_FALSE(r.chosen.empty());
  EXPECT_LE(r.achieved.t_hi, target);
  EXPECT_GE(r.achieved.t_lo, target - 0.05);

  // Independent recheck of the final set.
  const DimensionBracket again = dimension_bracket(kBcf, AlphabetSpec(r.chosen));
  EXPECT_LE(again.t_hi, target);
  EXPECT_LE(again.t_lo, r.achieved.t_hi);
  EXPECT_LE(r.achieved.t_lo, again.t_hi);

  // Replaying the log reproduces the chosen set, and every rejection was forced.
  std::vector<int> replay;
  int prev = 0;
  for (const GreedyStep& s : r.step_log) {
    EXPECT_GT(s.candidate, prev);
    prev = s.candidate;
    if (s.accepted) {
      replay.push_back(s.candidate);
      EXPECT_LE(s.bracket.t_hi, target);
    } else {
      EXPECT_GT(s.bracket.t_hi, target);
    }
  }
  EXPECT_EQ(replay, r.chosen);
  EXPECT_EQ(r.step_log.size(), 10u);
}

TEST(Greedy, RejectsBadArguments) {
  EXPECT_THROW(greedy_build(kBcf, parse_alphabet("3.."), 1.5, 10, 1e-3), std::invalid_argument);
  EXPECT_THROW(greedy_build(kBcf, parse_alphabet("3.."), 0.4, 10, 0.0), std::invalid_argument);
  EXPECT_THROW(greedy_build(kBcf, parse_alphabet("1.."), 0.4, 10, 1e-3), std::invalid_argument);
}

TEST(Regularity, FiniteSets) {
  const RegularityResult below = regularity_check(kBcf, AlphabetSpec({3, 4}), 0.3, 12);
  EXPECT_TRUE(below.regular);
  EXPECT_TRUE(below.diagnostic.empty());
  const RegularityResult above = regularity_check(kBcf, AlphabetSpec({3, 4}), 0.9, 12);
  EXPECT_FALSE(above.regular);
  EXPECT_FALSE(above.diagnostic.empty());
  EXPECT_LT(above.bracket.lambda_hi, 1.0);
}

TEST(Regularity, CofiniteNearThreshold) {
  const RegularityResult r = regularity_check(kBcf, parse_alphabet("3.."), 0.55, 12);
  EXPECT_TRUE(r.regular);
  EXPECT_GT(r.bracket.lambda_lo, 1.0);
}

class GapTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { cert_ = new GapCertificate(find_gap_params()); }
  static void TearDownTestSuite() {
    delete cert_;
    cert_ = nullptr;
  }
  static GapCertificate* cert_;
};

GapCertificate* GapTest::cert_ = nullptr;

TEST_F(GapTest, Parameters) {
  EXPECT_EQ(cert_->n1, 5);
  EXPECT_EQ(cert_->n2, 48);
  EXPECT_LT(cert_->tail_n1.hi, 1.0 / 3);
  EXPECT_LT(cert_->tail_n2.hi, 1.0);
  EXPECT_GT(cert_->moran_sum.lo, 1.0);
  EXPECT_TRUE(cert_->valid());
}

TEST_F(GapTest, ParametersAreMinimal) {
  // Oracle: explicit sum to 10^6 plus the integral remainder from below.
  long double s4 = 0;
  for (long j = 4; j <= 1000000; ++j) s4 += std::pow(static_cast<long double>(j), -1.9L);
  EXPECT_GT(s4, 1.0L / 3);
  const auto moran = [](int n2) { return std::pow(0.5L, 0.97L) + std::pow(0.5L - 1.0L / n2, 0.97L); };
  EXPECT_LT(moran(cert_->n2 - 1), 1.0L);
  EXPECT_GT(moran(cert_->n2), 1.0L);
}

TEST_F(GapTest, DimensionBounds) {
  EXPECT_GT(cert_->dim_12_lo, 0.97);
  EXPECT_LT(cert_->dim_not1_hi, 0.95);
  EXPECT_LT(cert_->dim_not2_hi, 0.95);
  EXPECT_LT(cert_->phi1_not1.hi, 1.0);
  EXPECT_LT(cert_->phi1_not2.hi, 1.0);
  const double root = moran_solve({mpq_class(1, 2), mpq_class(1, 2) - mpq_class(1, cert_->n2)});
  EXPECT_GT(root, 0.97);
  EXPECT_TRUE(cert_->dim_12.contains(root));
}

TEST_F(GapTest, EngineAgreesOnSubsystems) {
  const SystemSpec s = make_system(Family::Counterexample, {.n2 = cert_->n2});
  DimensionOptions opts;
  opts.target_width = 1e-2;
  const DimensionBracket d12 = dimension_bracket(s, AlphabetSpec({1, 2}), opts);
  EXPECT_TRUE(d12.certified);
  EXPECT_GT(d12.t_lo, 0.96);
  EXPECT_LE(d12.t_lo, cert_->dim_12.hi);
  const DimensionBracket d2 = dimension_bracket(s, parse_alphabet("2.."), opts);
  EXPECT_TRUE(d2.certified);
  EXPECT_LT(d2.t_hi, 0.95);
}

TEST_F(GapTest, Demo) {
  const GapReport r = gap_demo(*cert_);
  EXPECT_TRUE(r.holds);
  EXPECT_GE(r.dim_123_lo, cert_->dim_12_lo);
  EXPECT_EQ(r.lines.size(), 6u);
  EXPECT_EQ(r.lines.front(), "n1 = 5, n2 = 48");

  GapCertificate broken = *cert_;
  broken.dim_not1_hi = 0.96;
  EXPECT_FALSE(gap_demo(broken).holds);
}

}  // namespace
}  // namespace bcfdim
