#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bcfdim/errors.hpp"
#include "bcfdim/tail.hpp"

namespace bcfdim {
namespace {

// Oracle: explicit long double partial sum to N plus the integral bracket of the remainder,
// [int_{N+1}^inf, int_N^inf] of u^-s.
struct Bracket {
  long double lo;
  long double hi;
};

Bracket brute_tail(long first, long double scale, long double shift, long double s, long N = 200000) {
  long double partial = 0;
  for (long k = first; k <= N; ++k) partial += std::pow(scale * (k - shift), -s);
  const auto integral_from = [&](long double a) { return std::pow(scale * (a - shift), 1 - s) / (scale * (s - 1)); };
  return {partial + integral_from(N + 1), partial + integral_from(N)};
}

TEST(Tail, ZetaTwo) {
  const Interval z = zeta(2.0);
  EXPECT_TRUE(z.contains(std::numbers::pi * std::numbers::pi / 6));
  EXPECT_LT(z.width(), 1e-5);
}

TEST(Tail, ZetaIsDecreasing) {
  EXPECT_GT(zeta(1.5).lo, zeta(2.0).hi);
  EXPECT_GT(zeta(2.0).lo, zeta(3.0).hi);
  EXPECT_TRUE(zeta(4.0).contains(std::pow(std::numbers::pi, 4) / 90));
}

TEST(Tail, PowerTailContainsZetaTwo) {
  const TailBound b = tail_sum(PowerTailParams{2, 1.0, 1.0}, 1.0);
  EXPECT_EQ(b.kind, TailKind::PowerTail);
  EXPECT_EQ(b.cutoff, 2);
  const double z2 = std::numbers::pi * std::numbers::pi / 6;
  EXPECT_LE(b.mass_lo, z2);
  EXPECT_GE(b.mass_hi, z2);
}

TEST(Tail, ScaledTailAboveOneThirtySecond) {
  // sum_{j >= 8} (2j)^-2
  const TailBound b = tail_sum(PowerTailParams{8, 0.0, 2.0}, 1.0);
  EXPECT_GE(b.mass_lo, 1.0 / 32);
  const Bracket o = brute_tail(8, 2, 0, 2);
  EXPECT_LE(b.mass_lo, static_cast<double>(o.hi));
  EXPECT_GE(b.mass_hi, static_cast<double>(o.lo));
}

TEST(Tail, GapTailThreshold) {
  const TailBound five = tail_sum(PowerTailParams{5, 0.0, 1.0}, 0.95);
  EXPECT_LT(five.mass_hi, 1.0 / 3);
  const TailBound four = tail_sum(PowerTailParams{4, 0.0, 1.0}, 0.95);
  EXPECT_GT(four.mass_lo, 1.0 / 3);
}

TEST(Tail, AgreesWithBruteForceOracle) {
  for (long first : {3L, 7L, 20L}) {
    for (double t : {0.6, 0.8, 1.0, 1.7}) {
      const TailBound b = tail_sum(PowerTailParams{first, 1.0, 1.0}, t);
      const Bracket o = brute_tail(first, 1, 1, 2 * t);
      EXPECT_LE(b.mass_lo, static_cast<double>(o.hi)) << first << " " << t;
      EXPECT_GE(b.mass_hi, static_cast<double>(o.lo)) << first << " " << t;
      // The enclosure is never wider than the first summand.
      EXPECT_LT(b.mass_hi - b.mass_lo, std::pow(first - 1.0, -2 * t)) << first << " " << t;
    }
  }
}

TEST(Tail, StarRunMatchesBruteForce) {
  // sum_{n >= 3} ((n+1)(j-2)+1)^-s at x = 1.
  for (int j : {3, 4, 9}) {
    const double s = 1.6;
    long double brute = 0;
    for (long n = 3; n <= 2000000; ++n) brute += std::pow(static_cast<long double>((n + 1) * (j - 2) + 1), -s);
    const Interval r = star_run_tail(j, 3, Interval(1.0), s);
    EXPECT_LE(static_cast<double>(brute), r.hi) << j;
    // The brute sum is truncated; add a generous remainder bound for the lower check.
    const long double rem = std::pow(static_cast<long double>(2000000) * (j - 2), 1 - s) / ((j - 2) * (s - 1));
    EXPECT_GE(static_cast<double>(brute + rem), r.lo) << j;
  }
}

TEST(Tail, StarTailWithEverythingTrackedIsZero) {
  const TailBound b = tail_sum(StarTailParams{{3, 4}, 10, std::nullopt, false}, 1.0);
  EXPECT_EQ(b.kind, TailKind::StarTail);
  EXPECT_EQ(b.mass_lo, 0.0);
  EXPECT_EQ(b.mass_hi, 0.0);
}

TEST(Tail, StarTailShrinksWithCutoff) {
  const TailBound a = tail_sum(StarTailParams{{3, 4, 5}, 8, 6, true}, 0.9);
  const TailBound b = tail_sum(StarTailParams{{3, 4, 5}, 64, 6, true}, 0.9);
  EXPECT_GT(a.mass_lo, 0.0);
  EXPECT_GT(a.mass_hi, b.mass_hi);
  EXPECT_LE(a.mass_lo, a.mass_hi);
}

TEST(Tail, DivergesAtOneHalf) {
  EXPECT_THROW(tail_sum(PowerTailParams{2, 1.0, 1.0}, 0.5), DivergenceError);
  EXPECT_THROW(tail_sum(PowerTailParams{2, 1.0, 1.0}, 0.3), DivergenceError);
  EXPECT_THROW(tail_sum(StarTailParams{{3}, 4, 5, true}, 0.5), DivergenceError);
  EXPECT_THROW(zeta(1.0), DivergenceError);
}

}  // namespace
}  // namespace bcfdim
