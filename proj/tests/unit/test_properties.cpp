#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bcfdim/augment.hpp"
#include "bcfdim/expansion.hpp"
#include "bcfdim/pressure.hpp"
#include "bcfdim/tail.hpp"

namespace bcfdim {
namespace {

constexpr int kCases = 300;

// Small hand-rolled generator for words, star blocks and exponents. The seed is
// printed with every failure so a case can be replayed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::vector<int> word(int max_len, int lo, int hi) {
    std::vector<int> w(static_cast<std::size_t>(integer(1, max_len)));
    for (int& b : w) b = integer(lo, hi);
    return w;
  }

  // Concatenation of blocks 2^n j with j >= 3.
  std::vector<int> star_word(int max_blocks, int max_run, int max_j) {
    std::vector<int> w;
    const int blocks = integer(1, max_blocks);
    for (int i = 0; i < blocks; ++i) {
      w.insert(w.end(), static_cast<std::size_t>(integer(0, max_run)), 2);
      w.push_back(integer(3, max_j));
    }
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

MoebiusWord word(const std::vector<int>& letters) { return MoebiusWord::from_letters(letters); }

TEST(Property, UnimodularityOfRandomWords) {
  Gen g(101);
  for (int i = 0; i < kCases; ++i) {
    const auto w = g.word(40, 2, 60);
    ASSERT_EQ(word(w).det(), 1) << "case " << i;
    const auto f = g.word(40, 1, 60);
    const MoebiusWord fw = MoebiusWord::from_letters(f, Convention::Forward);
    ASSERT_EQ(fw.det(), f.size() % 2 == 1 ? 1 : -1) << "case " << i;
  }
}

TEST(Property, SubmultiplicativeNorms) {
  Gen g(202);
  for (int i = 0; i < kCases; ++i) {
    const auto u = g.word(8, 2, 12);
    const auto v = g.word(8, 2, 12);
    const MoebiusWord uv = concat(word(u), word(v));
    ASSERT_LE(uv.sup_norm(), word(u).sup_norm() * word(v).sup_norm()) << "case " << i;
    ASSERT_GE(uv.inf_norm(), word(u).inf_norm() * word(v).inf_norm()) << "case " << i;
  }
}

TEST(Property, SupermultiplicativeStarWords) {
  const mpq_class K = 9;
  Gen g(303);
  for (int i = 0; i < kCases; ++i) {
    const auto u = g.star_word(3, 6, 10);
    const auto v = g.star_word(3, 6, 10);
    const MoebiusWord uv = concat(word(u), word(v));
    ASSERT_GE(uv.sup_norm() * K, word(u).sup_norm() * word(v).sup_norm()) << "case " << i;
    // Distortion of a star word: sup / inf <= 4.
    ASSERT_LE(word(u).sup_norm(), 4 * word(u).inf_norm()) << "case " << i;
  }
}

TEST(Property, PartitionSumsAreSubmultiplicative) {
  const SystemSpec bcf = make_system(Family::BCF);
  Gen g(404);
  for (int i = 0; i < 20; ++i) {
    std::vector<int> letters;
    for (int b = 3; b <= 9; ++b) {
      if (g.integer(0, 1) == 1) letters.push_back(b);
    }
    if (letters.empty()) letters.push_back(g.integer(3, 9));
    const AlphabetSpec a(letters);
    const double t = g.real(0.0, 1.0);
    const int n = g.integer(1, 3);
    const int m = g.integer(1, 3);
    const Interval pn = partition_sum(bcf, a, n, t);
    const Interval pm = partition_sum(bcf, a, m, t);
    const Interval pnm = partition_sum(bcf, a, n + m, t);
    ASSERT_LE(pnm.lo, (Interval(pn.hi) * Interval(pm.hi)).hi) << "case " << i;
    ASSERT_GE((Interval(pnm.hi) * Interval(9.0)).hi, (Interval(pn.lo) * Interval(pm.lo)).lo) << "case " << i;
  }
}

TEST(Property, SingletonEigenvalueOracle) {
  const SystemSpec bcf = make_system(Family::BCF);
  Gen g(505);
  for (int i = 0; i < 40; ++i) {
    const int b = g.integer(3, 40);
    const double t = g.real(0.0, 1.0);
    const double rho = (b + std::sqrt(static_cast<double>(b) * b - 4)) / 2;
    const double exact = std::pow(rho, -2 * t);
    const auto method = i % 2 == 0 ? PressureMethod::Transfer : PressureMethod::Partition;
    const auto br = lambda_bracket(bcf, AlphabetSpec({b}), t, 10, method);
    ASSERT_LE(br.lambda_lo, exact * (1 + 1e-12)) << "b=" << b << " t=" << t;
    ASSERT_GE(br.lambda_hi, exact * (1 - 1e-12)) << "b=" << b << " t=" << t;
  }
}

TEST(Property, TailBoundsBracketExplicitSums) {
  Gen g(606);
  for (int i = 0; i < 40; ++i) {
    const int first = g.integer(2, 40);
    const double t = g.real(0.6, 1.5);
    const TailBound tb = tail_sum(PowerTailParams{first, 1.0, 1.0}, t);
    long double partial = 0;
    const long N = 100000;
    for (long j = first; j <= N; ++j) partial += std::pow(static_cast<long double>(j - 1), -2.0L * t);
    ASSERT_GE(tb.mass_hi, static_cast<double>(partial)) << "case " << i;
    const long double rem = std::pow(static_cast<long double>(N - 1), 1 - 2.0L * t) / (2.0L * t - 1);
    ASSERT_LE(tb.mass_lo, static_cast<double>(partial + rem)) << "case " << i;
  }
}

TEST(Property, ExpansionRoundTripNesting) {
  Gen g(707);
  for (int i = 0; i < kCases; ++i) {
    const auto digits = g.word(12, 2, 9);
    // Any point inside the cylinder reproduces the prefix, unless it sits on the right end.
    const RationalInterval cyl = bcf_eval(digits);
    const mpq_class x = (cyl.lo * 2 + cyl.hi) / 3;
    const BcfDigits d = bcf_digits(x, static_cast<int>(digits.size()));
    ASSERT_EQ(d.digits, digits) << "case " << i;
  }
}

TEST(Property, SandwichUpperHoldsForStarPrefixesWithoutSuffix) {
  Gen g(808);
  for (int i = 0; i < kCases; ++i) {
    std::vector<int> omega = g.integer(0, 1) ? g.star_word(2, 3, 9) : std::vector<int>{};
    const int n = g.integer(0, 8);
    const int b = g.integer(5, 14);
    const SandwichReport r = check_sandwich(omega, {}, n, b);
    ASSERT_TRUE(r.upper_ok) << "case " << i;
  }
}

}  // namespace
}  // namespace bcfdim
