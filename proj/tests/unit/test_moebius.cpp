#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "bcfdim/moebius.hpp"

namespace bcfdim {
namespace {

// Composition oracle: phi_w(x) and |phi_w'(x)| by direct evaluation, innermost letter first.
struct Composed {
  mpq_class value;
  mpq_class derivative;
};

Composed compose_backward(const std::vector<int>& w, const mpq_class& x) {
  mpq_class y = x;
  mpq_class d = 1;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const mpq_class den = *it - y;
    d *= 1 / (den * den);
    y = 1 / den;
  }
  return {y, d};
}

TEST(MoebiusWord, EmptyExtendedByThree) {
  const MoebiusWord w = MoebiusWord().extend(3);
  EXPECT_EQ(w.q_prev(), 1);
  EXPECT_EQ(w.q_cur(), 3);
  EXPECT_EQ(w.sup_norm(), mpq_class(1, 4));
}

TEST(MoebiusWord, ThreeThree) {
  const MoebiusWord w = MoebiusWord::from_letters({3, 3});
  EXPECT_EQ(w.q_cur(), 8);
  EXPECT_EQ(w.q_prev(), 3);
  EXPECT_EQ(w.sup_norm(), mpq_class(1, 25));
  // phi_3 o phi_3 (x) = (3 - x) / (8 - 3x); the derivative peaks at x = 1.
  mpq_class best = 0;
  for (int k = 0; k <= 64; ++k) {
    mpq_class x(k, 64);
    x.canonicalize();
    best = std::max(best, compose_backward({3, 3}, x).derivative);
  }
  EXPECT_EQ(best, mpq_class(1, 25));
}

TEST(MoebiusWord, AllTwoContinuants) {
  MoebiusWord w;
  for (int k = 1; k <= 50; ++k) {
    w.push_back(2);
    EXPECT_EQ(w.q_cur(), k + 1) << "k = " << k;
  }
}

TEST(MoebiusWord, Apply) {
  EXPECT_EQ(apply_word(MoebiusWord::from_letters({2}), 1), 1);
  EXPECT_EQ(apply_word(MoebiusWord::from_letters({3}), 0), mpq_class(1, 3));
  EXPECT_EQ(apply_word(MoebiusWord::from_letters({3, 3}), 1), mpq_class(2, 5));
  EXPECT_THROW(apply_word(MoebiusWord::from_letters({3}), 2), std::domain_error);
}

TEST(MoebiusWord, RejectsLettersBelowMinimum) {
  EXPECT_THROW(MoebiusWord().extend(1), std::invalid_argument);
  EXPECT_THROW(MoebiusWord(Convention::Forward).extend(0), std::invalid_argument);
  EXPECT_NO_THROW(MoebiusWord(Convention::Forward).extend(1));
}

TEST(MoebiusWord, SupNormOfSingleLetter) {
  for (int b = 3; b <= 20; ++b) {
    const LogNorm lo = word_sup_norm(MoebiusWord::from_letters({b}), Rounding::Down);
    const LogNorm hi = word_sup_norm(MoebiusWord::from_letters({b}), Rounding::Up);
    const double exact = -2.0 * std::log(static_cast<double>(b - 1));
    EXPECT_LE(lo.value, exact);
    EXPECT_GE(hi.value, exact);
    EXPECT_LT(hi.value - lo.value, 1e-14);
  }
}

TEST(MoebiusWord, ParabolicLetterHasUnitNorm) {
  EXPECT_EQ(word_sup_norm(MoebiusWord::from_letters({2}), Rounding::Down).value, 0.0);
  EXPECT_EQ(word_sup_norm(MoebiusWord::from_letters({2}), Rounding::Up).value, 0.0);
}

TEST(MoebiusWord, StarGeneratorSupNorm) {
  for (int n = 0; n <= 12; ++n) {
    for (int j = 3; j <= 9; ++j) {
      std::vector<int> letters(static_cast<std::size_t>(n), 2);
      letters.push_back(j);
      const MoebiusWord w = MoebiusWord::from_letters(letters);
      const double exact = -2.0 * std::log(static_cast<double>((n + 1) * (j - 2) + 1));
      EXPECT_LE(word_sup_norm(w, Rounding::Down).value, exact);
      EXPECT_GE(word_sup_norm(w, Rounding::Up).value, exact);
      EXPECT_EQ(w.q_cur(), j * (n + 1) - n);
      EXPECT_EQ(w.q_prev(), n + 1);
    }
  }
}

TEST(MoebiusWord, InfNorm) {
  const auto check = [](const std::vector<int>& letters, double d) {
    const MoebiusWord w = MoebiusWord::from_letters(letters);
    const double exact = -2.0 * std::log(d);
    EXPECT_LE(word_inf_norm(w, Rounding::Down).value, exact);
    EXPECT_GE(word_inf_norm(w, Rounding::Up).value, exact);
  };
  check({7}, 7);
  check({3, 3}, 8);
  check({2, 2, 2, 2}, 5);
}

TEST(MoebiusWord, NormsRequireNonemptyWord) {
  EXPECT_THROW(word_sup_norm(MoebiusWord(), Rounding::Up), std::invalid_argument);
  EXPECT_THROW(word_inf_norm(MoebiusWord(), Rounding::Up), std::invalid_argument);
}

TEST(MoebiusWord, LogEnclosureOfLargeIntegers) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 10, 40);
  d += 7;
  const Interval l = log_enclosure(d);
  EXPECT_LE(l.lo, 40 * std::log(10.0));
  EXPECT_GE(l.hi, 40 * std::log(10.0) - 1e-12);
  EXPECT_LT(l.width(), 1e-12);
}

TEST(MoebiusWord, ConcatMatchesLetterwiseExtension) {
  const MoebiusWord u = MoebiusWord::from_letters({3, 2, 5});
  const MoebiusWord v = MoebiusWord::from_letters({4, 2});
  const MoebiusWord uv = concat(u, v);
  EXPECT_EQ(uv, MoebiusWord::from_letters({3, 2, 5, 4, 2}));
  EXPECT_EQ(uv.q_cur(), MoebiusWord::from_letters({3, 2, 5, 4, 2}).q_cur());
  EXPECT_THROW(concat(u, MoebiusWord::from_letters({1}, Convention::Forward)), std::invalid_argument);
}

// Exhaustive: every backward word of length <= 6 over {2,...,9}.
TEST(MoebiusWord, UnimodularBackwardExhaustive) {
  std::size_t count = 0;
  std::function<void(const MoebiusWord&, int)> walk = [&](const MoebiusWord& w, int depth) {
    if (!w.empty()) {
      ++count;
      ASSERT_EQ(w.det(), 1) << w.to_string();
      ASSERT_GT(w.q_cur(), w.q_prev()) << w.to_string();
      ASSERT_GE(w.q_prev(), 1) << w.to_string();
    }
    if (depth == 6) return;
    for (int b = 2; b <= 9; ++b) walk(w.extend(b), depth + 1);
  };
  walk(MoebiusWord(), 0);
  EXPECT_EQ(count, 299592u);
}

TEST(MoebiusWord, UnimodularForward) {
  std::function<void(const MoebiusWord&, int)> walk = [&](const MoebiusWord& w, int depth) {
    if (!w.empty()) {
      const int expected = w.size() % 2 == 1 ? 1 : -1;
      ASSERT_EQ(w.det(), expected) << w.to_string();
    }
    if (depth == 5) return;
    for (int b = 1; b <= 6; ++b) walk(w.extend(b), depth + 1);
  };
  walk(MoebiusWord(Convention::Forward), 0);
}

TEST(MoebiusWord, DerivativeAndApplyAgreeWithComposition) {
  const std::vector<std::vector<int>> words = {{2}, {3}, {2, 5}, {4, 2, 2}, {7, 3, 2, 6}, {2, 2, 9, 2}};
  for (const auto& letters : words) {
    const MoebiusWord w = MoebiusWord::from_letters(letters);
    mpq_class best = 0;
    for (int k = 0; k <= 32; ++k) {
      mpq_class x(k, 32);
      x.canonicalize();
      const Composed c = compose_backward(letters, x);
      EXPECT_EQ(w.apply(x), c.value) << w.to_string();
      EXPECT_EQ(w.derivative_abs(x), c.derivative) << w.to_string();
      best = std::max(best, c.derivative);
    }
    // |phi_w'| is monotone on [0,1], so the grid maximum sits at an endpoint.
    EXPECT_EQ(w.sup_norm(), best) << w.to_string();
  }
}

}  // namespace
}  // namespace bcfdim
