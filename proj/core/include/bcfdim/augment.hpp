#pragma once

// Augmentation bounds for pressure under the addition of one generator, the
// BCF norm sandwich for inserted parabolic runs, and related comparison sums.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "bcfdim/moebius.hpp"
#include "bcfdim/rounding.hpp"
#include "bcfdim/systems.hpp"

namespace bcfdim {

/// p_b = K^2 ||phi_b'|| and r_b = K^-2 ||phi_b'||.
struct AugmentConstants {
  int b = 0;
  double norm = 0.0;
  double p_b = 0.0;
  double r_b = 0.0;
};

AugmentConstants augment_constants(const SystemSpec& system, int b, double K);

/// lambda_A_hi + p_b^t, rounded up.
double augment_upper(double lambda_A_hi, int b, double t, double K, const SystemSpec& system);
/// lambda_A_lo + r_b^t, rounded down.
double augment_lower(double lambda_A_lo, int b, double t, double K, const SystemSpec& system);

/// lambda_A_hi + K^(2t) sum_{j >= first} ||phi_j'||^t: augmentation by a whole cofinite tail.
double augment_tail_upper(double lambda_A_hi, std::int64_t first, double t, double K, const SystemSpec& system);

enum class SandwichDomain {
  All,   // omega arbitrary
  Star,  // omega empty or ending in a letter >= 3, so 2^n is a maximal run
};

std::string_view domain_name(SandwichDomain d);
SandwichDomain parse_domain(std::string_view name);
bool in_domain(const std::vector<int>& omega, SandwichDomain d);

struct SandwichReport {
  std::vector<int> omega;
  std::vector<int> omega_tilde;
  int n = 0;
  int b = 5;
  mpq_class ratio;
  mpq_class lower_bound;  // (n+2)^-2 (b-3/2)^-2
  mpq_class upper_bound;  // 4 (n+2)^-2 (b-1)^-2
  bool lower_ok = false;
  bool upper_ok = false;

  [[nodiscard]] bool ok() const { return lower_ok && upper_ok; }
};

/// ||phi_{omega 2^n b omega~}'|| / ||phi_{omega omega~}'|| compared exactly against
/// both bounds. Throws std::invalid_argument for b < 5 or letters below 2.
SandwichReport check_sandwich(const std::vector<int>& omega, const std::vector<int>& omega_tilde, int n, int b);

enum class Thm46Reading {
  Literal,  // right summand [(n+2)(b-3/2)]^-2t, independent of j
  JShift,   // right summand [(n+2)(j-3/2)]^-2t
};

std::string_view reading_name(Thm46Reading r);
Thm46Reading parse_reading(std::string_view name);

struct Thm46Result {
  int b = 0;
  double t = 0.0;
  Thm46Reading reading = Thm46Reading::Literal;
  Interval lhs;        // sum_{n>=0} [2(n+2)(b-1)]^-2t
  Interval rhs;        // right side, or a partial sum of it for the literal reading
  std::int64_t j_terms = 0;  // j values summed explicitly on the right
  bool rhs_diverges = false;
  bool certified = false;  // lhs.hi <= rhs.lo
};

/// Requires t > 1/2 (DivergenceError otherwise) and b >= 2.
Thm46Result thm46_inequality(int b, double t, Thm46Reading reading = Thm46Reading::Literal);

/// ||phi_{2^r p 2^q s}'|| = A^-2 with A = (s-1) X - X', where d = (r+1)(p-2)+1,
/// X = p(r+1) - r + q d and X' = p(r+1) - r + (q-1) d.
mpz_class second_level_denominator(std::int64_t r, std::int64_t p, std::int64_t q, std::int64_t s);
mpq_class second_level_norm(std::int64_t r, std::int64_t p, std::int64_t q, std::int64_t s);

/// Enclosure of B = sum_{n>=0} sup_{x in X_2} |phi_{2^n}'(x)|^t, with X_2 the union of
/// phi_j([0,1]) over the hyperbolic letters j of A. Partial sum over n < cutoff from
/// exact continuants, integral tail beyond. Throws DivergenceError for t <= 1/2.
Interval star_tail_constant(const AlphabetSpec& a, double t, int cutoff = 256);

}  // namespace bcfdim
