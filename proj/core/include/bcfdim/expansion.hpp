#pragma once

// Backward (Renyi) and regular continued fraction digits of exact rationals.
//
// Backward digits of x in (0,1] satisfy x = 1/(b_1 - 1/(b_2 - ...)) with every
// b_n >= 2. They are produced by the Renyi map T(u) = 1/(1-u) - floor(1/(1-u))
// acting on u = 1 - x: b_n = floor(1/(1 - u_{n-1})) + 1 and u_n = T(u_{n-1}).
// After n digits x = phi_{b_1...b_n}(1 - u_n). When u_n reaches 0 the remaining
// point is 1, whose expansion is 2, 2, 2, ...

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bcfdim {

/// Parses "p/q", a decimal such as "0.125", or an integer.
mpq_class parse_rational(std::string_view text);

/// T(x) for x in [0,1); T(0) = 0.
mpq_class renyi_step(const mpq_class& x);

/// x -> b_1 - 1/x, the left shift on backward digits (equals 1 - T(1 - x)).
mpq_class bcf_shift(const mpq_class& x);

struct BcfDigits {
  std::vector<int> digits;
  mpq_class origin;
  bool terminated = false;  // expansion ended; the implied tail is 2, 2, 2, ...
};

/// First `count` backward digits of x in (0,1).
BcfDigits bcf_digits(const mpq_class& x, int count);
BcfDigits bcf_digits(std::string_view x, int count);

struct RationalInterval {
  mpq_class lo;
  mpq_class hi;

  [[nodiscard]] mpq_class diameter() const { return hi - lo; }
  [[nodiscard]] bool contains(const mpq_class& v) const { return lo <= v && v <= hi; }
};

/// phi_w([0,1]) = [p/q, (p - p')/(q - q')] for a nonempty backward digit prefix.
RationalInterval bcf_eval(const std::vector<int>& digits);

struct CfDigits {
  std::vector<int> digits;
  mpq_class origin;
  bool terminated = false;
};

/// Regular continued fraction digits a_n = floor(1/G^{n-1}(x)) of x in (0,1).
CfDigits cf_digits(const mpq_class& x, int count);

/// Interval of all numbers whose regular expansion starts with the prefix.
RationalInterval cf_eval(const std::vector<int>& digits);

}  // namespace bcfdim
