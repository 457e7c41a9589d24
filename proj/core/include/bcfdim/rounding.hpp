#pragma once

// Outward-rounded double arithmetic.
//
// Every basic operation is evaluated in round-to-nearest and then stepped one
// ulp away from the true value, which yields a rigorous enclosure without
// touching the FPU rounding mode. Library transcendental functions (log, exp,
// pow) are assumed accurate to within one ulp, as glibc documents; their
// results are stepped outward by kLibmUlps ulps.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace bcfdim {

__extension__ typedef __int128 int128;

inline constexpr int kLibmUlps = 2;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Next double towards +inf (finite inputs; +inf is a fixed point).
inline double next_up(double x) noexcept {
  if (std::isnan(x) || x == kInf) return x;
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(x);
  bits = x > 0 ? bits + 1 : bits - 1;
  return std::bit_cast<double>(bits);
}

/// Next double towards -inf.
inline double next_down(double x) noexcept { return -next_up(-x); }

inline double up_ulps(double x, int k) noexcept {
  for (int i = 0; i < k; ++i) x = next_up(x);
  return x;
}
inline double down_ulps(double x, int k) noexcept {
  for (int i = 0; i < k; ++i) x = next_down(x);
  return x;
}

/// Closed interval [lo, hi]; lo <= hi unless empty-by-construction is intended.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: exact point
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double v) const { return lo <= v && v <= hi; }
  [[nodiscard]] bool positive() const { return lo > 0.0; }
};

inline Interval hull(Interval a, Interval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval operator+(Interval a, Interval b) {
  return {next_down(a.lo + b.lo), next_up(a.hi + b.hi)};
}

inline Interval operator-(Interval a, Interval b) {
  return {next_down(a.lo - b.hi), next_up(a.hi - b.lo)};
}

inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
  if (a.lo >= 0 && b.lo >= 0) return {next_down(a.lo * b.lo), next_up(a.hi * b.hi)};
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {next_down(*std::min_element(c, c + 4)), next_up(*std::max_element(c, c + 4))};
}

inline Interval operator/(Interval a, Interval b) {
  if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("interval division by an interval containing zero");
  if (a.lo >= 0 && b.lo > 0) return {next_down(a.lo / b.hi), next_up(a.hi / b.lo)};
  const double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return {next_down(*std::min_element(c, c + 4)), next_up(*std::max_element(c, c + 4))};
}

inline Interval& operator+=(Interval& a, Interval b) { return a = a + b; }
inline Interval& operator*=(Interval& a, Interval b) { return a = a * b; }

/// log of a positive interval.
inline Interval log(Interval a) {
  if (!(a.lo > 0)) throw std::domain_error("log of a non-positive interval");
  return {down_ulps(std::log(a.lo), kLibmUlps), up_ulps(std::log(a.hi), kLibmUlps)};
}

inline Interval exp(Interval a) {
  return {std::max(0.0, down_ulps(std::exp(a.lo), kLibmUlps)), up_ulps(std::exp(a.hi), kLibmUlps)};
}

/// base^e for a positive base and a point exponent.
inline Interval pow(Interval base, double e) {
  if (!(base.lo > 0)) {
    if (base.lo == 0 && e > 0) return {0.0, up_ulps(std::pow(base.hi, e), kLibmUlps)};
    throw std::domain_error("pow of a non-positive interval");
  }
  if (e == 0.0) return {1.0, 1.0};
  const double a = std::pow(base.lo, e);
  const double b = std::pow(base.hi, e);
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return {std::max(0.0, down_ulps(lo, kLibmUlps)), up_ulps(hi, kLibmUlps)};
}

/// Enclosure of an integer that may exceed 2^53.
inline Interval enclose(std::int64_t v) {
  const double d = static_cast<double>(v);
  if (std::abs(v) <= (std::int64_t{1} << 53)) return {d, d};
  return {next_down(d), next_up(d)};
}

inline Interval enclose(int128 v) {
  const double d = static_cast<double>(v);
  const int128 lim = static_cast<int128>(1) << 53;
  if (v <= lim && v >= -lim) return {d, d};
  return {next_down(d), next_up(d)};
}

/// ln 2 enclosure.
inline Interval ln2() {
  constexpr double v = 0.6931471805599453094;
  return {next_down(v), next_up(v)};
}

}  // namespace bcfdim
