#include "bcfdim/tail.hpp"

#include <cmath>
#include <string>

#include "bcfdim/errors.hpp"

namespace bcfdim {

namespace {

void require_convergent(double s) {
  if (!(s > 1.0)) {
    throw DivergenceError("tail sum diverges: exponent " + std::to_string(s) + " <= 1");
  }
}

// integral_{A}^{inf} (slope u + offset)^(-s) du = (slope A + offset)^(1-s) / (slope (s-1)).
// Directed: lower uses (a_lo, den_hi), upper uses (a_hi, den_lo) where a = slope A + offset.
Interval tail_integral(Interval base, Interval slope, double s) {
  const Interval num = pow(base, 1.0 - s);
  const Interval den = slope * Interval(s - 1.0);
  return num / den;
}

}  // namespace

Interval power_sum_tail(std::int64_t first, Interval slope, Interval offset, double s) {
  require_convergent(s);
  if (!(slope.lo > 0)) throw std::domain_error("power_sum_tail: slope must be positive");
  const Interval k(static_cast<double>(first));
  const Interval at_first = slope * k + offset;
  if (!(at_first.lo > 0)) throw std::domain_error("power_sum_tail: summand base must be positive");

  // Lower: integral from first plus half the first term (convexity, trapezoid).
  const double base_hi = at_first.hi;
  const Interval lower_int = tail_integral(Interval(base_hi), Interval(slope.hi), s);
  const Interval first_term_lo = pow(Interval(base_hi), -s);
  const double lo = (lower_int + first_term_lo * Interval(0.5)).lo;

  // Upper: integral from first - 1/2 (midpoint rule under convexity) when the
  // base stays positive there, else first term plus integral from first.
  double hi = 0.0;
  const Interval at_half = slope * (k - Interval(0.5)) + offset;
  if (at_half.lo > 0) {
    hi = tail_integral(Interval(at_half.lo), Interval(slope.lo), s).hi;
  } else {
    const double base_lo = at_first.lo;
    hi = (tail_integral(Interval(base_lo), Interval(slope.lo), s) + pow(Interval(base_lo), -s)).hi;
  }
  return {lo, hi};
}

Interval zeta(double s) {
  require_convergent(s);
  constexpr int kTerms = 64;
  Interval partial(0.0);
  for (int k = 1; k < kTerms; ++k) partial += pow(Interval(static_cast<double>(k)), -s);
  return partial + power_sum_tail(kTerms, Interval(1.0), Interval(0.0), s);
}

Interval star_run_tail(int j, std::int64_t first_n, Interval x, double s) {
  // ((n+1)c + 1) = c n + (c + 1), c = j - 1 - x.
  const Interval c = Interval(static_cast<double>(j - 1)) - x;
  return power_sum_tail(first_n, c, c + Interval(1.0), s);
}

Interval star_letters_tail(std::int64_t first_j, Interval x, double s) {
  // ((n+1)c + 1)^(-s) <= (n+1)^(-s) c^(-s) and >= (n+1)^(-s) (c+1)^(-s).
  const Interval z = zeta(s);
  const Interval upper = power_sum_tail(first_j, Interval(1.0), Interval(-1.0) - x, s);
  const Interval lower = power_sum_tail(first_j, Interval(1.0), -x, s);
  return {(z * lower).lo, (z * upper).hi};
}

TailBound tail_sum(const TailParams& params, double t) {
  const double s = 2.0 * t;
  TailBound out;
  out.t = t;
  if (const auto* p = std::get_if<PowerTailParams>(&params)) {
    out.kind = TailKind::PowerTail;
    out.cutoff = p->first;
    // (scale (j - shift))^(-s) = (scale j - scale shift)^(-s).
    const Interval scale(p->scale);
    const Interval m = power_sum_tail(p->first, scale, -(scale * Interval(p->shift)), s);
    out.mass_lo = m.lo;
    out.mass_hi = m.hi;
    return out;
  }
  const auto& st = std::get<StarTailParams>(params);
  out.kind = TailKind::StarTail;
  out.cutoff = st.n_cutoff;
  Interval mass(0.0);
  const Interval one(1.0);
  if (st.parabolic) {
    for (int j : st.tracked_j) mass += star_run_tail(j, st.n_cutoff + 1, one, s);
    if (st.first_untracked_j) mass += star_letters_tail(*st.first_untracked_j, one, s);
  } else if (st.first_untracked_j) {
    // Only n = 0: sum_{j >= J} (j - 2)^(-s).
    mass += power_sum_tail(*st.first_untracked_j, one, Interval(-2.0), s);
  }
  out.mass_lo = mass.lo;
  out.mass_hi = mass.hi;
  return out;
}

}  // namespace bcfdim
