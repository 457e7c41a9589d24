#pragma once

// Certified enclosures of the infinite tails that appear in partition sums.
// All bounds come from integral comparison for convex decreasing summands.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "bcfdim/rounding.hpp"

namespace bcfdim {

enum class TailKind { PowerTail, StarTail };

struct TailBound {
  TailKind kind = TailKind::PowerTail;
  std::int64_t cutoff = 0;
  double t = 0.0;
  double mass_lo = 0.0;
  double mass_hi = 0.0;
};

/// sum_{k >= first} (slope k + offset)^(-s), for s > 1 and slope * first + offset > 0.
/// slope and offset are enclosures; the sum is decreasing in both.
Interval power_sum_tail(std::int64_t first, Interval slope, Interval offset, double s);

/// Riemann zeta enclosure for s > 1.
Interval zeta(double s);

/// sum_{n >= first_n} ((n+1)(j-1-x) + 1)^(-s): the 2^n j run of S* at the point x.
Interval star_run_tail(int j, std::int64_t first_n, Interval x, double s);

/// sum_{j >= first_j} sum_{n >= 0} ((n+1)(j-1-x) + 1)^(-s).
Interval star_letters_tail(std::int64_t first_j, Interval x, double s);

/// sum_{j >= first} (j - c)^(-2t) with c an exact shift (1 for BCF sup norms).
struct PowerTailParams {
  std::int64_t first = 2;
  double shift = 1.0;
  double scale = 1.0;  // summand is (scale (j - shift))^(-2t)
};

/// Untracked S* generators: 2^n j for tracked j with n > n_cutoff, and every
/// 2^n j with j >= first_untracked_j. Summand ((n+1)(j-2)+1)^(-2t).
struct StarTailParams {
  std::vector<int> tracked_j;
  std::int64_t n_cutoff = 0;
  std::optional<std::int64_t> first_untracked_j;
  bool parabolic = true;  // false when 2 is absent and only n = 0 occurs
};

using TailParams = std::variant<PowerTailParams, StarTailParams>;

/// Throws DivergenceError when 2t <= 1 and the tail is nonempty.
TailBound tail_sum(const TailParams& params, double t);

}  // namespace bcfdim
