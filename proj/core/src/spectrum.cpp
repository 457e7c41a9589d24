#include "bcfdim/spectrum.hpp"

#include <cstdio>
#include <stdexcept>

#include "bcfdim/errors.hpp"
#include "bcfdim/tail.hpp"

namespace bcfdim {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// sum_{j >= n} j^-1.9.
Interval power_tail_19(int n) { return power_sum_tail(n, Interval(1.0), Interval(0.0), 1.9); }

// Smallest t on a dyadic grid with level1(t).hi < 1, to width tol, for a level-1
// sum that decreases in t and diverges at t = 1/2.
template <class F>
double level1_dimension_upper(const F& level1, double tol) {
  double lo = 0.5;
  double hi = 1.0;
  if (!(level1(hi).hi < 1.0)) return 1.0;
  while (hi - lo > tol) {
    const double m = 0.5 * (lo + hi);
    (level1(m).hi < 1.0 ? hi : lo) = m;
  }
  return hi;
}

}  // namespace

SpectrumResult greedy_build(const SystemSpec& system, const AlphabetSpec& universe, double target_t, int max_index,
                            double tol, const DimensionOptions& opts) {
  if (!(target_t >= 0.0 && target_t <= 1.0)) throw std::invalid_argument("target dimension must lie in [0,1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  validate_alphabet(system, universe);
  SpectrumResult res;
  res.target_t = target_t;
  res.tol = tol;
  DimensionOptions o = opts;
  o.target_width = tol;
  for (int b : universe.letters_up_to(max_index)) {
    std::vector<int> trial = res.chosen;
    trial.push_back(b);
    GreedyStep step;
    step.candidate = b;
    try {
      step.bracket = dimension_bracket(system, AlphabetSpec(trial), o);
    } catch (const BudgetExceeded& e) {
      res.certified = false;
      res.note = e.what();
      break;
    }
    step.accepted = step.bracket.t_hi <= target_t;
    if (step.accepted) {
      res.chosen = trial;
      res.achieved = step.bracket;
    }
    res.step_log.push_back(std::move(step));
  }
  if (res.chosen.empty()) {
    res.certified = false;
    if (res.note.empty()) res.note = "no candidate index was admissible";
  }
  return res;
}

RegularityResult regularity_check(const SystemSpec& system, const AlphabetSpec& a, double t, int depth, double tol,
                                  const EngineOptions& engine) {
  RegularityResult r;
  TransferOptions tr;
  tr.grid = 512;
  r.bracket = lambda_bracket(system, a, t, depth, PressureMethod::Transfer, {}, engine, tr);
  r.regular = r.bracket.lambda_lo >= 1.0 - tol;
  if (!r.regular) {
    r.diagnostic = fmt("certified lower end %.9g of lambda is below 1 - tol (tol %.3g)", r.bracket.lambda_lo, tol);
  }
  return r;
}

GapCertificate find_gap_params(int scan_limit) {
  GapCertificate c;
  const Interval third = Interval(1.0) / Interval(3.0);
  for (int n = 2; n <= scan_limit; ++n) {
    if (power_tail_19(n).hi < third.lo) {
      c.n1 = n;
      break;
    }
  }
  if (c.n1 == 0) throw BudgetExceeded("no n1 found below the scan limit");

  const Interval half_pow = pow(Interval(0.5), 0.97);
  for (int n = c.n1 + 1; n <= scan_limit; ++n) {
    const Interval r = Interval(0.5) - Interval(1.0) / Interval(static_cast<double>(n));
    const Interval s = half_pow + pow(r, 0.97);
    if (s.lo > 1.0) {
      c.n2 = n;
      c.moran_sum = s;
      break;
    }
  }
  if (c.n2 == 0) throw BudgetExceeded("no n2 found below the scan limit");
  c.tail_n1 = power_tail_19(c.n1);
  c.tail_n2 = power_tail_19(c.n2);

  const mpq_class r2 = mpq_class(1, 2) - mpq_class(1, c.n2);
  c.dim_12 = moran_bracket({mpq_class(1, 2), r2}, 1e-9);
  c.dim_12_lo = c.dim_12.lo;

  // Level-1 sums dominate lambda, so Phi_1(t) < 1 bounds the dimension by t.
  const Interval r2i = enclose(r2);
  const int n2 = c.n2;
  auto not1 = [&](double t) {
    return pow(r2i, t) + power_sum_tail(n2, Interval(1.0), Interval(0.0), 2.0 * t);
  };
  auto not2 = [&](double t) {
    return pow(Interval(0.5), t) + power_sum_tail(n2, Interval(1.0), Interval(0.0), 2.0 * t);
  };
  c.phi1_not1 = not1(c.gap.lo);
  c.phi1_not2 = not2(c.gap.lo);
  c.dim_not1_hi = level1_dimension_upper(not1, 1e-6);
  c.dim_not2_hi = level1_dimension_upper(not2, 1e-6);
  return c;
}

GapReport gap_demo(const GapCertificate& c) {
  GapReport r;
  r.certificate = c;
  r.holds = c.valid();
  r.dim_123_lo = c.dim_12_lo;
  r.lines.push_back(fmt("n1 = %.0f, n2 = %.0f", c.n1, c.n2));
  r.lines.push_back(fmt("dim J_{1,2} >= %.9f (similarity dimension, gap upper end %.2f)", c.dim_12_lo, c.gap.hi));
  r.lines.push_back(fmt("dim J_{N\\{1}} <= %.9f (level-1 sum at 0.95 is %.9f)", c.dim_not1_hi, c.phi1_not1.hi));
  r.lines.push_back(fmt("dim J_{N\\{2}} <= %.9f (level-1 sum at 0.95 is %.9f)", c.dim_not2_hi, c.phi1_not2.hi));
  r.lines.push_back(fmt("any subsystem containing {1,2}, such as {1,2,3}, has dimension >= %.9f", r.dim_123_lo));
  r.lines.push_back(r.holds ? fmt("no subsystem has dimension in (%.2f, %.2f)", c.gap.lo, c.gap.hi)
                            : std::string("certificate does not establish the gap"));
  return r;
}

}  // namespace bcfdim
