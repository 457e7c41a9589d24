#include "bcfdim/augment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "bcfdim/errors.hpp"
#include "bcfdim/tail.hpp"

namespace bcfdim {

namespace {

// sum_{n >= 0} (n+2)^-s.
Interval shifted_zeta(double s) {
  constexpr int kTerms = 64;
  Interval partial(0.0);
  for (int n = 0; n < kTerms; ++n) partial += pow(Interval(static_cast<double>(n + 2)), -s);
  return partial + power_sum_tail(kTerms, Interval(1.0), Interval(2.0), s);
}

MoebiusWord word_of(const std::vector<int>& letters) {
  return MoebiusWord::from_letters(letters, Convention::Backward);
}

}  // namespace

AugmentConstants augment_constants(const SystemSpec& system, int b, double K) {
  if (!(K >= 1.0)) throw std::invalid_argument("distortion constant K must be >= 1");
  const Interval norm = enclose(system.generator(b).sup_norm());
  const Interval k2 = Interval(K) * Interval(K);
  AugmentConstants c;
  c.b = b;
  c.norm = norm.mid();
  c.p_b = (k2 * norm).hi;
  c.r_b = (norm / k2).lo;
  return c;
}

double augment_upper(double lambda_A_hi, int b, double t, double K, const SystemSpec& system) {
  const AugmentConstants c = augment_constants(system, b, K);
  return (Interval(lambda_A_hi) + pow(Interval(c.p_b), t)).hi;
}

double augment_lower(double lambda_A_lo, int b, double t, double K, const SystemSpec& system) {
  const AugmentConstants c = augment_constants(system, b, K);
  return (Interval(lambda_A_lo) + pow(Interval(c.r_b), t)).lo;
}

double augment_tail_upper(double lambda_A_hi, std::int64_t first, double t, double K, const SystemSpec& system) {
  PowerTailParams p;
  p.first = first;
  switch (system.family) {
    case Family::BCF:
    case Family::BCFStar:
      p.shift = 1.0;
      break;
    case Family::Gauss:
      p.shift = 0.0;
      break;
    case Family::Counterexample:
      if (first < 3) throw std::invalid_argument("counterexample tails start at index 3");
      p.shift = 3.0 - system.n2;
      break;
    case Family::Similarity:
      throw std::invalid_argument("similarity systems have no infinite tail");
  }
  const TailBound tb = tail_sum(p, t);
  const Interval k2t = pow(Interval(K), 2.0 * t);
  return (Interval(lambda_A_hi) + k2t * Interval(tb.mass_hi)).hi;
}

std::string_view domain_name(SandwichDomain d) { return d == SandwichDomain::All ? "all" : "star"; }

SandwichDomain parse_domain(std::string_view name) {
  if (name == "all") return SandwichDomain::All;
  if (name == "star") return SandwichDomain::Star;
  throw std::invalid_argument("unknown sandwich domain '" + std::string(name) + "' (expected all or star)");
}

bool in_domain(const std::vector<int>& omega, SandwichDomain d) {
  return d == SandwichDomain::All || omega.empty() || omega.back() >= 3;
}

SandwichReport check_sandwich(const std::vector<int>& omega, const std::vector<int>& omega_tilde, int n, int b) {
  if (b < 5) throw std::invalid_argument("sandwich bounds need b >= 5, got " + std::to_string(b));
  if (n < 0) throw std::invalid_argument("sandwich run length must be >= 0");
  SandwichReport r;
  r.omega = omega;
  r.omega_tilde = omega_tilde;
  r.n = n;
  r.b = b;

  std::vector<int> inner = omega;
  inner.insert(inner.end(), static_cast<std::size_t>(n), 2);
  inner.push_back(b);
  inner.insert(inner.end(), omega_tilde.begin(), omega_tilde.end());
  std::vector<int> outer = omega;
  outer.insert(outer.end(), omega_tilde.begin(), omega_tilde.end());

  r.ratio = word_of(inner).sup_norm() / word_of(outer).sup_norm();
  r.ratio.canonicalize();
  const mpz_class n2 = mpz_class(n + 2) * (n + 2);
  r.lower_bound = mpq_class(4, 1) / (n2 * mpz_class(2 * b - 3) * (2 * b - 3));
  r.upper_bound = mpq_class(4, 1) / (n2 * mpz_class(b - 1) * (b - 1));
  r.lower_bound.canonicalize();
  r.upper_bound.canonicalize();
  r.lower_ok = r.ratio >= r.lower_bound;
  r.upper_ok = r.ratio <= r.upper_bound;
  return r;
}

std::string_view reading_name(Thm46Reading r) { return r == Thm46Reading::Literal ? "literal" : "j-shift"; }

Thm46Reading parse_reading(std::string_view name) {
  if (name == "literal") return Thm46Reading::Literal;
  if (name == "j-shift") return Thm46Reading::JShift;
  throw std::invalid_argument("unknown reading '" + std::string(name) + "' (expected literal or j-shift)");
}

Thm46Result thm46_inequality(int b, double t, Thm46Reading reading) {
  if (b < 2) throw std::invalid_argument("b must be >= 2");
  const double s = 2.0 * t;
  if (!(s > 1.0)) throw DivergenceError("comparison sums diverge for t <= 1/2");
  Thm46Result r;
  r.b = b;
  r.t = t;
  r.reading = reading;
  const Interval z = shifted_zeta(s);
  r.lhs = pow(Interval(2.0 * (b - 1)), -s) * z;
  if (reading == Thm46Reading::Literal) {
    // The summand does not depend on j, so the right side diverges; a partial
    // sum over finitely many j certifies the inequality.
    r.rhs_diverges = true;
    const Interval term = pow(Interval(b - 1.5), -s) * z;
    constexpr std::int64_t kMaxTerms = 1'000'000;
    Interval partial(0.0);
    for (std::int64_t j = 1; j <= kMaxTerms; ++j) {
      partial += term;
      r.j_terms = j;
      if (partial.lo >= r.lhs.hi) break;
    }
    r.rhs = partial;
  } else {
    r.rhs = z * power_sum_tail(b + 1, Interval(1.0), Interval(-1.5), s);
    r.j_terms = 0;
  }
  r.certified = r.lhs.hi <= r.rhs.lo;
  return r;
}

mpz_class second_level_denominator(std::int64_t r, std::int64_t p, std::int64_t q, std::int64_t s) {
  if (r < 0 || q < 0 || p < 3 || s < 3) {
    throw std::invalid_argument("second level words need r, q >= 0 and p, s >= 3");
  }
  const mpz_class d = mpz_class(r + 1) * (p - 2) + 1;
  const mpz_class base = mpz_class(p) * (r + 1) - r;
  const mpz_class x = base + mpz_class(q) * d;
  const mpz_class x_prev = base + mpz_class(q - 1) * d;
  return mpz_class(s - 1) * x - x_prev;
}

mpq_class second_level_norm(std::int64_t r, std::int64_t p, std::int64_t q, std::int64_t s) {
  const mpz_class a = second_level_denominator(r, p, q, s);
  mpq_class v(mpz_class(1), a * a);
  v.canonicalize();
  return v;
}

Interval star_tail_constant(const AlphabetSpec& a, double t, int cutoff) {
  if (!(2.0 * t > 1.0)) throw DivergenceError("parabolic run constant diverges for t <= 1/2");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  int m = 0;
  for (int j : a.finite_part()) {
    if (j >= 3) {
      m = j;
      break;
    }
  }
  if (m == 0 && a.cofinite_from()) m = std::max(3, *a.cofinite_from());
  if (m == 0) throw DegenerateSystem("degenerate parabolic-only subsystem");
  // X_2 ends at phi_m(1) = 1/(m-1); |phi_{2^n}'| is largest there.
  const mpq_class x(1, m - 1);
  Interval sum(0.0);
  MoebiusWord w(Convention::Backward);
  for (int n = 0; n < cutoff; ++n) {
    sum += pow(enclose(w.derivative_abs(x)), t);
    w.push_back(2);
  }
  // q_n - x q_{n-1} = n (1 - x) + 1.
  const Interval slope = enclose(mpq_class(1) - x);
  return sum + power_sum_tail(cutoff, slope, Interval(1.0), 2.0 * t);
}

}  // namespace bcfdim
