#include "bcfdim/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "bcfdim/errors.hpp"
#include "bcfdim/moebius.hpp"

namespace bcfdim {

namespace {

constexpr std::uint64_t kDefaultBudget = 100'000'000;
constexpr int kMaxLetterCutoff = 8192;
constexpr int kMaxRunCutoff = 4096;
constexpr std::int64_t kMaxStarMaps = 1 << 16;

// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
void parallel_for(int chunks, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, chunks));
  if (threads == 1) {
    for (int i = 0; i < chunks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < chunks; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

Interval nonneg(Interval a) { return {std::max(0.0, a.lo), std::max(0.0, a.hi)}; }

Interval clamp_to(Interval a, Interval y) {
  return {std::clamp(a.lo, y.lo, y.hi), std::clamp(a.hi, y.lo, y.hi)};
}

// Exact image phi([0,1]) of an integer Moebius map, enclosed.
Interval image_of_unit(const Mobius& m) {
  const Interval a = enclose(m.apply(0));
  const Interval b = enclose(m.apply(1));
  return hull(a, b);
}

// |phi'(x)|^t = |det|^t |c x + d|^(-2t) over an interval of x.
Interval map_weight(const Mobius& m, Interval x, double t) {
  Interval den = Interval(static_cast<double>(m.c)) * x + Interval(static_cast<double>(m.d));
  if (den.hi < 0) den = -den;
  if (!(den.lo > 0)) throw std::domain_error("generator has a pole on its domain");
  Interval w = pow(den, -2.0 * t);
  const std::int64_t det = std::abs(m.det());
  if (det != 1) w = w * pow(Interval(static_cast<double>(det)), t);
  return w;
}

Interval map_image(const Mobius& m, Interval x) {
  const Interval num = Interval(static_cast<double>(m.a)) * x + Interval(static_cast<double>(m.b));
  const Interval den = Interval(static_cast<double>(m.c)) * x + Interval(static_cast<double>(m.d));
  return num / den;
}

// First map of a tail piece, used only to steer the non-rigorous iteration.
double tail_representative(const TailPiece& p, double x) {
  switch (p.kind) {
    case TailPieceKind::Letters:
      return 1.0 / (static_cast<double>(p.first) + p.shift + p.xsign * x);
    case TailPieceKind::StarRun: {
      const double n = static_cast<double>(p.first);
      const double j = p.j;
      return (n * (j - 1) + 1 - x * n) / (n * (j - 1) + j - x * (n + 1));
    }
    case TailPieceKind::StarLetters:
      return 1.0 / (static_cast<double>(p.first) - x);
  }
  return x;
}

// Letters-piece parameters of the cofinite tail for a non-star family.
TailPiece letters_piece(const SystemSpec& s, std::int64_t first) {
  TailPiece p;
  p.kind = TailPieceKind::Letters;
  p.first = first;
  switch (s.family) {
    case Family::BCF:
    case Family::BCFStar:
      p.shift = 0.0;
      p.xsign = -1;
      break;
    case Family::Gauss:
      p.shift = 0.0;
      p.xsign = 1;
      break;
    case Family::Counterexample:
      p.shift = s.n2 - 3.0;
      p.xsign = 1;
      break;
    case Family::Similarity:
      throw std::invalid_argument("similarity systems have finitely many maps");
  }
  const double min_den = static_cast<double>(first) + p.shift + std::min(p.xsign, 0);
  p.image_hull = {0.0, (Interval(1.0) / Interval(min_den)).hi};
  return p;
}

mpq_class star_image_at_zero(std::int64_t n, int j) {
  // phi_{2^n j}(0) = p/q with p = n(j-1)+1, q = n(j-1)+j.
  mpq_class r(mpz_class(n * (j - 1) + 1), mpz_class(n * (j - 1) + j));
  r.canonicalize();
  return r;
}

// Width heuristic for the tail-budget rule: mass times image diameter plus the
// width of the mass enclosure itself.
double tail_width(const TailPiece& p, double t) {
  const Interval x = p.kind == TailPieceKind::Letters && p.xsign > 0 ? Interval(0.0) : Interval(1.0);
  const Interval m = tail_weight(p, x, t);
  return m.hi * p.image_hull.width() + m.width();
}

Interval log_root(Interval phi, int n) {
  const Interval l = log(phi);
  return exp(Interval(next_down(l.lo / n), next_up(l.hi / n)));
}

}  // namespace

std::string_view method_name(PressureMethod m) {
  return m == PressureMethod::Partition ? "partition" : "transfer";
}

PressureMethod parse_method(std::string_view name) {
  if (name == "partition") return PressureMethod::Partition;
  if (name == "transfer") return PressureMethod::Transfer;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected partition or transfer)");
}

std::uint64_t default_enumeration_budget() {
  if (const char* env = std::getenv("BCFDIM_ENUM_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

bool uses_star_route(const SystemSpec& system, const AlphabetSpec& a) {
  if (system.family == Family::BCFStar) return true;
  return system.family == Family::BCF && a.contains(2);
}

Interval tail_weight(const TailPiece& piece, Interval x, double t) {
  const double s = 2.0 * t;
  switch (piece.kind) {
    case TailPieceKind::Letters: {
      const Interval offset = Interval(piece.shift) + Interval(static_cast<double>(piece.xsign)) * x;
      return power_sum_tail(piece.first, Interval(1.0), offset, s);
    }
    case TailPieceKind::StarRun:
      return star_run_tail(piece.j, piece.first, x, s);
    case TailPieceKind::StarLetters:
      return star_letters_tail(piece.first, x, s);
  }
  return Interval(0.0);
}

Interval tail_mass(const GeneratorSet& gens, double t) {
  Interval m(0.0);
  for (const auto& p : gens.tails) {
    // Each summand is largest where its denominator is smallest.
    const Interval x = p.kind == TailPieceKind::Letters && p.xsign > 0 ? Interval(0.0) : Interval(1.0);
    m += tail_weight(p, x, t);
  }
  return m;
}

Cutoffs resolve_cutoffs(const SystemSpec& system, const AlphabetSpec& a, double t, double budget,
                        Cutoffs requested) {
  Cutoffs c = requested;
  const bool star = uses_star_route(system, a);
  const double allowance = 0.1 * budget;
  const bool convergent = 2.0 * t > 1.0;
  const int finite_max = a.finite_part().empty() ? 0 : a.finite_part().back();

  if (star && a.contains(2) && c.n_cutoff == 0) {
    c.n_cutoff = kMaxRunCutoff;
    if (convergent) {
      for (int n = 16; n <= kMaxRunCutoff; n *= 2) {
        double w = 0.0;
        for (int j : a.letters_up_to(std::max(finite_max, a.cofinite_from().value_or(0)))) {
          if (j == 2) continue;
          TailPiece p{TailPieceKind::StarRun, n + 1, j, 0.0, -1,
                      {enclose(star_image_at_zero(n + 1, j)).lo, 1.0}};
          w += tail_width(p, t);
        }
        if (w <= allowance) {
          c.n_cutoff = n;
          break;
        }
      }
    }
  }
  if (!a.is_finite() && c.letter_cutoff == 0) {
    const int floor_cut = std::max(finite_max, *a.cofinite_from());
    int cap = kMaxLetterCutoff;
    if (star && a.contains(2)) {
      cap = static_cast<int>(std::max<std::int64_t>(floor_cut, kMaxStarMaps / (c.n_cutoff + 1)));
    }
    c.letter_cutoff = std::max(cap, floor_cut);
    if (convergent) {
      for (int l = 16; l <= cap; l *= 2) {
        if (l < floor_cut) continue;
        TailPiece p;
        if (star && a.contains(2)) {
          p = {TailPieceKind::StarLetters, l + 1, 0, 0.0, -1, {0.0, 1.0}};
        } else {
          p = letters_piece(system, l + 1);
        }
        if (tail_width(p, t) <= allowance) {
          c.letter_cutoff = l;
          break;
        }
      }
    }
  }
  return c;
}

GeneratorSet compile_generators(const SystemSpec& system, const AlphabetSpec& a, const Cutoffs& cutoffs) {
  validate_alphabet(system, a);
  GeneratorSet g;
  g.K = system.distortion_K;
  g.star_route = uses_star_route(system, a);
  g.cutoffs = cutoffs;
  const int finite_max = a.finite_part().empty() ? 0 : a.finite_part().back();
  int explicit_max = finite_max;
  if (!a.is_finite()) {
    if (cutoffs.letter_cutoff < *a.cofinite_from() - 1 || cutoffs.letter_cutoff < finite_max) {
      throw std::invalid_argument("letter cutoff " + std::to_string(cutoffs.letter_cutoff) +
                                  " does not cover the finite part of " + a.to_string());
    }
    explicit_max = cutoffs.letter_cutoff;
    if (system.family == Family::Counterexample) explicit_max = std::max(explicit_max, 2);
  }
  const std::vector<int> letters = a.letters_up_to(explicit_max);

  if (!g.star_route) {
    for (int b : letters) g.maps.push_back(system.generator(b));
    if (!a.is_finite()) g.tails.push_back(letters_piece(system, explicit_max + 1));
  } else {
    if (a.is_finite() && letters == std::vector<int>{2}) {
      throw DegenerateSystem("degenerate parabolic-only subsystem");
    }
    const bool parabolic = a.contains(2);
    if (parabolic && cutoffs.n_cutoff < 0) throw std::invalid_argument("negative run cutoff");
    for (const auto& s : star_generators(AlphabetSpec(letters), parabolic ? cutoffs.n_cutoff : 0, explicit_max)) {
      g.maps.push_back(to_mobius(s.word));
    }
    if (parabolic) {
      for (int j : letters) {
        if (j == 2) continue;
        TailPiece p{TailPieceKind::StarRun, cutoffs.n_cutoff + 1, j, 0.0, -1, {}};
        p.image_hull = {enclose(star_image_at_zero(p.first, j)).lo, 1.0};
        g.tails.push_back(p);
      }
    }
    if (!a.is_finite()) {
      if (parabolic) {
        g.tails.push_back({TailPieceKind::StarLetters, explicit_max + 1, 0, 0.0, -1, {0.0, 1.0}});
      } else {
        g.tails.push_back(letters_piece(system, explicit_max + 1));
      }
    }
  }
  if (g.maps.empty()) throw std::invalid_argument("no explicit generators below the cutoffs");

  bool first = true;
  for (const auto& m : g.maps) {
    const Interval im = image_of_unit(m);
    g.hull = first ? im : hull(g.hull, im);
    first = false;
  }
  for (const auto& p : g.tails) g.hull = hull(g.hull, p.image_hull);
  g.hull = {std::max(0.0, g.hull.lo), std::min(1.0, g.hull.hi)};
  g.theta = g.tails.empty() ? 0.0 : 0.5;
  return g;
}

namespace {

struct Mat128 {
  int128 a, b, c, d;
};

struct MatZ {
  mpz_class a, b, c, d;
};

inline Mat128 mul(const Mat128& x, const Mobius& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline MatZ mul(const MatZ& x, const Mobius& y) {
  const mpz_class ya(static_cast<long>(y.a)), yb(static_cast<long>(y.b)), yc(static_cast<long>(y.c)),
      yd(static_cast<long>(y.d));
  return {x.a * ya + x.b * yc, x.a * yb + x.b * yd, x.c * ya + x.d * yc, x.c * yb + x.d * yd};
}

int128 abs128(int128 v) { return v < 0 ? -v : v; }

Interval leaf_weight(const Mat128& m, double t) {
  const int128 det = abs128(m.a * m.d - m.b * m.c);
  const int128 den = std::min(abs128(m.d), abs128(m.c + m.d));
  Interval w = pow(enclose(den), -2.0 * t);
  if (det != 1) w = w * pow(enclose(det), t);
  return w;
}

Interval leaf_weight(const MatZ& m, double t) {
  const mpz_class det = abs(mpz_class(m.a * m.d - m.b * m.c));
  const mpz_class d1 = abs(m.d);
  const mpz_class d2 = abs(mpz_class(m.c + m.d));
  const mpz_class& den = d1 < d2 ? d1 : d2;
  Interval w = exp(Interval(-2.0 * t) * log_enclosure(den));
  if (det != 1) w = w * exp(Interval(t) * log_enclosure(det));
  return w;
}

template <class M>
void enumerate(const std::vector<Mobius>& maps, const M& acc, int remaining, double t, Interval& sum) {
  if (remaining == 0) {
    sum += leaf_weight(acc, t);
    return;
  }
  for (const auto& g : maps) enumerate(maps, mul(acc, g), remaining - 1, t, sum);
}

// Words over `maps` of exact length n; partitioned by first letter, each part
// summed in lexicographic order and combined in letter order.
Interval enumerate_level(const std::vector<Mobius>& maps, int n, double t, const EngineOptions& opts) {
  if (n < 1) throw std::invalid_argument("partition depth must be >= 1");
  const double words = std::pow(static_cast<double>(maps.size()), n);
  if (words > static_cast<double>(opts.enumeration_budget)) {
    throw BudgetExceeded("enumeration of " + std::to_string(maps.size()) + "^" + std::to_string(n) +
                         " words exceeds the budget of " + std::to_string(opts.enumeration_budget) +
                         " (set BCFDIM_ENUM_BUDGET to override)");
  }
  std::int64_t entry = 1;
  for (const auto& m : maps) {
    entry = std::max({entry, std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  }
  // Entries of a product of n matrices are at most (2 * entry)^n in magnitude.
  const bool fits = n * std::log2(2.0 * static_cast<double>(entry)) < 120.0;
  std::vector<Interval> parts(maps.size(), Interval(0.0));
  parallel_for(static_cast<int>(maps.size()), opts.threads, [&](int i) {
    const Mobius& g = maps[static_cast<std::size_t>(i)];
    Interval s(0.0);
    if (fits) {
      enumerate(maps, Mat128{g.a, g.b, g.c, g.d}, n - 1, t, s);
    } else {
      MatZ z{mpz_class(static_cast<long>(g.a)), mpz_class(static_cast<long>(g.b)),
             mpz_class(static_cast<long>(g.c)), mpz_class(static_cast<long>(g.d))};
      enumerate(maps, z, n - 1, t, s);
    }
    parts[static_cast<std::size_t>(i)] = s;
  });
  Interval total(0.0);
  for (const auto& p : parts) total += p;
  return total;
}

struct PartitionData {
  std::vector<Interval> core;  // core[k] = Phi_k over explicit maps, core[0] = 1
  double tail_hi = 0.0;
  double upper = 0.0;  // rigorous upper bound on Phi_n of the full set
};

PartitionData partition_data(const GeneratorSet& gens, int n, double t, const EngineOptions& opts) {
  PartitionData d;
  if (gens.infinite() && !(t > gens.theta)) {
    throw DivergenceError("partition sum diverges at t = " + std::to_string(t) +
                          " (threshold " + std::to_string(gens.theta) + ")");
  }
  if (!gens.infinite()) {
    d.core = {Interval(1.0)};
    d.core.resize(static_cast<std::size_t>(n) + 1, Interval(0.0));
    d.core[static_cast<std::size_t>(n)] = enumerate_level(gens.maps, n, t, opts);
    d.upper = d.core[static_cast<std::size_t>(n)].hi;
    return d;
  }
  d.core.push_back(Interval(1.0));
  for (int k = 1; k <= n; ++k) d.core.push_back(enumerate_level(gens.maps, k, t, opts));
  d.tail_hi = tail_mass(gens, t).hi;
  // V(k) = Phi_k(core) + sum_{i=1..k} Phi_{i-1}(core) T V(k-i): split at the first tail letter.
  std::vector<Interval> v(static_cast<std::size_t>(n) + 1, Interval(0.0));
  v[0] = Interval(1.0);
  const Interval tail(d.tail_hi);
  for (int k = 1; k <= n; ++k) {
    Interval acc(d.core[static_cast<std::size_t>(k)].hi);
    for (int i = 1; i <= k; ++i) {
      acc += Interval(d.core[static_cast<std::size_t>(i - 1)].hi) * tail * v[static_cast<std::size_t>(k - i)];
    }
    v[static_cast<std::size_t>(k)] = Interval(acc.hi);
  }
  d.upper = v[static_cast<std::size_t>(n)].hi;
  return d;
}

}  // namespace

Interval partition_sum(const GeneratorSet& gens, int n, double t, const EngineOptions& opts) {
  const PartitionData d = partition_data(gens, n, t, opts);
  return {d.core[static_cast<std::size_t>(n)].lo, d.upper};
}

Interval partition_sum(const SystemSpec& system, const AlphabetSpec& a, int n, double t, const Cutoffs& cutoffs,
                       const EngineOptions& opts) {
  const Cutoffs c = resolve_cutoffs(system, a, t, 1e-4, cutoffs);
  return partition_sum(compile_generators(system, a, c), n, t, opts);
}

// ---------------------------------------------------------------------------
// Transfer operator

TransferEngine::TransferEngine(GeneratorSet gens, int grid, int threads)
    : gens_(std::move(gens)), grid_(std::max(grid, 2)), threads_(std::max(threads, 1)) {
  f_.assign(static_cast<std::size_t>(grid_) + 1, 1.0);
}

double TransferEngine::node(int i) const {
  if (i >= grid_) return gens_.hull.hi;
  return gens_.hull.lo + (gens_.hull.hi - gens_.hull.lo) * i / grid_;
}

namespace {

// Cell k of the grid with node(k) <= y <= node(k+1).
template <class NodeFn>
int locate(double y, double lo, double hi, int grid, const NodeFn& node) {
  int k = static_cast<int>((y - lo) / (hi - lo) * grid);
  k = std::clamp(k, 0, grid - 1);
  while (k > 0 && y < node(k)) --k;
  while (k < grid - 1 && y > node(k + 1)) ++k;
  return k;
}

}  // namespace

void TransferEngine::set_generators(GeneratorSet gens) {
  const Interval old = gens_.hull;
  const std::vector<double> old_f = f_;
  const int old_grid = grid_;
  gens_ = std::move(gens);
  if (gens_.hull.lo == old.lo && gens_.hull.hi == old.hi) return;
  // Reinterpolate on the new hull, extending by constants.
  for (int i = 0; i <= grid_; ++i) {
    const double y = std::clamp(node(i), old.lo, old.hi);
    const double pos = (y - old.lo) / (old.hi - old.lo) * old_grid;
    const int k = std::clamp(static_cast<int>(pos), 0, old_grid - 1);
    const double fr = std::clamp(pos - k, 0.0, 1.0);
    f_[static_cast<std::size_t>(i)] = old_f[static_cast<std::size_t>(k)] * (1 - fr) + old_f[static_cast<std::size_t>(k + 1)] * fr;
  }
}

void TransferEngine::regrid(int grid) {
  grid = std::max(grid, 2);
  std::vector<double> nf(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) {
    const double pos = static_cast<double>(i) * grid_ / grid;
    const int k = std::clamp(static_cast<int>(pos), 0, grid_ - 1);
    const double fr = std::clamp(pos - k, 0.0, 1.0);
    nf[static_cast<std::size_t>(i)] = f_[static_cast<std::size_t>(k)] * (1 - fr) + f_[static_cast<std::size_t>(k + 1)] * fr;
  }
  f_ = std::move(nf);
  grid_ = grid;
}

double TransferEngine::iterate(double t, int iterations) {
  const double lo = gens_.hull.lo;
  const double hi = gens_.hull.hi;
  const double scale = grid_ / (hi - lo);
  auto interp = [&](const std::vector<double>& f, double y) {
    const double pos = std::clamp((y - lo) * scale, 0.0, static_cast<double>(grid_));
    const int k = std::min(static_cast<int>(pos), grid_ - 1);
    const double fr = pos - k;
    return f[static_cast<std::size_t>(k)] * (1 - fr) + f[static_cast<std::size_t>(k + 1)] * fr;
  };
  const int nodes = grid_ + 1;
  const int chunk = 64;
  const int chunks = (nodes + chunk - 1) / chunk;
  // Tail masses at the nodes do not change between iterations.
  std::vector<double> tail_w(static_cast<std::size_t>(nodes) * gens_.tails.size());
  parallel_for(chunks, threads_, [&](int c) {
    for (int i = c * chunk; i < std::min(nodes, (c + 1) * chunk); ++i) {
      for (std::size_t p = 0; p < gens_.tails.size(); ++p) {
        tail_w[static_cast<std::size_t>(i) * gens_.tails.size() + p] = tail_weight(gens_.tails[p], Interval(node(i)), t).mid();
      }
    }
  });
  double estimate = 0.0;
  std::vector<double> g(static_cast<std::size_t>(nodes));
  for (int it = 0; it < iterations; ++it) {
    parallel_for(chunks, threads_, [&](int c) {
      for (int i = c * chunk; i < std::min(nodes, (c + 1) * chunk); ++i) {
        const double x = node(i);
        double s = 0.0;
        for (const auto& m : gens_.maps) {
          const double den = std::abs(m.c * x + m.d);
          double w = std::pow(den, -2.0 * t);
          const std::int64_t det = std::abs(m.det());
          if (det != 1) w *= std::pow(static_cast<double>(det), t);
          s += w * interp(f_, (m.a * x + m.b) / (m.c * x + m.d));
        }
        for (std::size_t p = 0; p < gens_.tails.size(); ++p) {
          s += tail_w[static_cast<std::size_t>(i) * gens_.tails.size() + p] *
               interp(f_, tail_representative(gens_.tails[p], x));
        }
        g[static_cast<std::size_t>(i)] = s;
      }
    });
    const double gmax = *std::max_element(g.begin(), g.end());
    const double fmax = *std::max_element(f_.begin(), f_.end());
    estimate = gmax / fmax;
    for (int i = 0; i < nodes; ++i) {
      f_[static_cast<std::size_t>(i)] = std::max(g[static_cast<std::size_t>(i)] / gmax, 1e-300);
    }
  }
  return estimate;
}

PressureBracket TransferEngine::certify(double t) const {
  if (gens_.infinite() && !(t > gens_.theta)) {
    throw DivergenceError("transfer operator undefined at t = " + std::to_string(t) + " (threshold " +
                          std::to_string(gens_.theta) + ")");
  }
  const Interval y = gens_.hull;
  auto nodef = [this](int i) { return node(i); };
  // PL value of f at a point, enclosed.
  auto f_at = [&](double p) {
    const int k = locate(p, y.lo, y.hi, grid_, nodef);
    const double x0 = node(k);
    const double x1 = node(k + 1);
    Interval fr = (Interval(p) - Interval(x0)) / (Interval(x1) - Interval(x0));
    fr = {std::clamp(fr.lo, 0.0, 1.0), std::clamp(fr.hi, 0.0, 1.0)};
    const double f0 = f_[static_cast<std::size_t>(k)];
    const double f1 = f_[static_cast<std::size_t>(k + 1)];
    const Interval v = Interval(f0) + (Interval(f1) - Interval(f0)) * fr;
    return Interval(std::max(v.lo, std::min(f0, f1)), std::min(v.hi, std::max(f0, f1)));
  };
  // Range of the PL test function over [a, b] inside Y.
  auto f_range = [&](Interval ab) {
    ab = clamp_to(ab, y);
    Interval r = hull(f_at(ab.lo), f_at(ab.hi));
    const int ka = locate(ab.lo, y.lo, y.hi, grid_, nodef);
    for (int k = ka + 1; k <= grid_ && node(k) < ab.hi; ++k) {
      const double v = f_[static_cast<std::size_t>(k)];
      r = {std::min(r.lo, v), std::max(r.hi, v)};
    }
    return r;
  };

  std::vector<Interval> tail_range;
  for (const auto& p : gens_.tails) tail_range.push_back(f_range(p.image_hull));

  // Slopes of the PL test function per cell, with sparse tables for range queries.
  std::vector<std::vector<double>> smin(1), smax(1);
  smin[0].resize(static_cast<std::size_t>(grid_));
  smax[0].resize(static_cast<std::size_t>(grid_));
  for (int k = 0; k < grid_; ++k) {
    const Interval s = (Interval(f_[static_cast<std::size_t>(k + 1)]) - Interval(f_[static_cast<std::size_t>(k)])) /
                       (Interval(node(k + 1)) - Interval(node(k)));
    smin[0][static_cast<std::size_t>(k)] = s.lo;
    smax[0][static_cast<std::size_t>(k)] = s.hi;
  }
  for (std::size_t len = 2; len <= static_cast<std::size_t>(grid_); len *= 2) {
    const auto& pmin = smin.back();
    const auto& pmax = smax.back();
    std::vector<double> nmin(pmin.size() - len / 2), nmax(pmax.size() - len / 2);
    for (std::size_t k = 0; k < nmin.size(); ++k) {
      nmin[k] = std::min(pmin[k], pmin[k + len / 2]);
      nmax[k] = std::max(pmax[k], pmax[k + len / 2]);
    }
    smin.push_back(std::move(nmin));
    smax.push_back(std::move(nmax));
  }
  auto slope_range = [&](Interval ab) {
    ab = clamp_to(ab, y);
    const int ka = locate(ab.lo, y.lo, y.hi, grid_, nodef);
    const int kb = locate(ab.hi, y.lo, y.hi, grid_, nodef);
    const int level = std::bit_width(static_cast<unsigned>(kb - ka + 1)) - 1;
    const auto a = static_cast<std::size_t>(ka);
    const auto b = static_cast<std::size_t>(kb + 1 - (1 << level));
    const auto l = static_cast<std::size_t>(level);
    return Interval(std::min(smin[l][a], smin[l][b]), std::max(smax[l][a], smax[l][b]));
  };

  struct NodeData {
    Interval w, im, f, den;
  };
  const std::size_t nmaps = gens_.maps.size();
  const double s2 = 2.0 * t;
  std::vector<Interval> curv_w(nmaps), det_t(nmaps);
  for (std::size_t g = 0; g < nmaps; ++g) {
    const Mobius& m = gens_.maps[g];
    det_t[g] = pow(Interval(static_cast<double>(std::abs(m.det()))), t);
    // sup |w''| = 2t(2t+1) c^2 |det|^t den^(-2t-2)
    curv_w[g] = Interval(s2) * Interval(s2 + 1.0) * Interval(static_cast<double>(m.c)) *
                Interval(static_cast<double>(m.c)) * det_t[g];
  }

  const int chunk = 64;
  const int chunks = (grid_ + chunk - 1) / chunk;
  std::vector<double> chunk_lo(static_cast<std::size_t>(chunks), kInf);
  std::vector<double> chunk_hi(static_cast<std::size_t>(chunks), 0.0);

  parallel_for(chunks, threads_, [&](int c) {
    const int first = c * chunk;
    const int last = std::min(grid_, (c + 1) * chunk);
    std::vector<NodeData> d0(nmaps), d1(nmaps);
    Interval sum0, sum1;
    auto fill = [&](int i, std::vector<NodeData>& d, Interval& sum) {
      const Interval x(node(i));
      sum = Interval(0.0);
      for (std::size_t g = 0; g < nmaps; ++g) {
        const Mobius& m = gens_.maps[g];
        Interval den = Interval(static_cast<double>(m.c)) * x + Interval(static_cast<double>(m.d));
        if (den.hi < 0) den = -den;
        d[g].den = den;
        d[g].w = map_weight(m, x, t);
        d[g].im = map_image(m, x);
        d[g].f = f_range(d[g].im);
        sum += d[g].w * d[g].f;
      }
    };
    fill(first, d0, sum0);
    double lo = kInf;
    double hi = 0.0;
    for (int i = first; i < last; ++i) {
      fill(i + 1, d1, sum1);
      const Interval h = Interval(node(i + 1)) - Interval(node(i));
      const Interval h2_8 = h * h / Interval(8.0);
      Interval s_lo(0.0), s_hi(0.0);    // cell-uniform bounds
      Interval e_up(0.0), e_lo(0.0);    // second-order remainders
      for (std::size_t g = 0; g < nmaps; ++g) {
        const NodeData& a = d0[g];
        const NodeData& b = d1[g];
        const Interval img = hull(a.im, b.im);
        const Interval w = hull(a.w, b.w);
        const Interval fr = f_range(img);
        s_lo += Interval(w.lo) * Interval(fr.lo);
        s_hi += Interval(w.hi) * Interval(fr.hi);

        const Mobius& m = gens_.maps[g];
        const Interval den(std::min(a.den.lo, b.den.lo));
        const Interval sl = slope_range(img);
        const double smag = std::max(std::abs(sl.lo), std::abs(sl.hi));
        // PL kink deviation plus curvature of the map.
        const Interval width = Interval(std::max(0.0, (Interval(img.hi) - Interval(img.lo)).hi));
        const Interval phi2 = Interval(2.0 * std::abs(static_cast<double>(m.c)) * std::abs(static_cast<double>(m.det()))) /
                              (den * den * den);
        const Interval e_f = width * Interval(std::max(0.0, (Interval(sl.hi) - Interval(sl.lo)).hi)) / Interval(4.0) +
                             h2_8 * Interval(smag) * phi2;
        const Interval wmax(std::max(a.w.hi, b.w.hi));
        const Interval fmax(std::max(a.f.hi, b.f.hi));
        const Interval dwdf = (b.w - a.w) * (b.f - a.f);
        const Interval eps_w = h2_8 * curv_w[g] * pow(den, -s2 - 2.0);
        e_up += Interval(std::max(0.0, -dwdf.lo)) / Interval(4.0) + e_f * wmax;
        e_lo += Interval(std::max(0.0, dwdf.hi)) / Interval(4.0) + eps_w * fmax + e_f * wmax;
      }
      const Interval cell(node(i), node(i + 1));
      Interval t_lo(0.0), t_hi(0.0);
      for (std::size_t p = 0; p < gens_.tails.size(); ++p) {
        const Interval w = nonneg(tail_weight(gens_.tails[p], cell, t));
        t_lo += Interval(w.lo) * Interval(tail_range[p].lo);
        t_hi += Interval(w.hi) * Interval(tail_range[p].hi);
      }
      s_lo += t_lo;
      s_hi += t_hi;
      const double fa = f_[static_cast<std::size_t>(i)];
      const double fb = f_[static_cast<std::size_t>(i + 1)];
      const Interval fmin(std::min(fa, fb));
      const Interval fmax(std::max(fa, fb));
      double cell_lo = (Interval(s_lo.lo) / fmax).lo;
      double cell_hi = (Interval(s_hi.hi) / fmin).hi;
      // Chord bound: node sums over a linear f give a monotone ratio on the cell.
      const double node_hi = std::max((Interval(sum0.hi) / Interval(fa)).hi, (Interval(sum1.hi) / Interval(fb)).hi);
      const double node_lo = std::min((Interval(sum0.lo) / Interval(fa)).lo, (Interval(sum1.lo) / Interval(fb)).lo);
      cell_hi = std::min(cell_hi, (Interval(node_hi) + (e_up + t_hi) / fmin).hi);
      const Interval extra = Interval(t_lo.lo) - e_lo;
      cell_lo = std::max(cell_lo, (Interval(node_lo) + extra / (extra.lo >= 0 ? fmax : fmin)).lo);
      lo = std::min(lo, cell_lo);
      hi = std::max(hi, cell_hi);
      std::swap(d0, d1);
      std::swap(sum0, sum1);
    }
    chunk_lo[static_cast<std::size_t>(c)] = lo;
    chunk_hi[static_cast<std::size_t>(c)] = hi;
  });

  PressureBracket b;
  b.t = t;
  b.lambda_lo = std::max(0.0, *std::min_element(chunk_lo.begin(), chunk_lo.end()));
  b.lambda_hi = *std::max_element(chunk_hi.begin(), chunk_hi.end());
  b.tail_included = gens_.infinite();
  b.K_used = gens_.K;
  b.method = PressureMethod::Transfer;
  b.star_route = gens_.star_route;
  b.grid = grid_;
  b.cutoffs = gens_.cutoffs;
  return b;
}

// ---------------------------------------------------------------------------

namespace {

PressureBracket partition_bracket(const GeneratorSet& gens, double t, int n, const EngineOptions& opts) {
  const PartitionData d = partition_data(gens, n, t, opts);
  PressureBracket b;
  b.t = t;
  b.depth_n = n;
  b.K_used = gens.K;
  b.method = PressureMethod::Partition;
  b.star_route = gens.star_route;
  b.tail_included = gens.infinite();
  b.cutoffs = gens.cutoffs;
  const Interval core = d.core[static_cast<std::size_t>(n)];
  // Lower: (K^-t Phi_n)^(1/n) on the explicit maps only.
  const Interval k_t = pow(Interval(gens.K), -t);
  b.lambda_lo = log_root(Interval(core.lo) * k_t, n).lo;
  double hi = log_root(Interval(d.upper), n).hi;
  if (gens.infinite()) {
    // Augmentation: lambda <= lambda_core + K^(2t) * T.
    const Interval aug = log_root(Interval(core.hi), n) + pow(Interval(gens.K), 2.0 * t) * Interval(d.tail_hi);
    hi = std::min(hi, aug.hi);
  }
  b.lambda_hi = hi;
  return b;
}

bool single_map(const SystemSpec& system, const AlphabetSpec& a) {
  return a.is_finite() && a.finite_part().size() == 1 &&
         !(uses_star_route(system, a) && a.contains(2));
}

}  // namespace

PressureBracket lambda_bracket(const SystemSpec& system, const AlphabetSpec& a, double t, int depth_n,
                               PressureMethod method, const Cutoffs& cutoffs, const EngineOptions& opts,
                               const TransferOptions& transfer) {
  if (t < 0 || t > 1) throw std::invalid_argument("t must lie in [0,1]");
  const Cutoffs c = resolve_cutoffs(system, a, t, 1e-4, cutoffs);
  GeneratorSet gens = compile_generators(system, a, c);
  if (gens.infinite() && !(t > gens.theta)) {
    throw DivergenceError("pressure is infinite at t = " + std::to_string(t));
  }
  if (method == PressureMethod::Partition) return partition_bracket(gens, t, depth_n, opts);
  TransferEngine engine(std::move(gens), transfer.grid, opts.threads);
  engine.iterate(t, depth_n > 0 ? depth_n : transfer.iterations);
  PressureBracket b = engine.certify(t);
  b.depth_n = depth_n > 0 ? depth_n : transfer.iterations;
  return b;
}

DimensionBracket dimension_bracket(const SystemSpec& system, const AlphabetSpec& a, const DimensionOptions& opts) {
  validate_alphabet(system, a);
  DimensionBracket out;
  if (single_map(system, a)) {
    out.t_lo = out.t_hi = 0.0;
    out.certified = true;
    out.note = "single generator: the limit set is one point";
    return out;
  }
  if (uses_star_route(system, a) && a.is_finite() && a.finite_part() == std::vector<int>{2}) {
    out.t_lo = out.t_hi = 0.0;
    out.certified = true;
    out.note = "parabolic-only alphabet: the limit set is the fixed point 1";
    return out;
  }

  const bool infinite = !a.is_finite() || (uses_star_route(system, a) && a.contains(2));
  const double theta = infinite ? 0.5 : 0.0;
  out.t_lo = theta;
  out.t_hi = 1.0;
  if (infinite) {
    PressureBracket d;
    d.t = theta;
    d.lambda_lo = d.lambda_hi = kInf;
    d.divergent = true;
    d.method = opts.method;
    d.K_used = system.distortion_K;
    d.star_route = uses_star_route(system, a);
    out.evidence.push_back(d);
  }

  std::optional<TransferEngine> engine;
  Cutoffs current{-1, -1};
  bool stuck = false;
  while (out.t_hi - out.t_lo > opts.target_width && !stuck) {
    const double t = 0.5 * (out.t_lo + out.t_hi);
    const Cutoffs c = resolve_cutoffs(system, a, t, opts.lambda_resolution, opts.cutoffs);
    bool decided = false;
    if (opts.method == PressureMethod::Partition) {
      const GeneratorSet gens = compile_generators(system, a, c);
      std::vector<int> schedule;
      for (int n = 1; n < opts.max_depth; n *= 2) schedule.push_back(n);
      schedule.push_back(opts.max_depth);
      for (int n : schedule) {
        PressureBracket b;
        try {
          b = partition_bracket(gens, t, n, opts.engine);
        } catch (const BudgetExceeded& e) {
          out.note = e.what();
          break;
        }
        out.evidence.push_back(b);
        if (b.lambda_lo > 1.0) {
          out.t_lo = t;
          decided = true;
          break;
        }
        if (b.lambda_hi < 1.0) {
          out.t_hi = t;
          decided = true;
          break;
        }
      }
    } else {
      if (!engine) {
        engine.emplace(compile_generators(system, a, c), opts.grid, opts.engine.threads);
        current = c;
      } else if (c.letter_cutoff != current.letter_cutoff || c.n_cutoff != current.n_cutoff) {
        engine->set_generators(compile_generators(system, a, c));
        current = c;
      }
      while (true) {
        engine->iterate(t, opts.max_depth);
        PressureBracket b = engine->certify(t);
        b.depth_n = opts.max_depth;
        out.evidence.push_back(b);
        if (b.lambda_lo > 1.0) {
          out.t_lo = t;
          decided = true;
          break;
        }
        if (b.lambda_hi < 1.0) {
          out.t_hi = t;
          decided = true;
          break;
        }
        if (engine->grid() * 2 > opts.max_grid) break;
        engine->regrid(engine->grid() * 2);
      }
    }
    if (!decided) {
      stuck = true;
      if (out.note.empty()) out.note = "bracket straddles 1 at t = " + std::to_string(t) + " at maximum resolution";
    }
  }
  out.certified = out.t_hi - out.t_lo <= opts.target_width;
  return out;
}

// ---------------------------------------------------------------------------

double moran_solve(const std::vector<mpq_class>& ratios, double tol) {
  if (ratios.empty()) throw std::invalid_argument("moran_solve needs at least one ratio");
  std::vector<double> r;
  for (const auto& q : ratios) {
    if (q <= 0 || q >= 1) throw std::invalid_argument("moran ratios must lie in (0,1)");
    r.push_back(q.get_d());
  }
  auto f = [&](double s) {
    double sum = 0.0;
    for (double v : r) sum += std::pow(v, s);
    return sum;
  };
  if (ratios.size() == 1) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) > 1.0) hi *= 2.0;
  if (f(hi) == 1.0) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (v == 1.0) return mid;
    (v > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Interval moran_bracket(const std::vector<mpq_class>& ratios, double tol) {
  if (ratios.empty()) throw std::invalid_argument("moran_bracket needs at least one ratio");
  if (ratios.size() == 1) return {0.0, 0.0};
  mpq_class total = 0;
  for (const auto& q : ratios) total += q;
  if (total == 1) return {1.0, 1.0};
  std::vector<Interval> r;
  for (const auto& q : ratios) r.push_back(enclose(q));
  auto g = [&](double s) {
    Interval sum(0.0);
    for (const auto& v : r) sum += pow(v, s);
    return sum;
  };
  double hi = 1.0;
  while (!(g(hi).hi < 1.0)) hi *= 2.0;
  // Largest certified lower point and smallest certified upper point.
  double a = 0.0;
  double b = hi;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    (g(m).lo > 1.0 ? a : b) = m;
  }
  const double lower = a;
  a = lower;
  b = hi;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    (g(m).hi < 1.0 ? b : a) = m;
  }
  return {lower, b};
}

}  // namespace bcfdim
