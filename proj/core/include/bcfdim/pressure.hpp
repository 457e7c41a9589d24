#pragma once

// Partition sums, certified pressure brackets and dimension bisection.
//
// Two bracketing methods are available:
//  - Partition: lambda in [(K^-t Phi_n)^(1/n), Phi_n^(1/n)] from an exact
//    enumeration of all words of length n. The width is of order t log K / n.
//  - Transfer: a Collatz-Wielandt bracket for the transfer operator
//    L_t f(x) = sum_g |phi_g'(x)|^t f(phi_g(x)) on an invariant interval Y,
//    evaluated on a piecewise linear test function with outward rounding.
//    If L f <= mu f on Y then lambda <= mu; if L f >= nu f then lambda >= nu.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcfdim/rounding.hpp"
#include "bcfdim/systems.hpp"
#include "bcfdim/tail.hpp"

namespace bcfdim {

enum class PressureMethod { Partition, Transfer };

std::string_view method_name(PressureMethod m);
PressureMethod parse_method(std::string_view name);

/// Explicit truncation points for infinite generator sets. Zero means "choose
/// automatically by the tail-budget rule".
struct Cutoffs {
  int letter_cutoff = 0;  // largest explicit letter of a cofinite alphabet
  int n_cutoff = 0;       // largest explicit parabolic run length n in 2^n j
};

/// Default 1e8 words, overridable through BCFDIM_ENUM_BUDGET.
std::uint64_t default_enumeration_budget();

struct EngineOptions {
  int threads = 1;
  std::uint64_t enumeration_budget = default_enumeration_budget();
};

struct PressureBracket {
  double t = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  int depth_n = 0;
  bool tail_included = false;
  double K_used = 1.0;
  PressureMethod method = PressureMethod::Partition;
  bool star_route = false;
  int grid = 0;            // transfer grid cells, 0 for partition brackets
  bool divergent = false;  // t at or below the convergence threshold
  Cutoffs cutoffs;
};

struct DimensionBracket {
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::vector<PressureBracket> evidence;
  bool certified = false;
  std::string note;
};

/// A compiled generator set: explicit maps plus analytic tail pieces.
enum class TailPieceKind {
  Letters,      // phi_b(x) = 1 / (b + shift + xsign x), b >= first
  StarRun,      // 2^n j for n >= first
  StarLetters,  // 2^n j for all n >= 0 and j >= first
};

struct TailPiece {
  TailPieceKind kind = TailPieceKind::Letters;
  std::int64_t first = 0;
  int j = 0;
  double shift = 0.0;
  int xsign = -1;
  Interval image_hull;
};

struct GeneratorSet {
  std::vector<Mobius> maps;
  std::vector<TailPiece> tails;
  Interval hull{0.0, 1.0};  // Y, with phi_g([0,1]) inside Y for all g
  double K = 1.0;
  double theta = 0.0;  // convergence threshold, 1/2 for infinite sets
  bool star_route = false;
  Cutoffs cutoffs;

  [[nodiscard]] bool infinite() const { return !tails.empty(); }
};

/// True for BCF-family alphabets that contain 2 (or any bcf-star alphabet).
bool uses_star_route(const SystemSpec& system, const AlphabetSpec& a);

/// Resolves zero cutoffs by the tail-budget rule at exponent t with tail width
/// budget 0.1 * budget.
Cutoffs resolve_cutoffs(const SystemSpec& system, const AlphabetSpec& a, double t, double budget,
                        Cutoffs requested = {});

GeneratorSet compile_generators(const SystemSpec& system, const AlphabetSpec& a, const Cutoffs& cutoffs);

/// Tail weight sum_{g in piece} |phi_g'(x)|^t, enclosed for x in the interval.
Interval tail_weight(const TailPiece& piece, Interval x, double t);

/// Level-1 tail mass of the compiled set: sum over all tail generators of ||phi_g'||^t.
Interval tail_mass(const GeneratorSet& gens, double t);

/// Directed bounds on Phi_n(t) = sum over words of length n of ||phi_w'||^t.
/// For infinite sets lo is the truncated sum and hi adds the tail through
/// submultiplicativity. Throws DivergenceError or BudgetExceeded.
Interval partition_sum(const SystemSpec& system, const AlphabetSpec& a, int n, double t,
                       const Cutoffs& cutoffs = {}, const EngineOptions& opts = {});

/// Enumeration over an already compiled set.
Interval partition_sum(const GeneratorSet& gens, int n, double t, const EngineOptions& opts = {});

struct TransferOptions {
  int grid = 256;
  int iterations = 12;
};

/// Transfer operator bracketer with a warm-started test function.
class TransferEngine {
 public:
  TransferEngine(GeneratorSet gens, int grid, int threads = 1);

  /// Replaces the generator set (same hull) keeping the test function.
  void set_generators(GeneratorSet gens);
  /// Reinterpolates the test function onto a new grid.
  void regrid(int grid);

  /// Non-rigorous power iteration; returns the final growth estimate.
  double iterate(double t, int iterations);
  /// Rigorous bracket for the current test function.
  [[nodiscard]] PressureBracket certify(double t) const;

  [[nodiscard]] int grid() const { return grid_; }
  [[nodiscard]] const GeneratorSet& generators() const { return gens_; }
  [[nodiscard]] const std::vector<double>& test_function() const { return f_; }

 private:
  [[nodiscard]] double node(int i) const;
  GeneratorSet gens_;
  int grid_;
  int threads_;
  std::vector<double> f_;
};

/// Throws DegenerateSystem for the parabolic-only BCF alphabet {2}.
PressureBracket lambda_bracket(const SystemSpec& system, const AlphabetSpec& a, double t, int depth_n,
                               PressureMethod method = PressureMethod::Partition,
                               const Cutoffs& cutoffs = {}, const EngineOptions& opts = {},
                               const TransferOptions& transfer = {});

struct DimensionOptions {
  double target_width = 1e-3;
  int max_depth = 12;
  double lambda_resolution = 1e-4;
  PressureMethod method = PressureMethod::Transfer;
  Cutoffs cutoffs;
  int grid = 256;
  int max_grid = 1 << 15;
  EngineOptions engine;
};

DimensionBracket dimension_bracket(const SystemSpec& system, const AlphabetSpec& a,
                                   const DimensionOptions& opts = {});

/// Root of sum r_i^s = 1 by bisection to tolerance tol.
double moran_solve(const std::vector<mpq_class>& ratios, double tol = 1e-12);
/// Certified enclosure of the Moran root.
Interval moran_bracket(const std::vector<mpq_class>& ratios, double tol = 1e-12);

}  // namespace bcfdim
