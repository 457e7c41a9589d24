#pragma once

// Built-in iterated function systems on [0,1] and alphabet specifications.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcfdim/moebius.hpp"

namespace bcfdim {

enum class Family { BCF, BCFStar, Gauss, Counterexample, Similarity };

/// Name used on the command line ("bcf", "bcf-star", "gauss", "counterexample", "similarity").
std::string_view family_name(Family f);
/// Inverse of family_name; throws std::invalid_argument for unknown names.
Family parse_family(std::string_view name);

/// Integer linear fractional map x -> (a x + b) / (c x + d).
struct Mobius {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  [[nodiscard]] std::int64_t det() const { return a * d - b * c; }
  [[nodiscard]] mpq_class apply(const mpq_class& x) const;
  /// sup over [0,1] of |phi'| as an exact rational.
  [[nodiscard]] mpq_class sup_norm() const;
  /// inf over [0,1] of |phi'| as an exact rational.
  [[nodiscard]] mpq_class inf_norm() const;
};

/// Matrix of a word: [[-p', p], [-q', q]] backward, [[p', p], [q', q]] forward.
Mobius to_mobius(const MoebiusWord& w);

struct SystemParams {
  std::optional<double> distortion_K;
  int n2 = 0;
  std::vector<mpq_class> ratios;
};

struct SystemSpec {
  Family family = Family::BCF;
  double distortion_K = 9.0;
  std::vector<int> parabolic_indices;
  int n2 = 0;
  std::vector<mpq_class> ratios;

  [[nodiscard]] std::string name() const { return std::string(family_name(family)); }
  /// Smallest valid index (2 for BCF families, 1 otherwise).
  [[nodiscard]] int min_index() const;
  /// Largest valid index, for the finite similarity family.
  [[nodiscard]] std::optional<int> max_index() const;
  [[nodiscard]] bool is_parabolic(int b) const;
  /// Level-1 generator phi_b.
  [[nodiscard]] Mobius generator(int b) const;
};

/// Throws std::invalid_argument on invalid parameters.
SystemSpec make_system(Family family, const SystemParams& params = {});

class AlphabetSpec {
 public:
  AlphabetSpec() = default;
  /// Finite letters plus an optional cofinite range {m, m+1, ...}; normalizes overlaps.
  AlphabetSpec(std::vector<int> finite_part, std::optional<int> cofinite_from = std::nullopt);

  static AlphabetSpec range(int first, int last);

  [[nodiscard]] const std::vector<int>& finite_part() const { return finite_; }
  [[nodiscard]] std::optional<int> cofinite_from() const { return cofinite_; }
  [[nodiscard]] bool is_finite() const { return !cofinite_; }
  [[nodiscard]] bool empty() const { return finite_.empty() && !cofinite_; }
  [[nodiscard]] bool contains(int b) const;
  [[nodiscard]] int min() const;
  /// Explicit members up to and including cutoff (all of finite_part when the alphabet is finite).
  [[nodiscard]] std::vector<int> letters_up_to(int cutoff) const;
  [[nodiscard]] AlphabetSpec with(int b) const;
  [[nodiscard]] AlphabetSpec without(int b) const;
  /// Canonical text in the parse_alphabet grammar.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const AlphabetSpec&, const AlphabetSpec&) = default;

 private:
  void normalize();
  std::vector<int> finite_;
  std::optional<int> cofinite_;
};

/// Grammar: comma separated items "k", "a..b" or "a.." (cofinite).
/// With a system, indices are validated against it.
AlphabetSpec parse_alphabet(std::string_view text, const SystemSpec* system = nullptr);

/// Throws std::invalid_argument if A has letters the system does not define.
void validate_alphabet(const SystemSpec& system, const AlphabetSpec& a);

/// Generator 2^n j of the hyperbolic system S* attached to the BCF parabolic index.
struct StarGenerator {
  int n = 0;
  int j = 3;
  MoebiusWord word;

  /// Exact sup norm ((n+1)(j-2)+1)^-2.
  [[nodiscard]] mpq_class sup_norm() const;
};

/// sup denominator (n+1)(j-2)+1 of the word 2^n j.
std::int64_t star_sup_denominator(std::int64_t n, std::int64_t j);

/// All 2^n j with n <= n_cutoff (n = 0 only if 2 is not in A), j in A \ {2}, j <= j_cutoff.
/// Throws DegenerateSystem when A = {2}.
std::vector<StarGenerator> star_generators(const AlphabetSpec& a, int n_cutoff, int j_cutoff);

}  // namespace bcfdim
