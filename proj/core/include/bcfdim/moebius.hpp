#pragma once

// Exact words of linear fractional generators.
//
// A word w = (w_1, ..., w_n) stands for the composition
// phi_w = phi_{w_1} o ... o phi_{w_n}. Two generator conventions are covered:
//
//   backward (BCF):   phi_b(x) = 1 / (b - x),  b >= 2
//                     phi_w(x) = (p_n - x p_{n-1}) / (q_n - x q_{n-1})
//                     q_n = w_n q_{n-1} - q_{n-2}
//   forward (Gauss):  phi_b(x) = 1 / (b + x),  b >= 1
//                     phi_w(x) = (p_n + x p_{n-1}) / (q_n + x q_{n-1})
//                     q_n = w_n q_{n-1} + q_{n-2}
//
// The empty word is the identity, encoded by (p_{-1}, p_0, q_{-1}, q_0) =
// (-s, 0, 0, 1) with s the sign of the convention, so that the first
// extension yields p_1 = 1, p_0 = 0, q_1 = b, q_0 = 1.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "bcfdim/rounding.hpp"

namespace bcfdim {

enum class Convention { Backward, Forward };

enum class Rounding { Down, Up };

/// Natural log of a derivative norm, rounded in the tagged direction.
struct LogNorm {
  double value = 0.0;
  Rounding rounding = Rounding::Down;
};

class MoebiusWord {
 public:
  explicit MoebiusWord(Convention c = Convention::Backward);

  static MoebiusWord from_letters(const std::vector<int>& letters,
                                  Convention c = Convention::Backward);

  /// w . b. Throws std::invalid_argument for letters below the alphabet minimum.
  [[nodiscard]] MoebiusWord extend(int b) const;
  /// In-place variant of extend.
  void push_back(int b);

  [[nodiscard]] Convention convention() const { return conv_; }
  [[nodiscard]] const std::vector<int>& letters() const { return letters_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }

  [[nodiscard]] const mpz_class& p_prev() const { return p_prev_; }
  [[nodiscard]] const mpz_class& p_cur() const { return p_cur_; }
  [[nodiscard]] const mpz_class& q_prev() const { return q_prev_; }
  [[nodiscard]] const mpz_class& q_cur() const { return q_cur_; }

  /// p_n q_{n-1} - p_{n-1} q_n; +1 for every backward word, (-1)^(n+1) forward.
  [[nodiscard]] mpz_class det() const;

  /// Denominator d with sup_{[0,1]} |phi_w'| = 1/d^2.
  [[nodiscard]] mpz_class sup_denominator() const;
  /// Denominator d with inf_{[0,1]} |phi_w'| = 1/d^2.
  [[nodiscard]] mpz_class inf_denominator() const;

  [[nodiscard]] mpq_class sup_norm() const;
  [[nodiscard]] mpq_class inf_norm() const;

  /// |phi_w'(x)| exactly.
  [[nodiscard]] mpq_class derivative_abs(const mpq_class& x) const;

  /// phi_w(x) exactly, for x in [0,1].
  [[nodiscard]] mpq_class apply(const mpq_class& x) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const MoebiusWord& a, const MoebiusWord& b) {
    return a.conv_ == b.conv_ && a.letters_ == b.letters_;
  }

 private:
  Convention conv_;
  std::vector<int> letters_;
  mpz_class p_prev_, p_cur_, q_prev_, q_cur_;
};

/// Smallest admissible letter for a convention (2 backward, 1 forward).
int min_letter(Convention c);

/// Concatenation u . v, computed by extending u letter by letter.
MoebiusWord concat(const MoebiusWord& u, const MoebiusWord& v);

MoebiusWord extend_word(const MoebiusWord& w, int b);
mpq_class apply_word(const MoebiusWord& w, const mpq_class& x);

/// log ||phi_w'|| rounded in the requested direction. Requires a nonempty word.
LogNorm word_sup_norm(const MoebiusWord& w, Rounding r);
/// log inf |phi_w'| over [0,1], rounded in the requested direction.
LogNorm word_inf_norm(const MoebiusWord& w, Rounding r);

/// Enclosure of log(d) for a positive big integer.
Interval log_enclosure(const mpz_class& d);

/// Enclosure of a big integer as a double interval.
Interval enclose(const mpz_class& v);
/// Enclosure of a rational as a double interval.
Interval enclose(const mpq_class& v);

}  // namespace bcfdim
