#include "bcfdim/moebius.hpp"

#include <sstream>
#include <stdexcept>

namespace bcfdim {

namespace {

int sign_of(Convention c) { return c == Convention::Backward ? -1 : 1; }

}  // namespace

int min_letter(Convention c) { return c == Convention::Backward ? 2 : 1; }

MoebiusWord::MoebiusWord(Convention c)
    : conv_(c), p_prev_(sign_of(c)), p_cur_(0), q_prev_(0), q_cur_(1) {}

MoebiusWord MoebiusWord::from_letters(const std::vector<int>& letters, Convention c) {
  MoebiusWord w(c);
  w.letters_.reserve(letters.size());
  for (int b : letters) w.push_back(b);
  return w;
}

void MoebiusWord::push_back(int b) {
  if (b < min_letter(conv_)) {
    throw std::invalid_argument("letter " + std::to_string(b) + " is outside the alphabet (minimum " +
                                std::to_string(min_letter(conv_)) + ")");
  }
  const int s = sign_of(conv_);
  mpz_class p_next = b * p_cur_ + s * p_prev_;
  mpz_class q_next = b * q_cur_ + s * q_prev_;
  p_prev_ = std::move(p_cur_);
  p_cur_ = std::move(p_next);
  q_prev_ = std::move(q_cur_);
  q_cur_ = std::move(q_next);
  letters_.push_back(b);
}

MoebiusWord MoebiusWord::extend(int b) const {
  MoebiusWord w = *this;
  w.push_back(b);
  return w;
}

mpz_class MoebiusWord::det() const { return p_cur_ * q_prev_ - p_prev_ * q_cur_; }

mpz_class MoebiusWord::sup_denominator() const {
  return conv_ == Convention::Backward ? mpz_class(q_cur_ - q_prev_) : q_cur_;
}

mpz_class MoebiusWord::inf_denominator() const {
  return conv_ == Convention::Backward ? q_cur_ : mpz_class(q_cur_ + q_prev_);
}

mpq_class MoebiusWord::sup_norm() const {
  const mpz_class d = sup_denominator();
  mpq_class r(mpz_class(1), d * d);
  r.canonicalize();
  return r;
}

mpq_class MoebiusWord::inf_norm() const {
  const mpz_class d = inf_denominator();
  mpq_class r(mpz_class(1), d * d);
  r.canonicalize();
  return r;
}

mpq_class MoebiusWord::derivative_abs(const mpq_class& x) const {
  const int s = sign_of(conv_);
  mpq_class den = q_cur_ + s * x * q_prev_;
  return 1 / (den * den);
}

mpq_class MoebiusWord::apply(const mpq_class& x) const {
  const int s = sign_of(conv_);
  mpq_class num = p_cur_ + s * x * p_prev_;
  mpq_class den = q_cur_ + s * x * q_prev_;
  mpq_class r = num / den;
  r.canonicalize();
  return r;
}

std::string MoebiusWord::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < letters_.size(); ++i) os << (i ? "," : "") << letters_[i];
  os << ')';
  return os.str();
}

MoebiusWord concat(const MoebiusWord& u, const MoebiusWord& v) {
  if (u.convention() != v.convention()) throw std::invalid_argument("concat: mixed conventions");
  MoebiusWord w = u;
  for (int b : v.letters()) w.push_back(b);
  return w;
}

MoebiusWord extend_word(const MoebiusWord& w, int b) { return w.extend(b); }

mpq_class apply_word(const MoebiusWord& w, const mpq_class& x) {
  if (x < 0 || x > 1) throw std::domain_error("apply_word: x outside [0,1]");
  return w.apply(x);
}

Interval enclose(const mpz_class& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 53) {
    const double d = v.get_d();
    return {d, d};
  }
  const double d = v.get_d();  // truncation towards zero
  return {next_down(d), next_up(d)};
}

Interval enclose(const mpq_class& v) {
  const double d = v.get_d();  // truncation towards zero
  if (mpq_class(d) == v) return {d, d};
  return {next_down(d), next_up(d)};
}

Interval log_enclosure(const mpz_class& d) {
  if (d <= 0) throw std::domain_error("log_enclosure: non-positive argument");
  if (mpz_sizeinbase(d.get_mpz_t(), 2) <= 53) return log(Interval(d.get_d()));
  long exp2 = 0;
  const double m = mpz_get_d_2exp(&exp2, d.get_mpz_t());  // d in [m, m + 2^-53) * 2^exp2
  const Interval mant{m, next_up(next_up(m))};
  return log(mant) + Interval(static_cast<double>(exp2)) * ln2();
}

namespace {

// -2 log d; scaling by -2 is exact, and log 1 = 0 is returned exactly.
LogNorm minus_two_log(const mpz_class& d, Rounding r) {
  if (d == 1) return {0.0, r};
  const Interval l = log_enclosure(d);
  return {r == Rounding::Down ? -2.0 * l.hi : -2.0 * l.lo, r};
}

}  // namespace

LogNorm word_sup_norm(const MoebiusWord& w, Rounding r) {
  if (w.empty()) throw std::invalid_argument("word_sup_norm: empty word");
  return minus_two_log(w.sup_denominator(), r);
}

LogNorm word_inf_norm(const MoebiusWord& w, Rounding r) {
  if (w.empty()) throw std::invalid_argument("word_inf_norm: empty word");
  return minus_two_log(w.inf_denominator(), r);
}

}  // namespace bcfdim
