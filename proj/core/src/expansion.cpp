#include "bcfdim/expansion.hpp"

#include <stdexcept>
#include <string>

#include "bcfdim/moebius.hpp"

namespace bcfdim {

namespace {

mpz_class floor_of(const mpq_class& v) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void require_open_unit(const mpq_class& x) {
  if (x <= 0 || x >= 1) throw std::domain_error("x = " + x.get_str() + " is outside (0,1)");
}

}  // namespace

mpq_class parse_rational(std::string_view text) {
  const std::string s(text);
  const auto bad = [&] { return std::invalid_argument("malformed rational '" + s + "'"); };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    const bool neg = !num.empty() && num.front() == '-';
    if (!all_digits(neg ? num.substr(1) : num) || !all_digits(den)) throw bad();
    const mpz_class n(std::string(num), 10);
    const mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return q;
  }
  std::string_view body = text;
  const bool neg = !body.empty() && body.front() == '-';
  if (neg) body.remove_prefix(1);
  const auto dot = body.find('.');
  const std::string_view ip = body.substr(0, dot);
  const std::string_view fp = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
      (dot != std::string_view::npos && fp.empty())) {
    throw bad();
  }
  mpz_class den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  const std::string digits = std::string(ip.empty() ? "0" : ip) + std::string(fp);
  mpq_class q(mpz_class(digits, 10), den);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

mpq_class renyi_step(const mpq_class& x) {
  if (x < 0 || x >= 1) throw std::domain_error("renyi_step needs x in [0,1), got " + x.get_str());
  if (x == 0) return 0;
  const mpq_class y = 1 / (1 - x);
  mpq_class r = y - floor_of(y);
  r.canonicalize();
  return r;
}

mpq_class bcf_shift(const mpq_class& x) {
  if (x <= 0 || x > 1) throw std::domain_error("bcf_shift needs x in (0,1], got " + x.get_str());
  const mpq_class inv = 1 / x;
  mpq_class r = floor_of(inv) + 1 - inv;
  r.canonicalize();
  return r;
}

BcfDigits bcf_digits(const mpq_class& x, int count) {
  require_open_unit(x);
  if (count < 1) throw std::invalid_argument("digit count must be >= 1");
  BcfDigits out;
  out.origin = x;
  mpq_class u = 1 - x;
  for (int i = 0; i < count; ++i) {
    const mpz_class b = floor_of(mpq_class(1 / (1 - u))) + 1;
    out.digits.push_back(static_cast<int>(b.get_si()));
    u = renyi_step(u);
    if (u == 0) {
      out.terminated = true;
      break;
    }
  }
  return out;
}

BcfDigits bcf_digits(std::string_view x, int count) { return bcf_digits(parse_rational(x), count); }

RationalInterval bcf_eval(const std::vector<int>& digits) {
  if (digits.empty()) throw std::invalid_argument("bcf_eval needs a nonempty prefix");
  const MoebiusWord w = MoebiusWord::from_letters(digits, Convention::Backward);
  return {w.apply(0), w.apply(1)};
}

CfDigits cf_digits(const mpq_class& x, int count) {
  require_open_unit(x);
  if (count < 1) throw std::invalid_argument("digit count must be >= 1");
  CfDigits out;
  out.origin = x;
  mpq_class v = x;
  for (int i = 0; i < count; ++i) {
    const mpq_class inv = 1 / v;
    const mpz_class a = floor_of(inv);
    out.digits.push_back(static_cast<int>(a.get_si()));
    v = inv - a;
    v.canonicalize();
    if (v == 0) {
      out.terminated = true;
      break;
    }
  }
  return out;
}

RationalInterval cf_eval(const std::vector<int>& digits) {
  if (digits.empty()) throw std::invalid_argument("cf_eval needs a nonempty prefix");
  const MoebiusWord w = MoebiusWord::from_letters(digits, Convention::Forward);
  const mpq_class a = w.apply(0);
  const mpq_class b = w.apply(1);
  return a <= b ? RationalInterval{a, b} : RationalInterval{b, a};
}

}  // namespace bcfdim
