#include "bcfdim/systems.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bcfdim/errors.hpp"

namespace bcfdim {

namespace {

constexpr struct {
  Family family;
  std::string_view name;
} kFamilyNames[] = {
    {Family::BCF, "bcf"},
    {Family::BCFStar, "bcf-star"},
    {Family::Gauss, "gauss"},
    {Family::Counterexample, "counterexample"},
    {Family::Similarity, "similarity"},
};

std::int64_t to_i64(const mpz_class& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return v.get_si();
}

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw std::invalid_argument("malformed alphabet '" + std::string(whole) + "': bad index '" +
                                std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& e : kFamilyNames) {
    if (e.family == f) return e.name;
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const auto& e : kFamilyNames) {
    if (e.name == name) return e.family;
  }
  throw std::invalid_argument("unknown system '" + std::string(name) +
                              "' (expected bcf, bcf-star, gauss, counterexample or similarity)");
}

mpq_class Mobius::apply(const mpq_class& x) const {
  mpq_class r = (a * x + b) / (c * x + d);
  r.canonicalize();
  return r;
}

mpq_class Mobius::sup_norm() const {
  const std::int64_t den = std::min(std::abs(d), std::abs(c + d));
  mpq_class r(mpz_class(std::abs(det())), mpz_class(den) * den);
  r.canonicalize();
  return r;
}

mpq_class Mobius::inf_norm() const {
  const std::int64_t den = std::max(std::abs(d), std::abs(c + d));
  mpq_class r(mpz_class(std::abs(det())), mpz_class(den) * den);
  r.canonicalize();
  return r;
}

Mobius to_mobius(const MoebiusWord& w) {
  if (w.convention() == Convention::Backward) {
    return {-to_i64(w.p_prev()), to_i64(w.p_cur()), -to_i64(w.q_prev()), to_i64(w.q_cur())};
  }
  return {to_i64(w.p_prev()), to_i64(w.p_cur()), to_i64(w.q_prev()), to_i64(w.q_cur())};
}

int SystemSpec::min_index() const {
  return (family == Family::BCF || family == Family::BCFStar) ? 2 : 1;
}

std::optional<int> SystemSpec::max_index() const {
  if (family == Family::Similarity) return static_cast<int>(ratios.size());
  return std::nullopt;
}

bool SystemSpec::is_parabolic(int b) const {
  return std::find(parabolic_indices.begin(), parabolic_indices.end(), b) != parabolic_indices.end();
}

Mobius SystemSpec::generator(int b) const {
  if (b < min_index() || (max_index() && b > *max_index())) {
    throw std::invalid_argument("index " + std::to_string(b) + " is not defined for system " + name());
  }
  switch (family) {
    case Family::BCF:
    case Family::BCFStar:
      return {0, 1, -1, b};
    case Family::Gauss:
      return {0, 1, 1, b};
    case Family::Counterexample:
      if (b == 1) return {1, 1, 0, 2};
      if (b == 2) return {n2 - 2, 2, 0, 2 * std::int64_t{n2}};
      return {0, 1, 1, b + std::int64_t{n2} - 3};
    case Family::Similarity: {
      // phi_i(x) = r_i x + s_i over a common denominator; the maps are laid
      // side by side when the ratios sum to at most 1.
      mpz_class den = 1;
      mpq_class total = 0;
      for (const auto& r : ratios) {
        den = lcm(den, mpz_class(r.get_den()));
        total += r;
      }
      mpq_class offset = 0;
      if (total <= 1) {
        for (int i = 1; i < b; ++i) offset += ratios[static_cast<std::size_t>(i - 1)];
      }
      const mpq_class& r = ratios[static_cast<std::size_t>(b - 1)];
      return {to_i64(mpz_class(r * den)), to_i64(mpz_class(offset * den)), 0, to_i64(den)};
    }
  }
  throw std::logic_error("unreachable");
}

SystemSpec make_system(Family family, const SystemParams& params) {
  SystemSpec s;
  s.family = family;
  switch (family) {
    case Family::BCF:
    case Family::BCFStar:
      s.distortion_K = 9.0;
      s.parabolic_indices = {2};
      break;
    case Family::Gauss:
    case Family::Counterexample:
      s.distortion_K = 4.0;
      break;
    case Family::Similarity:
      s.distortion_K = 1.0;
      break;
  }
  if (family == Family::Counterexample) {
    if (params.n2 < 3) throw std::invalid_argument("counterexample system needs n2 >= 3");
    s.n2 = params.n2;
  }
  if (family == Family::Similarity) {
    if (params.ratios.empty()) throw std::invalid_argument("similarity system needs at least one ratio");
    for (const auto& r : params.ratios) {
      if (r <= 0 || r >= 1) {
        throw std::invalid_argument("similarity ratio " + r.get_str() + " is outside (0,1)");
      }
    }
    s.ratios = params.ratios;
  }
  if (params.distortion_K) {
    if (!(*params.distortion_K >= 1.0)) throw std::invalid_argument("distortion constant K must be >= 1");
    s.distortion_K = *params.distortion_K;
  }
  return s;
}

AlphabetSpec::AlphabetSpec(std::vector<int> finite_part, std::optional<int> cofinite_from)
    : finite_(std::move(finite_part)), cofinite_(cofinite_from) {
  normalize();
}

AlphabetSpec AlphabetSpec::range(int first, int last) {
  std::vector<int> v;
  for (int b = first; b <= last; ++b) v.push_back(b);
  return AlphabetSpec(std::move(v));
}

void AlphabetSpec::normalize() {
  std::sort(finite_.begin(), finite_.end());
  finite_.erase(std::unique(finite_.begin(), finite_.end()), finite_.end());
  if (!cofinite_) return;
  // Absorb finite letters adjacent to or inside the cofinite range.
  std::erase_if(finite_, [&](int b) { return b >= *cofinite_; });
  while (!finite_.empty() && finite_.back() == *cofinite_ - 1) {
    cofinite_ = finite_.back();
    finite_.pop_back();
  }
}

bool AlphabetSpec::contains(int b) const {
  if (cofinite_ && b >= *cofinite_) return true;
  return std::binary_search(finite_.begin(), finite_.end(), b);
}

int AlphabetSpec::min() const {
  if (!finite_.empty()) return finite_.front();
  if (cofinite_) return *cofinite_;
  throw std::logic_error("empty alphabet has no minimum");
}

std::vector<int> AlphabetSpec::letters_up_to(int cutoff) const {
  std::vector<int> out;
  for (int b : finite_) {
    if (b <= cutoff) out.push_back(b);
  }
  if (cofinite_) {
    for (int b = *cofinite_; b <= cutoff; ++b) out.push_back(b);
  }
  return out;
}

AlphabetSpec AlphabetSpec::with(int b) const {
  auto f = finite_;
  f.push_back(b);
  return AlphabetSpec(std::move(f), cofinite_);
}

AlphabetSpec AlphabetSpec::without(int b) const {
  auto f = finite_;
  std::erase(f, b);
  auto cof = cofinite_;
  if (cof && b >= *cof) {
    for (int k = *cof; k < b; ++k) f.push_back(k);
    cof = b + 1;
  }
  return AlphabetSpec(std::move(f), cof);
}

std::string AlphabetSpec::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << ',';
    first = false;
  };
  for (std::size_t i = 0; i < finite_.size();) {
    std::size_t k = i;
    while (k + 1 < finite_.size() && finite_[k + 1] == finite_[k] + 1) ++k;
    sep();
    if (k - i >= 2) {
      os << finite_[i] << ".." << finite_[k];
    } else {
      os << finite_[i];
      if (k > i) os << ',' << finite_[k];
    }
    i = k + 1;
  }
  if (cofinite_) {
    sep();
    os << *cofinite_ << "..";
  }
  return os.str();
}

AlphabetSpec parse_alphabet(std::string_view text, const SystemSpec* system) {
  std::vector<int> finite;
  std::optional<int> cof;
  std::string_view rest = text;
  if (trim(rest).empty()) throw std::invalid_argument("malformed alphabet: empty text");
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      finite.push_back(parse_int(item, text));
    } else {
      const int a = parse_int(trim(item.substr(0, dots)), text);
      const std::string_view tail = trim(item.substr(dots + 2));
      if (tail.empty()) {
        cof = cof ? std::min(*cof, a) : a;
      } else {
        const int b = parse_int(tail, text);
        if (b < a) throw std::invalid_argument("malformed alphabet '" + std::string(text) + "': empty range");
        for (int k = a; k <= b; ++k) finite.push_back(k);
      }
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  AlphabetSpec a(std::move(finite), cof);
  if (system) validate_alphabet(*system, a);
  return a;
}

void validate_alphabet(const SystemSpec& system, const AlphabetSpec& a) {
  if (a.empty()) throw std::invalid_argument("alphabet is empty");
  if (a.min() < system.min_index()) {
    throw std::invalid_argument("index " + std::to_string(a.min()) + " is below the minimum " +
                                std::to_string(system.min_index()) + " of system " + system.name());
  }
  if (auto mx = system.max_index()) {
    if (!a.is_finite() || a.finite_part().back() > *mx) {
      throw std::invalid_argument("alphabet exceeds the " + std::to_string(*mx) + " maps of system " +
                                  system.name());
    }
  }
}

mpq_class StarGenerator::sup_norm() const { return word.sup_norm(); }

std::int64_t star_sup_denominator(std::int64_t n, std::int64_t j) { return (n + 1) * (j - 2) + 1; }

std::vector<StarGenerator> star_generators(const AlphabetSpec& a, int n_cutoff, int j_cutoff) {
  if (a.is_finite() && a.finite_part() == std::vector<int>{2}) {
    throw DegenerateSystem("degenerate parabolic-only subsystem");
  }
  if (a.min() < 2) throw std::invalid_argument("star generators are defined for BCF alphabets only");
  const int n_max = a.contains(2) ? n_cutoff : 0;
  std::vector<StarGenerator> out;
  for (int j : a.letters_up_to(j_cutoff)) {
    if (j == 2) continue;
    MoebiusWord w(Convention::Backward);
    for (int n = 0; n <= n_max; ++n) {
      out.push_back({n, j, w.extend(j)});
      w.push_back(2);
    }
  }
  return out;
}

}  // namespace bcfdim
