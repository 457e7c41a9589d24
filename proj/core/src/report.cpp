#include "bcfdim/report.hpp"

#include <cmath>

namespace bcfdim {

using nlohmann::json;

namespace {

// JSON has no infinity; unbounded values are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const Interval& v) { return json::array({num(v.lo), num(v.hi)}); }

json to_json(const mpq_class& v) { return v.get_str(); }

json to_json(const Cutoffs& c) { return {{"letter_cutoff", c.letter_cutoff}, {"n_cutoff", c.n_cutoff}}; }

json to_json(const PressureBracket& b) {
  json j = {{"t", b.t},
            {"lambda_lo", num(b.lambda_lo)},
            {"lambda_hi", num(b.lambda_hi)},
            {"depth_n", b.depth_n},
            {"tail_included", b.tail_included},
            {"K_used", b.K_used},
            {"method", std::string(method_name(b.method))},
            {"star_route", b.star_route},
            {"divergent", b.divergent},
            {"cutoffs", to_json(b.cutoffs)}};
  if (b.grid > 0) j["grid"] = b.grid;
  return j;
}

json to_json(const DimensionBracket& d) {
  json ev = json::array();
  for (const auto& b : d.evidence) ev.push_back(to_json(b));
  json j = {{"t_lo", d.t_lo}, {"t_hi", d.t_hi}, {"certified", d.certified}, {"evidence", ev}};
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

json to_json(const TailBound& t) {
  return {{"kind", t.kind == TailKind::PowerTail ? "power_tail" : "star_tail"},
          {"cutoff", t.cutoff},
          {"t", t.t},
          {"mass_lo", t.mass_lo},
          {"mass_hi", t.mass_hi}};
}

json to_json(const AugmentConstants& c) {
  return {{"b", c.b}, {"norm", c.norm}, {"p_b", c.p_b}, {"r_b", c.r_b}};
}

json to_json(const SandwichReport& r) {
  return {{"omega", r.omega},
          {"omega_tilde", r.omega_tilde},
          {"n", r.n},
          {"b", r.b},
          {"ratio", to_json(r.ratio)},
          {"lower_bound", to_json(r.lower_bound)},
          {"upper_bound", to_json(r.upper_bound)},
          {"lower_ok", r.lower_ok},
          {"upper_ok", r.upper_ok}};
}

json to_json(const Thm46Result& r) {
  json j = {{"b", r.b},
            {"t", r.t},
            {"reading", std::string(reading_name(r.reading))},
            {"lhs", to_json(r.lhs)},
            {"rhs", to_json(r.rhs)},
            {"rhs_diverges", r.rhs_diverges},
            {"certified", r.certified}};
  if (r.rhs_diverges) j["rhs_partial_terms"] = r.j_terms;
  return j;
}

json to_json(const GreedyStep& s) {
  return {{"candidate", s.candidate},
          {"accepted", s.accepted},
          {"t_lo", s.bracket.t_lo},
          {"t_hi", s.bracket.t_hi},
          {"certified", s.bracket.certified}};
}

json to_json(const SpectrumResult& r) {
  json log = json::array();
  for (const auto& s : r.step_log) log.push_back(to_json(s));
  json j = {{"target_t", r.target_t},
            {"tol", r.tol},
            {"chosen", r.chosen},
            {"achieved", to_json(r.achieved)},
            {"step_log", log},
            {"certified", r.certified}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const RegularityResult& r) {
  json j = {{"regular", r.regular}, {"bracket", to_json(r.bracket)}};
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

json to_json(const GapCertificate& c) {
  return {{"n1", c.n1},
          {"n2", c.n2},
          {"tail_n1", to_json(c.tail_n1)},
          {"tail_n2", to_json(c.tail_n2)},
          {"moran_sum", to_json(c.moran_sum)},
          {"dim_12", to_json(c.dim_12)},
          {"dim_12_lo", c.dim_12_lo},
          {"dim_not1_hi", c.dim_not1_hi},
          {"dim_not2_hi", c.dim_not2_hi},
          {"phi1_not1", to_json(c.phi1_not1)},
          {"phi1_not2", to_json(c.phi1_not2)},
          {"gap", to_json(c.gap)},
          {"valid", c.valid()}};
}

json to_json(const GapReport& r) {
  return {{"certificate", to_json(r.certificate)},
          {"holds", r.holds},
          {"dim_123_lo", r.dim_123_lo},
          {"lines", r.lines}};
}

json to_json(const RationalInterval& r) {
  return {{"lo", to_json(r.lo)}, {"hi", to_json(r.hi)}, {"diameter", to_json(mpq_class(r.diameter()))}};
}

json to_json(const BcfDigits& d) {
  return {{"origin", to_json(d.origin)}, {"digits", d.digits}, {"terminated", d.terminated}};
}

json to_json(const CfDigits& d) {
  return {{"origin", to_json(d.origin)}, {"digits", d.digits}, {"terminated", d.terminated}};
}

}  // namespace bcfdim
