#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "bcfdim/augment.hpp"
#include "bcfdim/errors.hpp"
#include "bcfdim/expansion.hpp"
#include "bcfdim/pressure.hpp"
#include "bcfdim/report.hpp"
#include "bcfdim/spectrum.hpp"
#include "bcfdim/systems.hpp"
#include "bcfdim/version.hpp"

namespace bcfdim::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxReportedViolations = 20;

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Dim: return "dim";
    case Command::PressureCurve: return "pressure-curve";
    case Command::Spectrum: return "spectrum";
    case Command::Verify: return "verify";
    case Command::Expand: return "expand";
    case Command::Counterexample: return "counterexample";
  }
  return "?";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<mpq_class> parse_ratio_list(const std::string& text) {
  std::vector<mpq_class> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_rational(item));
  }
  return out;
}

SystemSpec build_system(const RunConfig& c) {
  SystemParams p;
  p.distortion_K = c.distortion_K;
  p.n2 = c.n2;
  p.ratios = parse_ratio_list(c.ratios);
  return make_system(parse_family(c.system), p);
}

AlphabetSpec build_alphabet(const std::string& text, const SystemSpec& system) {
  if (text.empty()) throw std::invalid_argument("--alphabet is required");
  return parse_alphabet(text, &system);
}

json system_config(const RunConfig& c) {
  json j = {{"system", c.system}};
  if (c.distortion_K) j["K"] = *c.distortion_K;
  if (c.n2 != 0) j["n2"] = c.n2;
  if (!c.ratios.empty()) j["ratios"] = c.ratios;
  return j;
}

json engine_config(const RunConfig& c) {
  return {{"method", c.method},
          {"depth", c.depth},
          {"grid", c.grid},
          {"letter_cutoff", c.letter_cutoff},
          {"n_cutoff", c.n_cutoff}};
}

// Everything that determines the report; the thread count and output path do not.
json config_json(const RunConfig& c) {
  json j = {{"command", std::string(command_name(c.command))}};
  auto merge = [&j](const json& more) {
    for (auto it = more.begin(); it != more.end(); ++it) j[it.key()] = it.value();
  };
  switch (c.command) {
    case Command::Dim:
      merge(system_config(c));
      merge(engine_config(c));
      j["alphabet"] = c.alphabet;
      j["tol"] = c.tol;
      break;
    case Command::PressureCurve:
      merge(system_config(c));
      merge(engine_config(c));
      j["alphabet"] = c.alphabet;
      j["t_min"] = c.t_min;
      j["t_max"] = c.t_max;
      j["t_steps"] = c.t_steps;
      break;
    case Command::Spectrum:
      merge(system_config(c));
      merge(engine_config(c));
      j["universe"] = c.universe;
      j["target"] = c.target;
      j["max_index"] = c.max_index;
      j["tol"] = c.tol;
      break;
    case Command::Verify:
      j["lemma"] = c.lemma;
      if (c.lemma == "sandwich") {
        j["samples"] = c.samples;
        j["seed"] = c.seed;
        j["domain"] = c.domain;
        j["max_len"] = c.max_len;
        j["max_letter"] = c.max_letter;
        j["max_run"] = c.max_run;
        j["max_b"] = c.max_b;
      } else if (c.lemma == "thm46") {
        j["reading"] = c.reading;
        j["b_min"] = c.b_min;
        j["b_max"] = c.b_max;
        if (c.t) j["t"] = *c.t;
      } else {
        merge(engine_config(c));
      }
      break;
    case Command::Expand:
      j["value"] = c.value;
      j["digits"] = c.digits;
      j["kind"] = c.kind;
      break;
    case Command::Counterexample:
      break;
  }
  j["format"] = c.format == Format::Csv ? "csv" : "json";
  return j;
}

json envelope(const RunConfig& c, json result, json evidence, bool certified) {
  return {{"config", config_json(c)},
          {"result", std::move(result)},
          {"evidence", std::move(evidence)},
          {"certified", certified},
          {"version", kVersion}};
}

DimensionOptions dimension_options(const RunConfig& c) {
  DimensionOptions o;
  o.target_width = c.tol;
  o.max_depth = c.depth;
  o.method = parse_method(c.method);
  o.cutoffs = {c.letter_cutoff, c.n_cutoff};
  o.grid = c.grid;
  o.engine.threads = c.threads;
  return o;
}

void require_json(const RunConfig& c) {
  if (c.format != Format::Json) {
    throw std::invalid_argument("--format csv is not available for " + std::string(command_name(c.command)));
  }
}

// ---------------------------------------------------------------------------

int cmd_dim(const RunConfig& c, std::ostream& out) {
  const SystemSpec system = build_system(c);
  const AlphabetSpec a = build_alphabet(c.alphabet, system);
  DimensionBracket d;
  if (system.family == Family::Similarity) {
    std::vector<mpq_class> r;
    for (int b : a.finite_part()) r.push_back(system.ratios.at(static_cast<std::size_t>(b - 1)));
    const Interval m = moran_bracket(r);
    d.t_lo = m.lo;
    d.t_hi = m.hi;
    d.certified = true;
    d.note = "similarity dimension (Moran equation)";
  } else {
    d = dimension_bracket(system, a, dimension_options(c));
  }
  if (c.format == Format::Csv) {
    out << "t,lambda_lo,lambda_hi,grid,depth\n";
    for (const auto& b : d.evidence) {
      out << num(b.t) << ',' << num(b.lambda_lo) << ',' << num(b.lambda_hi) << ',' << b.grid << ',' << b.depth_n
          << '\n';
    }
  } else {
    json result = to_json(d);
    json evidence = result["evidence"];
    result.erase("evidence");
    result["alphabet"] = a.to_string();
    out << envelope(c, result, evidence, d.certified).dump(2) << '\n';
  }
  return d.certified ? kExitCertified : kExitInconclusive;
}

int cmd_pressure_curve(const RunConfig& c, std::ostream& out) {
  const SystemSpec system = build_system(c);
  const AlphabetSpec a = build_alphabet(c.alphabet, system);
  if (c.t_steps < 1) throw std::invalid_argument("--t-steps must be >= 1");
  if (!(c.t_min >= 0.0 && c.t_max <= 1.0 && c.t_min <= c.t_max)) {
    throw std::invalid_argument("need 0 <= t-min <= t-max <= 1");
  }
  EngineOptions engine;
  engine.threads = c.threads;
  TransferOptions transfer;
  transfer.grid = c.grid;
  std::vector<PressureBracket> rows;
  for (int i = 0; i < c.t_steps; ++i) {
    const double t = c.t_steps == 1 ? c.t_min : c.t_min + (c.t_max - c.t_min) * i / (c.t_steps - 1);
    try {
      rows.push_back(lambda_bracket(system, a, t, c.depth, parse_method(c.method), {c.letter_cutoff, c.n_cutoff},
                                    engine, transfer));
    } catch (const DivergenceError&) {
      PressureBracket b;
      b.t = t;
      b.lambda_lo = b.lambda_hi = kInf;
      b.divergent = true;
      b.method = parse_method(c.method);
      rows.push_back(b);
    }
  }
  if (c.format == Format::Csv) {
    out << "t,lambda_lo,lambda_hi\n";
    for (const auto& b : rows) out << num(b.t) << ',' << num(b.lambda_lo) << ',' << num(b.lambda_hi) << '\n';
  } else {
    json ev = json::array();
    for (const auto& b : rows) ev.push_back(to_json(b));
    out << envelope(c, {{"alphabet", a.to_string()}, {"points", rows.size()}}, ev, true).dump(2) << '\n';
  }
  return kExitCertified;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const SystemSpec system = build_system(c);
  std::string universe = c.universe;
  if (universe.empty()) universe = system.family == Family::BCF ? "3.." : std::to_string(system.min_index()) + "..";
  const AlphabetSpec u = parse_alphabet(universe, &system);
  const SpectrumResult r = greedy_build(system, u, c.target, c.max_index, c.tol, dimension_options(c));
  if (c.format == Format::Csv) {
    out << "candidate,accepted,t_lo,t_hi,certified\n";
    for (const auto& s : r.step_log) {
      out << s.candidate << ',' << (s.accepted ? 1 : 0) << ',' << num(s.bracket.t_lo) << ','
          << num(s.bracket.t_hi) << ',' << (s.bracket.certified ? 1 : 0) << '\n';
    }
  } else {
    json ev = json::array();
    for (const auto& b : r.achieved.evidence) ev.push_back(to_json(b));
    out << envelope(c, to_json(r), ev, r.certified).dump(2) << '\n';
  }
  return r.certified ? kExitCertified : kExitInconclusive;
}

// --- verify ----------------------------------------------------------------

std::vector<std::vector<int>> words_up_to(int max_len, int lo, int hi) {
  std::vector<std::vector<int>> out{{}};
  std::size_t begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int b = lo; b <= hi; ++b) {
        std::vector<int> w = out[i];
        w.push_back(b);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

struct SweepTally {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::vector<SandwichReport> examples;

  void add(const SandwichReport& r) {
    ++checks;
    if (!r.ok()) {
      ++violations;
      if (examples.size() < kMaxReportedViolations) examples.push_back(r);
    }
  }
  void merge(SweepTally&& o) {
    checks += o.checks;
    violations += o.violations;
    for (auto& e : o.examples) {
      if (examples.size() < kMaxReportedViolations) examples.push_back(std::move(e));
    }
  }
};

// Runs body(i, tally) for i in [0, count) in fixed-size blocks; tallies merge in block order.
SweepTally blocked(std::uint64_t count, int threads, const std::function<void(std::uint64_t, SweepTally&)>& body) {
  constexpr std::uint64_t kBlock = 64;
  const std::uint64_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<SweepTally> parts(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k = next++; k < blocks; k = next++) {
      for (std::uint64_t i = k * kBlock; i < std::min(count, (k + 1) * kBlock); ++i) body(i, parts[k]);
    }
  };
  const int n = static_cast<int>(std::min<std::uint64_t>(std::max(threads, 1), std::max<std::uint64_t>(blocks, 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  SweepTally total;
  for (auto& p : parts) total.merge(std::move(p));
  return total;
}

json tally_json(const std::string& stage, const SweepTally& t) {
  json ex = json::array();
  for (const auto& r : t.examples) ex.push_back(to_json(r));
  return {{"stage", stage}, {"checks", t.checks}, {"violations", t.violations}, {"examples", ex}};
}

// Independent generator per sample, seeded from (seed, index).
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    eng_.seed(seq);
  }
  int uniform(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 eng_;
};

int verify_sandwich(const RunConfig& c, std::ostream& out) {
  const SandwichDomain domain = parse_domain(c.domain);
  if (c.max_len < 0 || c.max_letter < 3 || c.max_run < 0 || c.max_b < 5) {
    throw std::invalid_argument("sampling box needs max-len >= 0, max-letter >= 3, max-run >= 0, max-b >= 5");
  }
  const auto words = words_up_to(3, 2, 7);
  std::vector<std::size_t> omegas;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (in_domain(words[i], domain)) omegas.push_back(i);
  }
  const SweepTally sweep = blocked(omegas.size(), c.threads, [&](std::uint64_t i, SweepTally& t) {
    const auto& omega = words[omegas[i]];
    for (const auto& tilde : words) {
      for (int n = 0; n <= 5; ++n) {
        for (int b = 5; b <= 10; ++b) t.add(check_sandwich(omega, tilde, n, b));
      }
    }
  });
  const SweepTally random = blocked(c.samples, c.threads, [&](std::uint64_t i, SweepTally& t) {
    SampleRng rng(c.seed, i);
    std::vector<int> omega(static_cast<std::size_t>(rng.uniform(0, c.max_len)));
    for (int& x : omega) x = rng.uniform(2, c.max_letter);
    if (domain == SandwichDomain::Star && !omega.empty() && omega.back() == 2) {
      omega.back() = rng.uniform(3, c.max_letter);
    }
    std::vector<int> tilde(static_cast<std::size_t>(rng.uniform(0, c.max_len)));
    for (int& x : tilde) x = rng.uniform(2, c.max_letter);
    const int n = rng.uniform(0, c.max_run);
    const int b = rng.uniform(5, c.max_b);
    t.add(check_sandwich(omega, tilde, n, b));
  });
  const json s1 = tally_json("exhaustive", sweep);
  const json s2 = tally_json("random", random);
  out << s1.dump() << '\n' << s2.dump() << '\n';
  const std::uint64_t violations = sweep.violations + random.violations;
  const json result = {{"domain", c.domain},
                       {"checks", sweep.checks + random.checks},
                       {"violations", violations}};
  out << envelope(c, result, json::array({s1, s2}), violations == 0).dump() << '\n';
  return violations == 0 ? kExitCertified : kExitInconclusive;
}

int verify_thm46(const RunConfig& c, std::ostream& out) {
  const Thm46Reading reading = parse_reading(c.reading);
  if (c.b_min < 2 || c.b_max < c.b_min) throw std::invalid_argument("need 2 <= b-min <= b-max");
  json ev = json::array();
  bool all = true;
  for (int b = c.b_min; b <= c.b_max; ++b) {
    const double t = c.t ? *c.t : (b <= 5 ? 0.9975 : 1.0);
    const Thm46Result r = thm46_inequality(b, t, reading);
    const json line = to_json(r);
    out << line.dump() << '\n';
    ev.push_back(line);
    all = all && r.certified;
  }
  const json result = {{"reading", c.reading}, {"cases", ev.size()}, {"all_certified", all}};
  out << envelope(c, result, ev, all).dump() << '\n';
  return all ? kExitCertified : kExitInconclusive;
}

int verify_augment(const RunConfig& c, std::ostream& out) {
  EngineOptions engine;
  engine.threads = c.threads;
  const PressureMethod method = parse_method(c.method);
  const SystemSpec bcf = make_system(Family::BCF);
  std::map<std::pair<std::string, double>, PressureBracket> memo;
  auto bracket = [&](const std::vector<int>& letters, double t) {
    const AlphabetSpec a(letters);
    const auto key = std::make_pair(a.to_string(), t);
    auto it = memo.find(key);
    if (it == memo.end()) {
      PressureBracket b;
      b.t = t;  // empty alphabet: lambda = 0
      if (!letters.empty()) {
        b = lambda_bracket(bcf, a, t, c.depth, method, {}, engine, TransferOptions{c.grid, c.depth});
      }
      it = memo.emplace(key, b).first;
    }
    return it->second;
  };
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  json examples = json::array();
  for (double K : {9.0, 4.0}) {
    const SystemSpec sys = make_system(Family::BCF, SystemParams{K, 0, {}});
    for (unsigned mask = 0; mask < 32; ++mask) {
      std::vector<int> a;
      for (int k = 0; k < 5; ++k) {
        if (mask & (1u << k)) a.push_back(3 + k);
      }
      for (int b = 3; b <= 9; ++b) {
        if (std::find(a.begin(), a.end(), b) != a.end()) continue;
        std::vector<int> ab = a;
        ab.push_back(b);
        std::sort(ab.begin(), ab.end());
        for (double t : {0.3, 0.6, 0.9}) {
          const PressureBracket base = bracket(a, t);
          const PressureBracket aug = bracket(ab, t);
          const double lo = augment_lower(base.lambda_lo, b, t, K, sys);
          const double hi = augment_upper(base.lambda_hi, b, t, K, sys);
          const bool ok = aug.lambda_lo >= lo && aug.lambda_hi <= hi;
          ++checks;
          if (!ok) {
            ++violations;
            if (examples.size() < kMaxReportedViolations) {
              examples.push_back({{"K", K}, {"A", a}, {"b", b}, {"t", t}, {"bracket", to_json(aug)},
                                  {"bound_lo", lo}, {"bound_hi", hi}});
            }
          }
        }
      }
    }
    const json line = {{"K", K}, {"checks", checks}, {"violations", violations}};
    out << line.dump() << '\n';
  }
  const json result = {{"checks", checks}, {"violations", violations}, {"examples", examples}};
  out << envelope(c, result, json::array(), violations == 0).dump() << '\n';
  return violations == 0 ? kExitCertified : kExitInconclusive;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  require_json(c);
  if (c.lemma == "sandwich") return verify_sandwich(c, out);
  if (c.lemma == "thm46") return verify_thm46(c, out);
  if (c.lemma == "augment") return verify_augment(c, out);
  throw std::invalid_argument("unknown lemma '" + c.lemma + "' (expected sandwich, thm46 or augment)");
}

// ---------------------------------------------------------------------------

int cmd_expand(const RunConfig& c, std::ostream& out) {
  require_json(c);
  if (c.value.empty()) throw std::invalid_argument("--value is required");
  const mpq_class x = parse_rational(c.value);
  json result;
  bool contained = true;
  if (c.kind == "backward") {
    const BcfDigits d = bcf_digits(x, c.digits);
    result = to_json(d);
    if (!d.digits.empty()) {
      const RationalInterval iv = bcf_eval(d.digits);
      result["interval"] = to_json(iv);
      contained = iv.contains(x);
    }
  } else if (c.kind == "standard") {
    const CfDigits d = cf_digits(x, c.digits);
    result = to_json(d);
    if (!d.digits.empty()) {
      const RationalInterval iv = cf_eval(d.digits);
      result["interval"] = to_json(iv);
      contained = iv.contains(x);
    }
  } else {
    throw std::invalid_argument("unknown kind '" + c.kind + "' (expected backward or standard)");
  }
  result["contains_value"] = contained;
  out << envelope(c, result, json::array(), contained).dump(2) << '\n';
  return contained ? kExitCertified : kExitInconclusive;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out) {
  require_json(c);
  const GapCertificate cert = find_gap_params();
  const GapReport r = gap_demo(cert);
  out << envelope(c, to_json(r), json::array(), r.holds).dump(2) << '\n';
  return r.holds ? kExitCertified : kExitInconclusive;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::Dim: return cmd_dim(c, out);
    case Command::PressureCurve: return cmd_pressure_curve(c, out);
    case Command::Spectrum: return cmd_spectrum(c, out);
    case Command::Verify: return cmd_verify(c, out);
    case Command::Expand: return cmd_expand(c, out);
    case Command::Counterexample: return cmd_counterexample(c, out);
  }
  return kExitUsage;
}

void add_system_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--system", c.system, "bcf, bcf-star, gauss, counterexample or similarity")->capture_default_str();
  sub->add_option("--K", c.distortion_K, "distortion constant");
  sub->add_option("--n2", c.n2, "counterexample parameter n2");
  sub->add_option("--ratios", c.ratios, "similarity ratios, e.g. 1/3,1/3");
}

void add_engine_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--method", c.method, "transfer or partition")->capture_default_str();
  sub->add_option("--depth", c.depth, "partition depth n, or power iterations for transfer")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  sub->add_option("--grid", c.grid, "initial transfer grid cells")->check(CLI::Range(2, 1 << 15))->capture_default_str();
  sub->add_option("--letter-cutoff", c.letter_cutoff, "explicit letters of a cofinite alphabet (0 = automatic)");
  sub->add_option("--run-cutoff", c.n_cutoff, "explicit parabolic run length (0 = automatic)");
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  RunConfig c;
  CLI::App app{"Certified dimension brackets for continued fraction limit sets", "bcfdim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--output,-o", c.output, "write the report to a file");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto* dim = app.add_subcommand("dim", "dimension bracket of a subsystem");
  add_system_options(dim, c);
  add_engine_options(dim, c);
  dim->add_option("--alphabet", c.alphabet, "letters, e.g. 4,5,6 or 3..6 or 4..")->required();
  dim->add_option("--tol", c.tol, "target bracket width")->check(CLI::PositiveNumber)->capture_default_str();

  auto* curve = app.add_subcommand("pressure-curve", "lambda brackets on a grid of t");
  add_system_options(curve, c);
  add_engine_options(curve, c);
  curve->add_option("--alphabet", c.alphabet)->required();
  curve->add_option("--t-min", c.t_min)->capture_default_str();
  curve->add_option("--t-max", c.t_max)->capture_default_str();
  curve->add_option("--t-steps", c.t_steps)->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "greedy subsystem with prescribed dimension");
  add_system_options(spectrum, c);
  add_engine_options(spectrum, c);
  spectrum->add_option("--target", c.target, "target dimension in [0,1]")->required();
  spectrum->add_option("--universe", c.universe, "candidate indices (default 3.. for bcf)");
  spectrum->add_option("--max-index", c.max_index)->capture_default_str();
  spectrum->add_option("--tol", c.tol)->check(CLI::PositiveNumber)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "sweeps of the norm and pressure inequalities");
  add_engine_options(verify, c);
  verify->add_option("--lemma", c.lemma, "sandwich, thm46 or augment")
      ->check(CLI::IsMember({"sandwich", "thm46", "augment"}))
      ->capture_default_str();
  verify->add_option("--samples", c.samples, "random samples after the exhaustive sweep")->capture_default_str();
  verify->add_option("--seed", c.seed)->capture_default_str();
  verify->add_option("--domain", c.domain, "star or all")->check(CLI::IsMember({"star", "all"}))->capture_default_str();
  verify->add_option("--max-len", c.max_len, "longest sampled omega and omega~")->capture_default_str();
  verify->add_option("--max-letter", c.max_letter, "largest sampled letter")->capture_default_str();
  verify->add_option("--max-run", c.max_run, "largest sampled run length n")->capture_default_str();
  verify->add_option("--max-b", c.max_b, "largest sampled b")->capture_default_str();
  verify->add_option("--reading", c.reading, "literal or j-shift")
      ->check(CLI::IsMember({"literal", "j-shift"}))
      ->capture_default_str();
  verify->add_option("--b-min", c.b_min)->capture_default_str();
  verify->add_option("--b-max", c.b_max)->capture_default_str();
  verify->add_option("--t", c.t, "exponent (default 0.9975 for b <= 5, else 1)");

  auto* expand = app.add_subcommand("expand", "continued fraction digits of a rational");
  expand->add_option("--value", c.value, "p/q or a decimal")->required();
  expand->add_option("--digits", c.digits)->check(CLI::PositiveNumber)->capture_default_str();
  expand->add_option("--kind", c.kind, "backward or standard")
      ->check(CLI::IsMember({"backward", "standard"}))
      ->capture_default_str();

  app.add_subcommand("counterexample", "parameters and gap certificate of the counterexample system");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err);
    if (exit_code != 0) exit_code = kExitUsage;
    return std::nullopt;
  }
  c.format = format == "csv" ? Format::Csv : Format::Json;
  if (dim->parsed()) c.command = Command::Dim;
  if (curve->parsed()) {
    c.command = Command::PressureCurve;
    if (app.get_option("--format")->count() == 0) c.format = Format::Csv;
  }
  if (spectrum->parsed()) c.command = Command::Spectrum;
  if (verify->parsed()) c.command = Command::Verify;
  if (expand->parsed()) c.command = Command::Expand;
  if (app.got_subcommand("counterexample")) c.command = Command::Counterexample;
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code = kExitUsage;
  try {
    code = dispatch(config, buffer);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInconclusive;
  }
  if (config.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(config.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << config.output << '\n';
      return kExitUsage;
    }
    f << buffer.str();
  }
  return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = 0;
  const auto config = parse_args(argc, argv, out, err, code);
  if (!config) return code;
  return run(*config, out, err);
}

}  // namespace bcfdim::cli
