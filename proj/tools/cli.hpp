#pragma once

// Command line front end. Every report is a single JSON envelope
// {config, result, evidence, certified, version}, a CSV table, or (for
// `verify`) JSON lines ending with the envelope.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bcfdim::cli {

enum class Command { Dim, PressureCurve, Spectrum, Verify, Expand, Counterexample };

enum class Format { Json, Csv };

inline constexpr int kExitCertified = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInconclusive = 2;

struct RunConfig {
  Command command = Command::Dim;

  std::string system = "bcf";
  std::string alphabet;
  std::optional<double> distortion_K;
  int n2 = 0;
  std::string ratios;

  std::string method = "transfer";
  int depth = 12;
  double tol = 1e-3;
  int letter_cutoff = 0;
  int n_cutoff = 0;
  int grid = 256;

  double t_min = 0.0;
  double t_max = 1.0;
  int t_steps = 11;

  double target = 0.5;
  std::string universe;
  int max_index = 40;

  std::string lemma = "sandwich";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string domain = "all";
  int max_len = 4;  // random sampling box
  int max_letter = 9;
  int max_run = 6;
  int max_b = 12;
  std::string reading = "literal";
  int b_min = 5;
  int b_max = 20;
  std::optional<double> t;

  std::string value;
  int digits = 10;
  std::string kind = "backward";

  int threads = 1;
  std::string output;
  Format format = Format::Json;
};

/// Parses argv (including the program name). Returns nullopt after printing
/// help or a usage error; `exit_code` receives the code to return.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

/// Runs a parsed configuration, writing the report to config.output or `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bcfdim::cli
