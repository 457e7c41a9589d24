#pragma once

// Greedy construction of subsystems with prescribed dimension, regularity
// evidence, and the dimension-gap certificate for the counterexample family.

#include <string>
#include <vector>

#include "bcfdim/pressure.hpp"
#include "bcfdim/systems.hpp"

namespace bcfdim {

struct GreedyStep {
  int candidate = 0;
  bool accepted = false;
  DimensionBracket bracket;  // of the current set plus the candidate
};

struct SpectrumResult {
  double target_t = 0.0;
  double tol = 0.0;
  std::vector<int> chosen;
  DimensionBracket achieved;
  std::vector<GreedyStep> step_log;
  bool certified = true;
  std::string note;
};

/// Scans the indices of `universe` up to max_index in increasing order and keeps
/// b whenever the certified upper end of dim(J_{A u {b}}) is at most target_t.
/// Brackets are computed to width tol.
SpectrumResult greedy_build(const SystemSpec& system, const AlphabetSpec& universe, double target_t,
                            int max_index, double tol, const DimensionOptions& opts = {});

struct RegularityResult {
  bool regular = false;
  PressureBracket bracket;
  std::string diagnostic;
};

/// Regular when the certified lower end of lambda_A(t) is at least 1 - tol.
RegularityResult regularity_check(const SystemSpec& system, const AlphabetSpec& a, double t, int depth,
                                  double tol = 1e-3, const EngineOptions& engine = {});

struct GapCertificate {
  int n1 = 0;
  int n2 = 0;
  Interval tail_n1;       // sum_{j >= n1} j^-1.9, below 1/3
  Interval tail_n2;       // sum_{j >= n2} j^-1.9, below 1
  Interval moran_sum;     // 2^-0.97 + (1/2 - 1/n2)^0.97, above 1
  Interval dim_12;        // dimension of the {1,2} subsystem
  double dim_12_lo = 0.0;
  double dim_not1_hi = 0.0;
  double dim_not2_hi = 0.0;
  Interval phi1_not1;     // level-1 sum at t = gap.lo without map 1
  Interval phi1_not2;     // level-1 sum at t = gap.lo without map 2
  Interval gap{0.95, 0.97};

  [[nodiscard]] bool valid() const {
    return dim_12_lo > gap.hi && dim_not1_hi < gap.lo && dim_not2_hi < gap.lo;
  }
};

/// Minimal n1 with sum_{j>=n1} j^-1.9 < 1/3, then minimal n2 > n1 with
/// 2^-0.97 + (1/2 - 1/n2)^0.97 > 1, and the three dimension bounds.
GapCertificate find_gap_params(int scan_limit = 1000);

struct GapReport {
  GapCertificate certificate;
  bool holds = false;
  double dim_123_lo = 0.0;  // monotone under inclusion: at least dim_12_lo
  std::vector<std::string> lines;
};

GapReport gap_demo(const GapCertificate& certificate);

}  // namespace bcfdim
