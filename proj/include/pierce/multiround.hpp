#pragma once

#include <cstdint>
#include <functional>

#include "pierce/geometry.hpp"
#include "pierce/mwu.hpp"
#include "pierce/solution.hpp"

namespace pierce {

// Sampling framework: pierce a sample, keep only the unpierced residue,
// repeat, and solve the final residue directly.
struct MultiRoundConfig {
  int rounds = 2;
  double sample_mult = 4.0;     // m = mult * d * k * delta^{-1} * log2 n
  double restart_factor = 8.0;  // |Q_i| > f*k*max(1,loglog(k+4)) escalates k
  int max_round_retries = 3;
  MwuConfig inner;
  // inner solver; defaults to improved_mwu
  std::function<PiercingSolution(const ProblemInstance&, std::uint64_t)>
      solver;
};

PiercingSolution multi_round_pierce(const ProblemInstance& inst,
                                    std::uint64_t seed,
                                    const MultiRoundConfig& cfg = {});

// Near-linear two-round variant for the plane.
struct TwoRoundConfig {
  double sample_scale = 1048576.0;  // m1 = scale * n / log2(n)^7
  double shrink_c = 4.0;            // Lemma-sampling constant in the bound
  int max_resamples = 3;
  int direct_threshold = 100;       // below this, solve directly
  MwuConfig inner;
};

PiercingSolution two_round_2d(const ProblemInstance& inst, std::uint64_t seed,
                              const TwoRoundConfig& cfg = {});

struct ShrinkageReport {
  std::int64_t unpierced = 0;
  double bound = 0.0;  // delta * n from the sampling lemma
  bool violated = false;
};

// Counts boxes unpierced by Q and flags violation of the delta*n bound.
ShrinkageReport residual_shrinkage_check(const ProblemInstance& inst,
                                         const std::vector<Point>& q,
                                         double delta);

}  // namespace pierce
