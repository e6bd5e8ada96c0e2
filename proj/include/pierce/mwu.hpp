#pragma once

#include <cstdint>
#include <vector>

#include "pierce/eps_net.hpp"
#include "pierce/geometry.hpp"
#include "pierce/solution.hpp"

namespace pierce {

// Multiplicative-weight-update piercing.  All Theta(.) constants the source
// analysis leaves open are exposed here; validity of the output never depends
// on them (solutions are verified, with deterministic fallbacks).
struct MwuConfig {
  double round_budget_c = 8.0;   // tau = c * ln(m_hat / k), m_hat = (2n)^d
  double c1 = 1.0;               // small-independent-set branch threshold
  double heavy_denom = 4.01;     // net threshold 1/(heavy_denom * k)
  double sample_rate = 200.0;    // r = ceil(rate * k * log2 n)
  double round_cap_c2 = 4.0;     // improved-round cap c2 * log^{2d} n
  int max_stage_retries = 4;
  int max_net_retries = 4;
  std::int64_t max_k = 0;  // 0 = 4n
  NetConfig net;
};

// Optional instrumentation for the analysis audits.
struct MwuTrace {
  struct Doubling {
    int box;
    double w_before_log2, w_after_log2;  // total weight before/after
  };
  struct Stage {
    std::int64_t k = 0;
    double eps = 0;
    int rounds = 0;
    std::vector<Doubling> doublings;
  };
  std::vector<Stage> stages;

  struct Round {
    std::int64_t k = 0;
    std::vector<Point> sample;
    std::vector<int> light, indep;
    int branch = 0;  // 0: continue, 1: k too small, 2: finish
  };
  std::vector<Round> rounds;
};

// Basic algorithm: one box doubled at a time over the implicit arrangement,
// weak net extracted once a round completes quietly.
PiercingSolution basic_mwu(const ProblemInstance& inst, std::uint64_t seed,
                           const MwuConfig& cfg = {}, MwuTrace* trace = nullptr);

// Duality-based algorithm: batch sampling estimates box weights, light boxes
// feed an independent-set test that either escalates k, finishes via
// divide-and-conquer piercing plus a weak net, or batch-doubles.
PiercingSolution improved_mwu(const ProblemInstance& inst, std::uint64_t seed,
                              const MwuConfig& cfg = {},
                              MwuTrace* trace = nullptr);

}  // namespace pierce
