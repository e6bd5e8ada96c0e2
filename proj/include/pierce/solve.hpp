#pragma once

#include <string>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/mwu.hpp"
#include "pierce/multiround.hpp"
#include "pierce/solution.hpp"

namespace pierce {

// End-to-end pipeline: normalize, run the chosen solver, map the points back
// to the original coordinates, and verify against the raw input.  The report
// never claims success for an unverified solution.
struct SolveOptions {
  std::string algorithm = "improved-mwu";
  std::uint64_t seed = 1;
  int rounds = 2;             // multiround
  bool run_exact = false;     // also run the exact oracle for the ratio
  int exact_cap_n = 40;
  std::int64_t exact_cap_vertices = 5000;
  MwuConfig mwu;
  MultiRoundConfig multi;
  TwoRoundConfig two_round;
};

struct SolveOutput {
  std::vector<std::vector<double>> points;  // original coordinate space
  RunReport report;
};

std::vector<std::string> solver_names();

SolveOutput run_solver(const std::vector<RawBox>& raw,
                       const SolveOptions& opt);

}  // namespace pierce
