#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pierce/geometry.hpp"

namespace pierce {

// A piercing set in the normalized coordinate space of the instance it was
// computed for, with provenance metadata.  Validity is asserted by callers
// via verify_piercing, never assumed.
struct PiercingSolution {
  std::vector<Point> points;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::map<std::string, double> stats;

  void bump(const std::string& key, double v = 1.0) { stats[key] += v; }
};

struct RunReport {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  int dimension = 0;
  int n = 0;
  std::size_t solution_size = 0;
  int optimal_size = -1;  // -1 when the exact oracle did not run
  double ratio = -1.0;
  double wall_ms = 0.0;
  bool valid = false;
  std::map<std::string, double> counters;
};

}  // namespace pierce
