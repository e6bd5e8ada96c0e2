#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pierce/geometry.hpp"

namespace pierce {

struct GeneratedInstance {
  std::vector<RawBox> boxes;
  std::map<std::string, double> metadata;  // e.g. p_upper for planted kinds
};

// kinds: uniform-random, planted-piercing, disjoint-grid, nested,
// squares-uniform, adversarial-crate.  Deterministic for a fixed seed.
GeneratedInstance generate_instance(
    const std::string& kind, int n, int d, std::uint64_t seed,
    const std::map<std::string, double>& params = {});

std::vector<std::string> generator_kinds();

}  // namespace pierce
