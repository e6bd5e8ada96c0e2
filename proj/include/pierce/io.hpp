#pragma once

#include <map>
#include <string>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/solution.hpp"

namespace pierce {

// File formats (schemas under schemas/):
//   instance JSON : {"dimension": d, "boxes": [{"lo": [...], "hi": [...]}],
//                    "metadata": {...}}
//   solution JSON : {"points": [[...]], "algorithm": "...", "seed": u64,
//                    "stats": {...}}
//   update script : JSON lines, {"op": "insert"|"delete", "box": {...}}

struct InstanceFile {
  std::vector<RawBox> boxes;
  std::map<std::string, double> metadata;
};

struct SolutionFile {
  std::vector<std::vector<double>> points;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::map<std::string, double> stats;
};

struct ScriptOp {
  bool insert = true;
  RawBox box;
};

void write_instance(const std::string& path, const InstanceFile& inst);
InstanceFile read_instance(const std::string& path);

void write_solution(const std::string& path, const SolutionFile& sol);
SolutionFile read_solution(const std::string& path);

void write_script(const std::string& path, const std::vector<ScriptOp>& ops);
// throws std::runtime_error naming the offending line on malformed input
std::vector<ScriptOp> read_script(const std::string& path);

}  // namespace pierce
