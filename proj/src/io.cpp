#include "pierce/io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pierce {

namespace {

using Json = nlohmann::ordered_json;

Json box_to_json(const RawBox& b) {
  return Json{{"lo", b.lo}, {"hi", b.hi}};
}

RawBox box_from_json(const Json& j) {
  RawBox b;
  b.lo = j.at("lo").get<std::vector<double>>();
  b.hi = j.at("hi").get<std::vector<double>>();
  if (b.lo.size() != b.hi.size() || b.lo.empty())
    throw std::runtime_error("box: lo/hi size mismatch");
  return b;
}

Json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void store(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

void write_instance(const std::string& path, const InstanceFile& inst) {
  Json j;
  j["dimension"] = inst.boxes.empty() ? 0 : inst.boxes[0].dim();
  Json boxes = Json::array();
  for (const auto& b : inst.boxes) boxes.push_back(box_to_json(b));
  j["boxes"] = std::move(boxes);
  j["metadata"] = inst.metadata;
  store(path, j);
}

InstanceFile read_instance(const std::string& path) {
  Json j = load(path);
  InstanceFile out;
  for (const auto& jb : j.at("boxes")) out.boxes.push_back(box_from_json(jb));
  int d = j.at("dimension").get<int>();
  for (const auto& b : out.boxes)
    if (b.dim() != d) throw std::runtime_error("instance: dimension mismatch");
  if (j.contains("metadata"))
    out.metadata = j["metadata"].get<std::map<std::string, double>>();
  return out;
}

void write_solution(const std::string& path, const SolutionFile& sol) {
  Json j;
  j["points"] = sol.points;
  j["algorithm"] = sol.algorithm;
  j["seed"] = sol.seed;
  j["stats"] = sol.stats;
  store(path, j);
}

SolutionFile read_solution(const std::string& path) {
  Json j = load(path);
  SolutionFile out;
  out.points = j.at("points").get<std::vector<std::vector<double>>>();
  out.algorithm = j.at("algorithm").get<std::string>();
  out.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("stats"))
    out.stats = j["stats"].get<std::map<std::string, double>>();
  return out;
}

void write_script(const std::string& path, const std::vector<ScriptOp>& ops) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& op : ops) {
    Json j{{"op", op.insert ? "insert" : "delete"},
           {"box", box_to_json(op.box)}};
    out << j.dump() << "\n";
  }
}

std::vector<ScriptOp> read_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<ScriptOp> ops;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      Json j = Json::parse(line);
      ScriptOp op;
      std::string verb = j.at("op").get<std::string>();
      if (verb == "insert")
        op.insert = true;
      else if (verb == "delete")
        op.insert = false;
      else
        throw std::runtime_error("unknown op '" + verb + "'");
      op.box = box_from_json(j.at("box"));
      ops.push_back(std::move(op));
    } catch (const std::exception& e) {
      throw std::runtime_error("script line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return ops;
}

}  // namespace pierce
