#include "pierce/solve.hpp"

#include <chrono>
#include <stdexcept>

#include "pierce/classic.hpp"

namespace pierce {

std::vector<std::string> solver_names() {
  return {"greedy1d",     "dnc",          "basic-mwu", "improved-mwu",
          "multiround",   "two-round-2d", "exact"};
}

SolveOutput run_solver(const std::vector<RawBox>& raw,
                       const SolveOptions& opt) {
  SolveOutput out;
  auto inst = normalize_instance(raw);
  out.report.algorithm = opt.algorithm;
  out.report.seed = opt.seed;
  out.report.dimension = inst.dimension;
  out.report.n = inst.n();

  auto t0 = std::chrono::steady_clock::now();
  PiercingSolution sol;
  if (opt.algorithm == "greedy1d") {
    if (inst.dimension != 1)
      throw std::invalid_argument("greedy1d: instance is not 1-dimensional");
    sol.points = greedy_interval_pierce(inst.boxes);
    sol.algorithm = "greedy1d";
  } else if (opt.algorithm == "dnc") {
    sol.points = dnc_pierce(inst.boxes);
    sol.algorithm = "dnc";
  } else if (opt.algorithm == "basic-mwu") {
    sol = basic_mwu(inst, opt.seed, opt.mwu);
  } else if (opt.algorithm == "improved-mwu") {
    sol = improved_mwu(inst, opt.seed, opt.mwu);
  } else if (opt.algorithm == "multiround") {
    MultiRoundConfig cfg = opt.multi;
    cfg.rounds = opt.rounds;
    cfg.inner = opt.mwu;
    sol = multi_round_pierce(inst, opt.seed, cfg);
  } else if (opt.algorithm == "two-round-2d") {
    TwoRoundConfig cfg = opt.two_round;
    cfg.inner = opt.mwu;
    sol = two_round_2d(inst, opt.seed, cfg);
  } else if (opt.algorithm == "exact") {
    auto res = exact_piercing(inst, opt.exact_cap_n, opt.exact_cap_vertices);
    if (!res)
      throw std::runtime_error("exact: instance exceeds the oracle caps");
    sol.points = res->points;
    sol.algorithm = "exact";
  } else {
    throw std::invalid_argument("unknown algorithm '" + opt.algorithm + "'");
  }
  auto t1 = std::chrono::steady_clock::now();
  out.report.wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  for (const auto& p : sol.points)
    out.points.push_back(denormalize_point(inst, p));
  out.report.solution_size = out.points.size();
  out.report.valid = verify_piercing_raw(raw, out.points).empty();
  out.report.counters = sol.stats;

  if (opt.run_exact && opt.algorithm != "exact") {
    auto res = exact_piercing(inst, opt.exact_cap_n, opt.exact_cap_vertices);
    if (res) {
      out.report.optimal_size = static_cast<int>(res->points.size());
      if (out.report.optimal_size > 0)
        out.report.ratio = static_cast<double>(out.points.size()) /
                           out.report.optimal_size;
    }
  } else if (opt.algorithm == "exact") {
    out.report.optimal_size = static_cast<int>(out.points.size());
    out.report.ratio = 1.0;
  }
  return out;
}

}  // namespace pierce
