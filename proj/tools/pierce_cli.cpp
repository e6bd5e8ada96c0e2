// Command-line front end: instance generation, solving, verification,
// dynamic-script replay, and benchmarking.

#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pierce/dynamic2d.hpp"
#include "pierce/generators.hpp"
#include "pierce/io.hpp"
#include "pierce/solve.hpp"

namespace {

using Json = nlohmann::ordered_json;

std::map<std::string, double> parse_params(
    const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param expects key=value, got " + kv);
    out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return out;
}

Json report_json(const pierce::RunReport& r) {
  Json j;
  j["instance"] = r.instance;
  j["algorithm"] = r.algorithm;
  j["seed"] = r.seed;
  j["dimension"] = r.dimension;
  j["n"] = r.n;
  j["solution_size"] = r.solution_size;
  j["optimal_size"] = r.optimal_size;
  j["ratio"] = r.ratio;
  j["wall_ms"] = r.wall_ms;
  j["valid"] = r.valid;
  j["counters"] = r.counters;
  return j;
}

int cmd_generate(const std::string& kind, int n, int d, std::uint64_t seed,
                 const std::vector<std::string>& params,
                 const std::string& out_path) {
  auto gen = pierce::generate_instance(kind, n, d, seed, parse_params(params));
  pierce::InstanceFile f;
  f.boxes = std::move(gen.boxes);
  f.metadata = gen.metadata;
  f.metadata["seed"] = static_cast<double>(seed);
  pierce::write_instance(out_path, f);
  std::cout << "wrote " << f.boxes.size() << " boxes to " << out_path << "\n";
  return 0;
}

int cmd_solve(const std::string& in_path, const std::string& algo,
              std::uint64_t seed, const std::string& out_path, int rounds,
              bool with_exact, int exact_cap, double net_alpha) {
  auto inst = pierce::read_instance(in_path);
  pierce::SolveOptions opt;
  opt.algorithm = algo;
  opt.seed = seed;
  opt.rounds = rounds;
  opt.run_exact = with_exact;
  opt.exact_cap_n = exact_cap;
  opt.mwu.net.alpha = net_alpha;
  auto res = pierce::run_solver(inst.boxes, opt);
  res.report.instance = in_path;

  if (!out_path.empty()) {
    pierce::SolutionFile sf;
    sf.points = res.points;
    sf.algorithm = algo;
    sf.seed = seed;
    for (const auto& [k, v] : res.report.counters) sf.stats[k] = v;
    sf.stats["wall_ms"] = res.report.wall_ms;
    pierce::write_solution(out_path, sf);
  }
  std::cout << report_json(res.report).dump() << "\n";
  if (!res.report.valid) {
    std::cerr << "solution failed verification\n";
    return 2;
  }
  return 0;
}

int cmd_verify(const std::string& in_path, const std::string& sol_path) {
  auto inst = pierce::read_instance(in_path);
  auto sol = pierce::read_solution(sol_path);
  auto missed = pierce::verify_piercing_raw(inst.boxes, sol.points);
  Json j;
  j["boxes"] = inst.boxes.size();
  j["points"] = sol.points.size();
  j["unpierced"] = missed.size();
  std::cout << j.dump() << "\n";
  return missed.empty() ? 0 : 2;
}

int cmd_replay(const std::string& script_path, const std::string& mode,
               std::uint64_t seed, bool verify_each, bool quiet) {
  auto ops = pierce::read_script(script_path);
  auto m = mode == "squares" ? pierce::DynamicPiercer::Mode::squares
                             : pierce::DynamicPiercer::Mode::rects;
  pierce::DynamicPiercer dp(m, seed);
  std::vector<pierce::RawBox> live;
  double total_ms = 0;
  std::size_t op_no = 0;
  for (const auto& op : ops) {
    ++op_no;
    auto t0 = std::chrono::steady_clock::now();
    if (op.insert)
      dp.insert(op.box);
    else
      dp.erase(op.box);
    auto t1 = std::chrono::steady_clock::now();
    total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (verify_each) {
      if (op.insert)
        live.push_back(op.box);
      else
        for (std::size_t i = 0; i < live.size(); ++i)
          if (live[i].lo == op.box.lo && live[i].hi == op.box.hi) {
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
            break;
          }
      auto missed = pierce::verify_piercing_raw(live, dp.solution());
      if (!missed.empty()) {
        std::cerr << "op " << op_no << ": solution misses " << missed.size()
                  << " live boxes\n";
        return 2;
      }
    }
    if (!quiet) {
      Json j;
      j["op"] = op_no;
      j["live"] = dp.live_count();
      j["solution_size"] = dp.solution().size();
      j["reconstructions"] = dp.reconstructions();
      std::cout << j.dump() << "\n";
    }
  }
  Json summary;
  summary["ops"] = ops.size();
  summary["final_solution"] = dp.solution().size();
  summary["reconstructions"] = dp.reconstructions();
  summary["mean_update_ms"] =
      ops.empty() ? 0.0 : total_ms / static_cast<double>(ops.size());
  std::cout << summary.dump() << "\n";
  return 0;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_bench(const std::string& kinds, const std::string& ns,
              const std::string& ds, const std::string& algos,
              const std::string& seeds, const std::string& out_path) {
  std::ostringstream csv;
  csv << "kind,n,d,algorithm,seed,solution_size,optimal_size,ratio,wall_ms,"
         "valid\n";
  for (const auto& kind : split_csv(kinds)) {
    for (const auto& ns_s : split_csv(ns)) {
      for (const auto& ds_s : split_csv(ds)) {
        int n = std::stoi(ns_s), d = std::stoi(ds_s);
        for (const auto& seed_s : split_csv(seeds)) {
          auto seed = static_cast<std::uint64_t>(std::stoull(seed_s));
          pierce::GeneratedInstance gen;
          try {
            gen = pierce::generate_instance(kind, n, d, seed);
          } catch (const std::exception&) {
            continue;  // kind/dimension mismatch cells are skipped
          }
          for (const auto& algo : split_csv(algos)) {
            pierce::SolveOptions opt;
            opt.algorithm = algo;
            opt.seed = seed;
            opt.run_exact = n <= 40;
            pierce::SolveOutput res;
            try {
              res = pierce::run_solver(gen.boxes, opt);
            } catch (const std::exception&) {
              continue;
            }
            csv << kind << "," << gen.boxes.size() << "," << d << "," << algo
                << "," << seed << "," << res.report.solution_size << ","
                << res.report.optimal_size << "," << res.report.ratio << ","
                << res.report.wall_ms << "," << (res.report.valid ? 1 : 0)
                << "\n";
          }
        }
      }
    }
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate minimum piercing of axis-aligned boxes"};
  app.require_subcommand(1);

  // generate
  std::string g_kind = "uniform-random", g_out = "instance.json";
  int g_n = 100, g_d = 2;
  std::uint64_t g_seed = 1;
  std::vector<std::string> g_params;
  auto* gen = app.add_subcommand("generate", "write a random instance");
  gen->add_option("--kind", g_kind, "one of: uniform-random, planted-piercing, "
                                    "disjoint-grid, nested, squares-uniform, "
                                    "adversarial-crate");
  gen->add_option("--n", g_n);
  gen->add_option("--d", g_d);
  gen->add_option("--seed", g_seed);
  gen->add_option("--param", g_params, "extra key=value generator parameters");
  gen->add_option("--out", g_out);

  // solve
  std::string s_in, s_algo = "improved-mwu", s_out;
  std::uint64_t s_seed = 1;
  int s_rounds = 2, s_exact_cap = 40;
  double s_alpha = 32.0;
  bool s_exact = false;
  auto* solve = app.add_subcommand("solve", "compute a piercing set");
  solve->add_option("--in", s_in)->required();
  solve->add_option("--algo", s_algo,
                    "greedy1d|dnc|basic-mwu|improved-mwu|multiround|"
                    "two-round-2d|exact");
  solve->add_option("--seed", s_seed);
  solve->add_option("--out", s_out);
  solve->add_option("--rounds", s_rounds, "multiround round count");
  solve->add_option("--alpha", s_alpha, "net sample multiplier");
  solve->add_option("--exact-cap", s_exact_cap);
  solve->add_flag("--with-exact", s_exact, "also run the exact oracle");

  // verify
  std::string v_in, v_sol;
  auto* verify = app.add_subcommand("verify", "check a solution file");
  verify->add_option("--in", v_in)->required();
  verify->add_option("--sol", v_sol)->required();

  // replay
  std::string r_script, r_mode = "rects";
  std::uint64_t r_seed = 1;
  bool r_verify_each = false, r_quiet = false;
  auto* replay = app.add_subcommand("replay", "drive the dynamic maintainer");
  replay->add_option("--script", r_script)->required();
  replay->add_option("--mode", r_mode, "rects|squares");
  replay->add_option("--seed", r_seed);
  replay->add_flag("--verify-each", r_verify_each);
  replay->add_flag("--quiet", r_quiet);

  // bench
  std::string b_kinds = "uniform-random", b_ns = "100", b_ds = "2",
              b_algos = "improved-mwu", b_seeds = "1", b_out;
  auto* bench = app.add_subcommand("bench", "run a matrix, emit CSV");
  bench->add_option("--kinds", b_kinds);
  bench->add_option("--ns", b_ns);
  bench->add_option("--ds", b_ds);
  bench->add_option("--algos", b_algos);
  bench->add_option("--seeds", b_seeds);
  bench->add_option("--out", b_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(g_kind, g_n, g_d, g_seed, g_params, g_out);
    if (solve->parsed())
      return cmd_solve(s_in, s_algo, s_seed, s_out, s_rounds, s_exact,
                       s_exact_cap, s_alpha);
    if (verify->parsed()) return cmd_verify(v_in, v_sol);
    if (replay->parsed())
      return cmd_replay(r_script, r_mode, r_seed, r_verify_each, r_quiet);
    if (bench->parsed())
      return cmd_bench(b_kinds, b_ns, b_ds, b_algos, b_seeds, b_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
