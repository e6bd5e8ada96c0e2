#include "pierce/mwu.hpp"

#include <algorithm>
#include <cmath>

#include "pierce/arrangement.hpp"
#include "pierce/classic.hpp"
#include "pierce/range_tree.hpp"

namespace pierce {

namespace {

std::int64_t default_max_k(const MwuConfig& cfg, int n) {
  return cfg.max_k > 0 ? cfg.max_k : std::max<std::int64_t>(8, 4 * n);
}

// one corner per unpierced box; keeps every solver's output valid even when
// a Monte Carlo net construction misses
void corner_fallback(const ProblemInstance& inst, PiercingSolution& sol) {
  auto missed = verify_piercing(inst, sol.points);
  for (int i : missed) {
    sol.points.push_back(inst.boxes[i].lo);
    sol.bump("corner_fallbacks");
  }
}

}  // namespace

PiercingSolution basic_mwu(const ProblemInstance& inst, std::uint64_t seed,
                           const MwuConfig& cfg, MwuTrace* trace) {
  const int n = inst.n();
  const int d = inst.dimension;
  PiercingSolution sol;
  sol.algorithm = "basic-mwu";
  sol.seed = seed;
  if (n == 0) return sol;
  Rng root(seed);

  const double ln_mhat = d * std::log(2.0 * n);
  const std::int64_t k_cap = default_max_k(cfg, n);

  for (std::int64_t k = 2; k <= k_cap; k *= 2) {
    bool escalate = false;
    for (int retry = 0; retry <= cfg.max_stage_retries && !escalate; ++retry) {
      Rng stage_rng = root.fork("stage", static_cast<std::uint64_t>(k) * 101 +
                                             static_cast<std::uint64_t>(retry));
      sol.bump("stages");
      MwuTrace::Stage st;
      st.k = k;
      const double eps = 2.0 / (3.0 * static_cast<double>(k));
      st.eps = eps;
      const auto ell = static_cast<std::int64_t>(std::floor(1.0 / eps));
      const auto tau = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil(
                 cfg.round_budget_c *
                 (ln_mhat - std::log(static_cast<double>(k))))));

      auto ds = ArrangementDS<FloatDyadic>::from_instance(inst);
      for (int i = 0; i < n; ++i) ds.insert_box(i);

      bool quiet_round = false;
      for (std::int64_t round = 0; round < tau && !quiet_round; ++round) {
        sol.bump("rounds");
        st.rounds += 1;
        std::int64_t doubled_in_round = 0;
        bool aborted = false;
        for (int i = 0; i < n && !aborted; ++i) {
          for (;;) {
            FloatDyadic w = ds.weight(inst.boxes[i]);
            FloatDyadic total = ds.total();
            w.mul_u64(static_cast<std::uint64_t>(3 * k));
            total.mul_u64(2);
            if (!(w < total)) break;  // heavy
            double before = trace ? ds.total().log2() : 0.0;
            ds.double_box(i);
            sol.bump("doublings");
            if (trace) st.doublings.push_back({i, before, ds.total().log2()});
            if (++doubled_in_round >= ell) {
              aborted = true;
              break;
            }
          }
        }
        quiet_round = !aborted;
      }
      if (trace) trace->stages.push_back(st);

      if (!quiet_round) {
        escalate = true;  // tau exceeded: the guess for k is too small
        continue;
      }

      // quiet round: every box is eps/e-heavy; extract the net
      Rng net_rng = stage_rng.fork("net");
      auto sampler = [&ds, &net_rng]() { return ds.sample(net_rng); };
      NetConfig net_cfg = cfg.net;
      net_cfg.strong = d <= 3;
      auto res = weak_net_for_boxes(sampler, eps / std::exp(1.0), inst.boxes,
                                    d, net_cfg, stage_rng);
      if (res.ok && verify_piercing(inst, res.net).empty()) {
        sol.points = res.net;
        sol.stats["k"] = static_cast<double>(k);
        return sol;
      }
      sol.bump("net_retries");  // Monte Carlo miss: fresh seed, same k
    }
  }

  // the exponential search exhausted its budget: deterministic valid output
  sol.points.clear();
  corner_fallback(inst, sol);
  sol.bump("exhausted_k");
  return sol;
}

PiercingSolution improved_mwu(const ProblemInstance& inst, std::uint64_t seed,
                              const MwuConfig& cfg, MwuTrace* trace) {
  const int n = inst.n();
  const int d = inst.dimension;
  PiercingSolution sol;
  sol.algorithm = "improved-mwu";
  sol.seed = seed;
  if (n == 0) return sol;

  if (d == 1) {
    sol.points = greedy_interval_pierce(inst.boxes);
    sol.stats["bypass_1d"] = 1;
    return sol;
  }

  Rng root(seed);
  const double lg_n = std::log2(std::max(4.0, static_cast<double>(n)));
  const std::int64_t k_cap = default_max_k(cfg, n);
  const auto round_cap = std::max<std::int64_t>(
      4, static_cast<std::int64_t>(
             std::ceil(cfg.round_cap_c2 * std::pow(lg_n, 2 * d))));

  // After this many batch-doubling rounds the light set is pierced directly:
  // the weight mass argument caps useful rounds at O(k log m_hat), and the
  // finish branch is valid regardless of |I| (its output is verified).
  const auto soft_finish = std::max<std::int64_t>(
      8, static_cast<std::int64_t>(std::ceil(4.0 * d * std::log2(2.0 * n))));

  for (std::int64_t k = 2; k <= k_cap; k *= 2) {
    std::vector<std::int64_t> mult(n, 0);
    Rng krng = root.fork("k", static_cast<std::uint64_t>(k));
    int net_failures = 0;
    bool escalate = false;
    for (std::int64_t round = 0; round < round_cap && !escalate; ++round) {
      sol.bump("rounds");
      // r = O(n log n) is the batch-sampling contract; clamp the requested
      // C_r * k * log n when the exponential search drives k high
      auto r = static_cast<std::int64_t>(
          std::ceil(cfg.sample_rate * static_cast<double>(k) * lg_n));
      const auto r_cap = std::max<std::int64_t>(
          2000, static_cast<std::int64_t>(8.0 * n * lg_n));
      if (r > r_cap) {
        r = r_cap;
        sol.bump("sample_cap_hits");
      }
      std::vector<std::pair<int, std::int64_t>> updates;
      for (int i = 0; i < n; ++i)
        if (mult[i] > 0) updates.push_back({i, mult[i]});
      auto R = batch_sample<FloatDyadic>(inst, updates, r, krng);
      RangeTree<Coord> rtree(d, R);

      std::vector<int> light;
      const double light_threshold =
          static_cast<double>(r) / (4.0 * static_cast<double>(k));
      for (int i = 0; i < n; ++i) {
        auto cnt = rtree.count(RangeTree<Coord>::query_of_box(
            inst.boxes[i].lo, inst.boxes[i].hi));
        if (static_cast<double>(cnt) <= light_threshold) light.push_back(i);
      }
      std::vector<Box> light_boxes;
      light_boxes.reserve(light.size());
      for (int i : light) light_boxes.push_back(inst.boxes[i]);
      auto indep_local = dnc_independent(light_boxes);

      MwuTrace::Round rr;
      if (trace) {
        rr.k = k;
        rr.sample = R;
        rr.light = light;
        for (int j : indep_local) rr.indep.push_back(light[j]);
      }

      if (static_cast<std::int64_t>(indep_local.size()) >= 2 * k) {
        // the guess for k is too small
        if (trace) {
          rr.branch = 1;
          trace->rounds.push_back(rr);
        }
        escalate = true;
        break;
      }

      const double small_indep =
          cfg.c1 * static_cast<double>(k) / std::pow(lg_n, 2 * d - 1);
      bool forced_finish = round + 1 >= soft_finish;
      if (forced_finish) sol.bump("forced_finish");
      if (static_cast<double>(indep_local.size()) < small_indep ||
          forced_finish) {
        // finish: pierce the light boxes directly, net the heavy ones
        std::vector<Point> pierce_light =
            light_boxes.empty() ? std::vector<Point>{}
                                : dnc_pierce(light_boxes);
        std::vector<char> is_light(n, 0);
        for (int i : light) is_light[i] = 1;
        std::vector<Box> heavy;
        for (int i = 0; i < n; ++i)
          if (!is_light[i]) heavy.push_back(inst.boxes[i]);

        PiercingSolution candidate = sol;
        candidate.points = pierce_light;
        if (!heavy.empty()) {
          std::vector<double> w(R.size(), 1.0);
          NetConfig net_cfg = cfg.net;
          net_cfg.strong = d <= 3;
          double eps_net = 1.0 / (cfg.heavy_denom * static_cast<double>(k));
          auto res = weak_net_for_boxes(R, w, eps_net, heavy, net_cfg, krng);
          for (auto& p : res.net) candidate.points.push_back(p);
          candidate.stats["net_size"] = static_cast<double>(res.net.size());
        }
        if (trace) {
          rr.branch = 2;
          trace->rounds.push_back(rr);
        }
        if (verify_piercing(inst, candidate.points).empty()) {
          candidate.stats["k"] = static_cast<double>(k);
          candidate.stats["pierce_light_size"] =
              static_cast<double>(pierce_light.size());
          return candidate;
        }
        // misleading sample: retry the round with a fresh sample
        sol.bump("net_retries");
        if (++net_failures > cfg.max_net_retries) {
          corner_fallback(inst, candidate);
          candidate.stats["k"] = static_cast<double>(k);
          return candidate;
        }
        continue;
      }

      // batch doubling: add the independent set to the update multiset
      for (int j : indep_local) mult[light[j]] += 1;
      sol.bump("batch_doublings", static_cast<double>(indep_local.size()));
      if (trace) {
        rr.branch = 0;
        trace->rounds.push_back(rr);
      }
    }
    // escalate k (either |I| >= 2k or the round cap was hit)
  }

  sol.points = dnc_pierce(inst.boxes);
  sol.bump("exhausted_k");
  return sol;
}

}  // namespace pierce
