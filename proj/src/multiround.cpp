#include "pierce/multiround.hpp"

#include <algorithm>
#include <cmath>

#include "pierce/range_tree.hpp"
#include "pierce/rng.hpp"

namespace pierce {

namespace {

ProblemInstance sub_instance(const ProblemInstance& inst,
                             const std::vector<int>& ids) {
  ProblemInstance s;
  s.dimension = inst.dimension;
  s.coord_values = inst.coord_values;  // same normalized space
  s.boxes.reserve(ids.size());
  for (int i : ids) s.boxes.push_back(inst.boxes[i]);
  return s;
}

// ids of boxes containing no point of q (range-tree emptiness per box)
std::vector<int> unpierced_ids(const ProblemInstance& inst,
                               const std::vector<int>& ids,
                               const std::vector<Point>& q) {
  std::vector<int> out;
  if (q.empty()) return ids;
  RangeTree<Coord> tree(inst.dimension, q);
  for (int i : ids) {
    if (tree.count(RangeTree<Coord>::query_of_box(inst.boxes[i].lo,
                                                  inst.boxes[i].hi)) == 0)
      out.push_back(i);
  }
  return out;
}

std::vector<int> sample_without_replacement(const std::vector<int>& pool,
                                            std::size_t m, Rng& rng) {
  std::vector<int> ids = pool;
  if (m >= ids.size()) return ids;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + rng.next_below(ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(m);
  return ids;
}

}  // namespace

PiercingSolution multi_round_pierce(const ProblemInstance& inst,
                                    std::uint64_t seed,
                                    const MultiRoundConfig& cfg) {
  const int n = inst.n();
  const int d = inst.dimension;
  PiercingSolution sol;
  sol.algorithm = "multiround";
  sol.seed = seed;
  Rng root(seed);

  auto solve = cfg.solver
                   ? cfg.solver
                   : [&cfg](const ProblemInstance& s, std::uint64_t sd) {
                       return improved_mwu(s, sd, cfg.inner);
                     };

  const int r = std::max(1, cfg.rounds);
  const double lg_n = std::log2(std::max(4.0, static_cast<double>(n)));

  for (std::int64_t k = 2;; k *= 2) {
    if (k > 8 * std::max(1, n)) {  // safety net: solve the whole set directly
      auto direct = solve(inst, root.fork("fallback").next_u64());
      sol.points = std::move(direct.points);
      sol.bump("direct_fallback");
      return sol;
    }
    Rng krng = root.fork("k", static_cast<std::uint64_t>(k));
    double delta =
        std::min(1.0, std::pow(static_cast<double>(k) / n, 1.0 / r));
    std::vector<int> current(n);
    for (int i = 0; i < n; ++i) current[i] = i;
    std::vector<Point> pierced_by;
    bool escalate = false;

    auto q_too_large = [&](std::size_t sz) {
      double cap = cfg.restart_factor * static_cast<double>(k) *
                   std::max(1.0, std::log2(std::log2(
                                     static_cast<double>(k) + 4.0)));
      return static_cast<double>(sz) > cap;
    };

    for (int round = 1; round < r && !escalate; ++round) {
      if (current.empty()) break;
      auto m = static_cast<std::size_t>(
          std::ceil(cfg.sample_mult * d * static_cast<double>(k) *
                    (1.0 / delta) * lg_n));
      int attempts = 0;
      for (;;) {
        sol.bump("rounds_run");
        auto sample_ids = sample_without_replacement(
            current, m, krng);
        auto qi = solve(sub_instance(inst, sample_ids),
                        krng.fork("inner", round * 97 + attempts)
                            .next_u64());
        if (q_too_large(qi.points.size())) {
          escalate = true;
          break;
        }
        auto residue = unpierced_ids(inst, current, qi.points);
        bool took_all = m >= current.size();
        if (!took_all &&
            static_cast<double>(residue.size()) >
                delta * static_cast<double>(current.size())) {
          sol.bump("round_repeats");
          if (++attempts > cfg.max_round_retries) {
            escalate = true;
            break;
          }
          continue;  // repeat round i with a fresh sample
        }
        for (auto& p : qi.points) pierced_by.push_back(p);
        current = std::move(residue);
        break;
      }
    }
    if (escalate) {
      sol.bump("k_escalations");
      continue;
    }

    if (!current.empty()) {
      auto qf = solve(sub_instance(inst, current),
                      krng.fork("final").next_u64());
      if (q_too_large(qf.points.size())) {
        sol.bump("k_escalations");
        continue;
      }
      for (auto& p : qf.points) pierced_by.push_back(p);
    }
    sol.points = std::move(pierced_by);
    sol.stats["k"] = static_cast<double>(k);
    // structural validity: every box was pierced at the round that removed it
    return sol;
  }
}

PiercingSolution two_round_2d(const ProblemInstance& inst, std::uint64_t seed,
                              const TwoRoundConfig& cfg) {
  const int n = inst.n();
  PiercingSolution sol;
  sol.algorithm = "two-round-2d";
  sol.seed = seed;
  if (inst.dimension != 2)
    throw std::invalid_argument("two_round_2d: dimension must be 2");
  Rng root(seed);

  auto m1 = static_cast<std::size_t>(
      std::ceil(cfg.sample_scale * n /
                std::pow(std::log2(std::max(4.0, static_cast<double>(n))),
                         7.0)));
  if (n < cfg.direct_threshold || m1 >= static_cast<std::size_t>(n)) {
    auto direct = improved_mwu(inst, root.fork("direct").next_u64(),
                               cfg.inner);
    sol.points = std::move(direct.points);
    sol.stats["direct"] = 1;
    return sol;
  }

  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;

  for (int attempt = 0;; ++attempt) {
    Rng arng = root.fork("attempt", static_cast<std::uint64_t>(attempt));
    auto sample_ids = sample_without_replacement(all, m1, arng);
    auto q1 = improved_mwu(sub_instance(inst, sample_ids),
                           arng.fork("q1").next_u64(), cfg.inner);
    auto residue = unpierced_ids(inst, all, q1.points);

    // Lemma-sampling bound: delta = c * d * t * ln n / m1
    double delta = cfg.shrink_c * 2.0 *
                   static_cast<double>(q1.points.size()) *
                   std::log(std::max(4.0, static_cast<double>(n))) /
                   static_cast<double>(m1);
    double bound = std::min(1.0, delta) * n;
    sol.stats["residue"] = static_cast<double>(residue.size());
    sol.stats["residue_bound"] = bound;
    if (delta < 1.0 && static_cast<double>(residue.size()) > bound &&
        attempt < cfg.max_resamples) {
      sol.bump("resamples");
      continue;
    }

    sol.points = q1.points;
    if (!residue.empty()) {
      auto q2 = improved_mwu(sub_instance(inst, residue),
                             arng.fork("q2").next_u64(), cfg.inner);
      for (auto& p : q2.points) sol.points.push_back(p);
    }
    return sol;
  }
}

ShrinkageReport residual_shrinkage_check(const ProblemInstance& inst,
                                         const std::vector<Point>& q,
                                         double delta) {
  ShrinkageReport rep;
  std::vector<int> all(inst.n());
  for (int i = 0; i < inst.n(); ++i) all[i] = i;
  rep.unpierced =
      static_cast<std::int64_t>(unpierced_ids(inst, all, q).size());
  rep.bound = delta * inst.n();
  rep.violated = static_cast<double>(rep.unpierced) > rep.bound;
  return rep;
}

}  // namespace pierce
