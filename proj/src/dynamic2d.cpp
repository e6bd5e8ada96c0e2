#include "pierce/dynamic2d.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pierce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Query4 = RangeTree<double>::Query;

Query4 free_region() {
  Query4 q(4);
  for (int i = 0; i < 4; ++i) q[i] = {-kInf, kInf, false, false};
  return q;
}

// maxima of a 2D point set (no other point dominates in both coordinates),
// sorted by x ascending / y strictly descending
std::vector<std::pair<double, double>> pareto_maxima(
    std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> out;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    if (out.empty() || it->second > out.back().second) {
      if (!out.empty() && it->first == out.back().first) continue;
      out.push_back(*it);
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Query4> complement_partition(
    const std::vector<std::vector<double>>& points) {
  std::vector<Query4> regions;
  if (points.empty()) {
    regions.push_back(free_region());
    return regions;
  }

  std::vector<double> ys;
  for (const auto& p : points) ys.push_back(p[1]);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // u4 below every orthant threshold
  {
    Query4 q = free_region();
    q[3] = {-kInf, ys.front(), false, true};
    regions.push_back(q);
  }

  for (std::size_t j = 0; j < ys.size(); ++j) {
    double y_lo = ys[j];
    double y_hi = j + 1 < ys.size() ? ys[j + 1] : kInf;
    // active octants in (u1, u2, u3): points with y_p <= y_lo
    std::vector<std::pair<double, double>> active;  // (x_p, y_p)
    for (const auto& p : points)
      if (p[1] <= y_lo) active.push_back({p[0], p[1]});
    std::vector<double> xs;
    for (auto& [x, y] : active) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    auto with_slab = [&](Query4 q) {
      q[3] = {y_lo, y_hi, false, true};
      return q;
    };

    // u3 below every active x threshold
    {
      Query4 q = free_region();
      q[2] = {-kInf, xs.front(), false, true};
      regions.push_back(with_slab(q));
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double x_lo = xs[i];
      double x_hi = i + 1 < xs.size() ? xs[i + 1] : kInf;
      // active quadrants in (u1, u2): points with x_p <= x_lo, y_p <= y_lo
      std::vector<std::pair<double, double>> quad;
      for (auto& [x, y] : active)
        if (x <= x_lo) quad.push_back({x, y});
      auto frontier = pareto_maxima(std::move(quad));

      auto with_slabs = [&](Query4 q) {
        q[2] = {x_lo, x_hi, false, true};
        q[3] = {y_lo, y_hi, false, true};
        return q;
      };
      // strips between consecutive frontier x values; above the frontier y
      {
        Query4 q = free_region();
        q[0] = {-kInf, frontier.front().first, false, false};
        q[1] = {frontier.front().second, kInf, true, false};
        regions.push_back(with_slabs(q));
      }
      for (std::size_t t = 0; t + 1 < frontier.size(); ++t) {
        Query4 q = free_region();
        q[0] = {frontier[t].first, frontier[t + 1].first, true, false};
        q[1] = {frontier[t + 1].second, kInf, true, false};
        regions.push_back(with_slabs(q));
      }
      {
        Query4 q = free_region();
        q[0] = {frontier.back().first, kInf, true, false};
        regions.push_back(with_slabs(q));
      }
    }
  }
  return regions;
}

DynamicPiercer::DynamicPiercer(Mode mode, std::uint64_t seed, DynConfig cfg)
    : mode_(mode), cfg_(cfg), rng_(seed), tree_(4) {}

std::vector<double> DynamicPiercer::to_point4(const RawBox& b) const {
  if (b.dim() != 2) throw std::invalid_argument("dynamic2d: need 2D boxes");
  if (mode_ == Mode::squares) {
    double w = b.hi[0] - b.lo[0], h = b.hi[1] - b.lo[1];
    if (std::abs(w - h) > 1e-9 * std::max(1.0, std::abs(w)))
      throw std::invalid_argument("dynamic2d: squares mode requires squares");
  }
  return {b.lo[0], b.lo[1], b.hi[0], b.hi[1]};
}

RawBox DynamicPiercer::from_point4(const std::vector<double>& p) const {
  RawBox b;
  b.lo = {p[0], p[1]};
  b.hi = {p[2], p[3]};
  return b;
}

std::vector<RawBox> DynamicPiercer::live_boxes() const {
  std::vector<std::vector<double>> pts;
  tree_.report(free_region(), pts);
  std::vector<RawBox> out;
  out.reserve(pts.size());
  for (auto& p : pts) out.push_back(from_point4(p));
  return out;
}

void DynamicPiercer::insert(const RawBox& b) {
  auto p4 = to_point4(b);
  tree_.insert(p4);
  bool hit = false;
  for (const auto& p : pierce_)
    if (b.contains(p)) {
      hit = true;
      break;
    }
  if (!hit) {
    pierce_.push_back({(b.lo[0] + b.hi[0]) / 2, (b.lo[1] + b.hi[1]) / 2});
    stats_["lazy_points"] += 1;
  }
  if (++since_rebuild_ >= (s_ + 1) / 2) reconstruct();
}

void DynamicPiercer::erase(const RawBox& b) {
  tree_.erase(to_point4(b));  // throws if absent
  if (++since_rebuild_ >= (s_ + 1) / 2) reconstruct();
}

std::vector<RawBox> DynamicPiercer::boxes_of_canonical(
    const std::vector<std::vector<double>>& points, std::int64_t size_cap,
    bool* over_cap) const {
  auto regions = complement_partition(points);
  std::vector<int> nodes;
  std::int64_t total = 0;
  for (const auto& q : regions) {
    for (int id : tree_.canonical(q)) {
      total += tree_.node_size(id);
      nodes.push_back(id);
      if (size_cap >= 0 && total > size_cap) {
        *over_cap = true;
        return {};
      }
    }
  }
  *over_cap = false;
  std::vector<std::vector<double>> pts;
  for (int id : nodes) tree_.node_points(id, pts);
  std::vector<RawBox> out;
  out.reserve(pts.size());
  for (auto& p : pts) out.push_back(from_point4(p));
  return out;
}

std::vector<RawBox> DynamicPiercer::unpierced_by(
    const std::vector<std::vector<double>>& points) const {
  bool over = false;
  return boxes_of_canonical(points, -1, &over);
}

namespace {

std::vector<RawBox> sample_boxes(const std::vector<RawBox>& pool,
                                 std::size_t m, Rng& rng) {
  if (m >= pool.size()) return pool;
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < m; ++i)
    std::swap(idx[i], idx[i + rng.next_below(idx.size() - i)]);
  std::vector<RawBox> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(pool[idx[i]]);
  return out;
}

std::vector<std::vector<double>> solve_raw(const std::vector<RawBox>& boxes,
                                           std::uint64_t seed,
                                           const MwuConfig& cfg) {
  if (boxes.empty()) return {};
  auto inst = normalize_instance(boxes);
  auto sol = improved_mwu(inst, seed, cfg);
  std::vector<std::vector<double>> out;
  out.reserve(sol.points.size());
  for (const auto& p : sol.points) out.push_back(denormalize_point(inst, p));
  return out;
}

// boxes not pierced, by direct scan against a 2D range tree over the points
std::vector<RawBox> filter_unpierced_direct(
    const std::vector<RawBox>& boxes,
    const std::vector<std::vector<double>>& points) {
  std::vector<RawBox> out;
  if (points.empty()) return boxes;
  RangeTree<double> pt_tree(2, points);
  for (const auto& b : boxes) {
    RangeTree<double>::Query q(2);
    q[0] = {b.lo[0], b.hi[0]};
    q[1] = {b.lo[1], b.hi[1]};
    if (pt_tree.count(q) == 0) out.push_back(b);
  }
  return out;
}

}  // namespace

void DynamicPiercer::reconstruct() {
  reconstructions_ += 1;
  since_rebuild_ = 0;
  const auto n = static_cast<double>(tree_.size());
  if (tree_.size() == 0) {
    pierce_.clear();
    s_ = 0;
    return;
  }

  const bool squares = mode_ == Mode::squares;
  for (std::int64_t k = 2;; k *= 2) {
    double r1 = squares ? cfg_.c1 * std::pow(static_cast<double>(k), 2.0 / 3) *
                              std::cbrt(n)
                        : cfg_.c1 * std::sqrt(static_cast<double>(k) * n);
    auto sample_size = static_cast<std::size_t>(std::ceil(r1));
    bool direct = static_cast<double>(k) >= std::sqrt(n) ||
                  sample_size >= tree_.size() || k > 8 * tree_.size();

    for (int restart = 0; restart <= cfg_.max_restarts; ++restart) {
      Rng attempt = rng_.fork("reconstruct", reconstructions_ * 1000 +
                                                 k * 10 + restart);
      auto live = live_boxes();
      auto b1 = direct ? live : sample_boxes(live, sample_size, attempt);
      auto p1 = solve_raw(b1, attempt.fork("p1").next_u64(), cfg_.inner);

      std::vector<RawBox> residue;
      if (direct) {
        // p* >= sqrt(n) regime (or tiny set): plain 2D range-tree filter
        residue = filter_unpierced_direct(live, p1);
      } else {
        bool over = false;
        auto cap = static_cast<std::int64_t>(std::ceil(cfg_.c2 * r1));
        residue = boxes_of_canonical(p1, cap, &over);
        if (over) {
          stats_["reconstruct_restarts"] += 1;
          continue;  // back to step 1 with a fresh sample
        }
      }

      if (squares && !residue.empty() && !direct) {
        // middle round: solve a sample of the residue first
        auto b2 = sample_boxes(residue, sample_size, attempt);
        auto p2 = solve_raw(b2, attempt.fork("p2").next_u64(), cfg_.inner);
        for (auto& p : p2) p1.push_back(p);
        residue = filter_unpierced_direct(residue, p2);
      }

      auto p_last =
          solve_raw(residue, attempt.fork("plast").next_u64(), cfg_.inner);
      for (auto& p : p_last) p1.push_back(p);
      pierce_ = std::move(p1);
      s_ = static_cast<std::int64_t>(pierce_.size());
      stats_["last_k"] = static_cast<double>(k);
      return;
    }
    stats_["k_escalations"] += 1;
  }
}

}  // namespace pierce
