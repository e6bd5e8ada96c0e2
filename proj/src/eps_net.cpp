#include "pierce/eps_net.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pierce {

namespace {

double log2_inv(double eps) { return std::max(1.0, std::log2(1.0 / eps)); }
double loglog_inv(double eps) {
  return std::max(1.0, std::log2(std::max(2.0, std::log2(1.0 / eps))));
}

}  // namespace

std::int64_t reduce_sample_size(double eps, double alpha) {
  double want = alpha * (1.0 / eps) * log2_inv(eps);
  std::int64_t rho = 1;
  while (static_cast<double>(rho) < want) rho <<= 1;
  return rho;
}

std::vector<Point> sample_reduce(const std::function<Point()>& sampler,
                                 double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("sample_reduce: eps out of (0,1)");
  std::int64_t rho = reduce_sample_size(eps, alpha);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(rho));
  for (std::int64_t i = 0; i < rho; ++i) out.push_back(sampler());
  return out;
}

std::vector<Point> sample_reduce(const std::vector<Point>& pts,
                                 const std::vector<double>& weights,
                                 double eps, double alpha, Rng& rng) {
  assert(pts.size() == weights.size());
  std::vector<double> cum(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    assert(weights[i] >= 0.0);
    total += weights[i];
    cum[i] = total;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("sample_reduce: zero total weight");
  auto sampler = [&]() -> Point {
    double u = rng.next_double() * total;
    std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (i >= pts.size()) i = pts.size() - 1;
    return pts[i];
  };
  return sample_reduce(sampler, eps, alpha);
}

GridContext gridify(std::vector<Point> sample) {
  GridContext g;
  assert(!sample.empty());
  g.dim = static_cast<int>(sample[0].size());
  g.rho = static_cast<std::int64_t>(sample.size());
  g.h = 0;
  while ((std::int64_t{1} << g.h) < g.rho) ++g.h;
  assert((std::int64_t{1} << g.h) == g.rho && "sample size must be 2^h");
  g.sample = std::move(sample);
  g.gridded.assign(g.sample.size(), Point(g.dim));
  g.rank_value.assign(g.dim, std::vector<Coord>(g.sample.size()));
  std::vector<std::size_t> order(g.sample.size());
  for (int a = 0; a < g.dim; ++a) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      if (g.sample[i][a] != g.sample[j][a])
        return g.sample[i][a] < g.sample[j][a];
      return i < j;  // tie-break duplicates by index
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
      g.gridded[order[r]][a] = static_cast<Coord>(r + 1);
      g.rank_value[a][r] = g.sample[order[r]][a];
    }
  }
  return g;
}

Box grid_image(const GridContext& g, const Box& b) {
  Box r;
  r.lo.resize(g.dim);
  r.hi.resize(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    const auto& vals = g.rank_value[a];
    auto below = std::lower_bound(vals.begin(), vals.end(), b.lo[a]) -
                 vals.begin();
    auto upto = std::upper_bound(vals.begin(), vals.end(), b.hi[a]) -
                vals.begin();
    r.lo[a] = static_cast<Coord>(below) + 1;
    r.hi[a] = static_cast<Coord>(upto);
  }
  return r;
}

Point grid_to_instance(const GridContext& g, const Point& p) {
  Point out(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    Coord r = std::clamp<Coord>(p[a], 1, g.rho);
    out[a] = g.rank_value[a][static_cast<std::size_t>(r - 1)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// canonical rectangles (d = 2)
// ---------------------------------------------------------------------------

namespace {

// Fenwick tree over x-rank slots supporting count(<= pos) and k-th selection.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : n_(n), t_(n + 1, 0) {}
  void add(std::size_t pos) {  // 1-based
    for (; pos <= n_; pos += pos & (~pos + 1)) t_[pos] += 1;
  }
  std::int64_t count_le(std::size_t pos) const {
    std::int64_t s = 0;
    for (; pos > 0; pos -= pos & (~pos + 1)) s += t_[pos];
    return s;
  }
  // smallest pos with count_le(pos) >= k
  std::size_t select(std::int64_t k) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 <= n_) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step <= n_ && t_[pos + step] < k) {
        pos += step;
        k -= t_[pos];
      }
    }
    return pos + 1;
  }

 private:
  std::size_t n_;
  std::vector<std::int64_t> t_;
};

struct Rects2dBuilder {
  std::int64_t k;
  std::vector<Box> out;
  std::vector<Coord> xs;  // global sorted x coordinates (ranks of X)

  std::size_t x_slot(Coord x) const {
    return static_cast<std::size_t>(
               std::lower_bound(xs.begin(), xs.end(), x) - xs.begin()) +
           1;
  }

  // points: indices into X sorted by y ascending within the current strip
  void run(const std::vector<Point>& X, std::vector<int> idx) {
    if (static_cast<std::int64_t>(idx.size()) < k || idx.empty()) return;
    if (idx.size() == 1) return;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return X[a][1] < X[b][1]; });
    std::size_t m = idx.size() / 2;
    Coord line_below = X[idx[m - 1]][1];  // bottom half's top y-rank
    std::vector<int> bottom(idx.begin(), idx.begin() + m);
    std::vector<int> top(idx.begin() + m, idx.end());

    sweep_side(X, top, line_below + 1, /*upward=*/true);
    sweep_side(X, bottom, line_below, /*upward=*/false);
    run(X, std::move(top));
    run(X, std::move(bottom));
  }

  // For each point of `side` in order of distance from the split line, the
  // curtain sweeps left and right until it swallows exactly k points.
  void sweep_side(const std::vector<Point>& X, const std::vector<int>& side,
                  Coord strip_edge, bool upward) {
    Fenwick fw(xs.size());
    std::vector<int> ord = side;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) {
      return upward ? X[a][1] < X[b][1] : X[a][1] > X[b][1];
    });
    for (int i : ord) {
      std::size_t slot = x_slot(X[i][0]);
      fw.add(slot);
      Coord ylo = upward ? strip_edge : X[i][1];
      Coord yhi = upward ? X[i][1] : strip_edge;
      std::int64_t left_cnt = fw.count_le(slot);
      if (left_cnt >= k) {
        std::size_t s = fw.select(left_cnt - k + 1);
        out.push_back(Box{{xs[s - 1], ylo}, {X[i][0], yhi}});
      }
      std::int64_t total = fw.count_le(xs.size());
      std::int64_t before = fw.count_le(slot - 1);
      if (total - before >= k) {
        std::size_t s = fw.select(before + k);
        out.push_back(Box{{X[i][0], ylo}, {xs[s - 1], yhi}});
      }
    }
  }
};

}  // namespace

std::vector<Box> canonical_rects_2d(const std::vector<Point>& X,
                                    std::int64_t k) {
  assert(!X.empty() && X[0].size() == 2);
  if (k <= 0 || k > static_cast<std::int64_t>(X.size())) return {};
  Rects2dBuilder b;
  b.k = k;
  for (const auto& p : X) b.xs.push_back(p[0]);
  std::sort(b.xs.begin(), b.xs.end());
  std::vector<int> idx(X.size());
  std::iota(idx.begin(), idx.end(), 0);
  b.run(X, std::move(idx));
  std::sort(b.out.begin(), b.out.end(), [](const Box& a, const Box& c) {
    return std::tie(a.lo, a.hi) < std::tie(c.lo, c.hi);
  });
  b.out.erase(std::unique(b.out.begin(), b.out.end()), b.out.end());
  return b.out;
}

// ---------------------------------------------------------------------------
// witness walk
// ---------------------------------------------------------------------------

namespace {

std::int64_t count_clipped(const RangeTree<Coord>& xtree, const Box& a,
                           const Box& b) {
  RangeTree<Coord>::Query q(a.lo.size());
  for (std::size_t m = 0; m < a.lo.size(); ++m) {
    q[m].lo = std::max(a.lo[m], b.lo[m]);
    q[m].hi = std::min(a.hi[m], b.hi[m]);
    if (q[m].lo > q[m].hi) return 0;
  }
  return xtree.count(q);
}

}  // namespace

Witness find_witness(const RangeTree<Coord>& xtree, const Box& b, int h) {
  const int d = xtree.dim();
  Witness w;
  w.cell.lo.assign(d, 0);
  w.cell.hi.assign(d, Coord{1} << h);
  w.box_count = count_clipped(xtree, w.cell, b);
  if (w.box_count == 0)
    throw std::invalid_argument("find_witness: box holds no sample points");
  for (int axis = 0; axis < d; ++axis) {
    while (w.cell.hi[axis] - w.cell.lo[axis] > 1) {
      Coord mid = (w.cell.lo[axis] + w.cell.hi[axis]) / 2;
      if (b.hi[axis] <= mid && b.lo[axis] < mid) {
        w.cell.hi[axis] = mid;
        continue;
      }
      if (b.lo[axis] >= mid && b.hi[axis] > mid) {
        w.cell.lo[axis] = mid;
        continue;
      }
      if (b.lo[axis] == mid && b.hi[axis] == mid) {
        // flat on the plane: either half keeps all of b; keep halving
        w.cell.hi[axis] = mid;
        continue;
      }
      // the halving plane strictly intersects b: keep the richer half
      Box lower = w.cell, upper = w.cell;
      lower.hi[axis] = mid;
      upper.lo[axis] = mid;
      if (count_clipped(xtree, lower, b) >= count_clipped(xtree, upper, b))
        w.cell = lower;
      else
        w.cell = upper;
      break;
    }
  }
  w.kept = count_clipped(xtree, w.cell, b);
  return w;
}

// ---------------------------------------------------------------------------
// k-crates
// ---------------------------------------------------------------------------

std::vector<Crate> enumerate_kcrates(const std::vector<Point>& cell_points,
                                     const Box& cell, std::int64_t k) {
  const int d = cell.dim();
  std::vector<Crate> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    // reflect so the anchor is always the low corner
    auto reflect = [&](const Point& p) {
      Point q(d);
      for (int m = 0; m < d; ++m)
        q[m] = (mask >> m & 1) ? cell.lo[m] + cell.hi[m] - p[m] : p[m];
      return q;
    };
    std::vector<Point> pts;
    pts.reserve(cell_points.size());
    for (const auto& p : cell_points) pts.push_back(reflect(p));

    std::vector<std::vector<Coord>> cand(d);
    for (int m = 0; m < d; ++m) {
      for (const auto& p : pts)
        if (p[m] > cell.lo[m] && p[m] <= cell.hi[m]) cand[m].push_back(p[m]);
      cand[m].push_back(cell.hi[m]);
      std::sort(cand[m].begin(), cand[m].end());
      cand[m].erase(std::unique(cand[m].begin(), cand[m].end()),
                    cand[m].end());
    }

    auto interior_count = [&](const Point& t) {
      std::int64_t c = 0;
      for (const auto& p : pts) {
        bool in = true;
        for (int m = 0; m < d; ++m)
          if (!(p[m] > cell.lo[m] && p[m] < t[m])) {
            in = false;
            break;
          }
        c += in ? 1 : 0;
      }
      return c;
    };

    std::vector<std::pair<Point, std::int64_t>> kept;
    Point t(d);
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      for (int m = 0; m < d; ++m) t[m] = cand[m][idx[m]];
      std::int64_t c = interior_count(t);
      if (c <= k) kept.push_back({t, c});
      int m = d - 1;
      while (m >= 0 && ++idx[m] == cand[m].size()) {
        idx[m] = 0;
        --m;
      }
      if (m < 0) break;
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      bool maximal = true;
      for (std::size_t j = 0; j < kept.size() && maximal; ++j) {
        if (i == j) continue;
        bool dominated = true, strict = false;
        for (int m = 0; m < d; ++m) {
          if (kept[j].first[m] < kept[i].first[m]) dominated = false;
          if (kept[j].first[m] > kept[i].first[m]) strict = true;
        }
        if (dominated && strict) maximal = false;
      }
      if (!maximal) continue;
      Crate cr;
      cr.corner_mask = mask;
      cr.interior_count = kept[i].second;
      cr.box.lo.resize(d);
      cr.box.hi.resize(d);
      for (int m = 0; m < d; ++m) {
        Coord a = cell.lo[m], b = kept[i].first[m];
        if (mask >> m & 1) {
          cr.box.lo[m] = cell.lo[m] + cell.hi[m] - b;
          cr.box.hi[m] = cell.hi[m];
        } else {
          cr.box.lo[m] = a;
          cr.box.hi[m] = b;
        }
      }
      out.push_back(std::move(cr));
    }
  }
  // dedup identical boxes from different corners (e.g. the whole empty cell)
  std::sort(out.begin(), out.end(), [](const Crate& a, const Crate& b) {
    return std::tie(a.box.lo, a.box.hi) < std::tie(b.box.lo, b.box.hi);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Crate& a, const Crate& b) {
                          return a.box == b.box;
                        }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// piercing a heavy family (rank space)
// ---------------------------------------------------------------------------

std::vector<Point> pierce_heavy_family(const std::vector<Point>& X,
                                       const std::vector<Box>& family,
                                       double eps, bool strengthened,
                                       const NetConfig& cfg, Rng& rng,
                                       double* size_constant) {
  const int d = X.empty() ? 0 : static_cast<int>(X[0].size());
  RangeTree<Coord> xtree(d, X);
  auto m1 = static_cast<std::int64_t>(
      std::ceil(cfg.pierce_alpha * (1.0 / eps) * loglog_inv(eps)));
  std::vector<Point> n1;
  n1.reserve(static_cast<std::size_t>(m1));
  for (std::int64_t i = 0; i < m1; ++i)
    n1.push_back(X[rng.next_below(X.size())]);

  RangeTree<Coord> n1tree(d, n1);
  std::vector<Point> net = n1;
  double t_star =
      std::ceil(eps / std::pow(2.0, d + 2) * static_cast<double>(m1));
  for (const auto& b : family) {
    auto q = RangeTree<Coord>::query_of_box(b.lo, b.hi);
    std::int64_t have = n1tree.count(q);
    std::int64_t want = strengthened
                            ? std::max<std::int64_t>(
                                  1, static_cast<std::int64_t>(t_star))
                            : 1;
    if (have >= want) continue;
    std::vector<Point> in_box;
    xtree.report(q, in_box);
    if (in_box.empty())
      throw std::invalid_argument(
          "pierce_heavy_family: member holds no sample point");
    std::sort(in_box.begin(), in_box.end());
    in_box.erase(std::unique(in_box.begin(), in_box.end()), in_box.end());
    for (std::size_t i = 0; i < in_box.size() && have < want; ++i, ++have)
      net.push_back(in_box[i]);
  }
  std::sort(net.begin(), net.end());
  net.erase(std::unique(net.begin(), net.end()), net.end());
  if (size_constant)
    *size_constant =
        static_cast<double>(net.size()) / ((1.0 / eps) * loglog_inv(eps));
  return net;
}

// ---------------------------------------------------------------------------
// the per-box weak net pipeline
// ---------------------------------------------------------------------------

WeakNetResult weak_net_for_boxes(const std::function<Point()>& sampler,
                                 double eps, const std::vector<Box>& heavy,
                                 int dim, const NetConfig& cfg, Rng& rng) {
  WeakNetResult res;
  if (heavy.empty()) return res;
  const int d = dim;
  const auto m = static_cast<double>(heavy.size());

  auto sample = sample_reduce(sampler, eps, cfg.alpha);
  GridContext g = gridify(std::move(sample));
  RangeTree<Coord> xtree(d, g.gridded);

  std::vector<Box> gb(heavy.size());
  for (std::size_t i = 0; i < heavy.size(); ++i)
    gb[i] = grid_image(g, heavy[i]);

  std::vector<Point> grid_net;
  auto add_grid_point = [&](const Point& p) { grid_net.push_back(p); };

  if (m <= 1.0 / eps) {
    // one sample point per box
    for (std::size_t i = 0; i < heavy.size(); ++i) {
      auto any = xtree.any_in(RangeTree<Coord>::query_of_box(gb[i].lo, gb[i].hi));
      if (!any) {
        res.ok = false;
        res.failed_boxes.push_back(static_cast<int>(i));
        continue;
      }
      add_grid_point(*any);
    }
    res.stats["mode_small_m"] = 1;
  } else {
    // second sample
    auto n2 = static_cast<std::int64_t>(
        std::ceil(cfg.beta * (1.0 / eps) * loglog_inv(eps)));
    for (std::int64_t i = 0; i < n2; ++i)
      add_grid_point(g.gridded[rng.next_below(g.gridded.size())]);
    RangeTree<Coord> n2tree(d, grid_net);

    const auto massive_threshold = static_cast<std::int64_t>(
        std::pow(static_cast<double>(g.h), d + 2));
    const auto k = static_cast<std::int64_t>(
        std::ceil(eps / std::pow(2.0, d + 1) * static_cast<double>(g.rho)));
    std::map<Box, Point, decltype([](const Box& a, const Box& b) {
               return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
             })>
        crate_points;
    std::map<Box, bool, decltype([](const Box& a, const Box& b) {
               return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
             })>
        massive_cells;

    for (std::size_t i = 0; i < heavy.size(); ++i) {
      bool empty = false;
      for (int a = 0; a < d; ++a)
        if (gb[i].lo[a] > gb[i].hi[a]) empty = true;
      if (empty ||
          xtree.count(RangeTree<Coord>::query_of_box(gb[i].lo, gb[i].hi)) ==
              0) {
        res.ok = false;
        res.failed_boxes.push_back(static_cast<int>(i));
        continue;
      }
      if (n2tree.count(RangeTree<Coord>::query_of_box(gb[i].lo, gb[i].hi)) >
          0)
        continue;  // already stabbed
      res.stats["witness_walks"] += 1;

      Witness w = find_witness(xtree, gb[i], g.h);
      std::int64_t cell_count = xtree.count(
          RangeTree<Coord>::query_of_box(w.cell.lo, w.cell.hi));
      bool massive = cell_count >= massive_threshold;
      if (!cfg.strong && massive) {
        // the cell corners pierce every box exchanging corners with it
        if (!massive_cells.count(w.cell)) {
          massive_cells[w.cell] = true;
          res.stats["massive_cells"] += 1;
          for (int corner = 0; corner < (1 << d); ++corner) {
            Point p(d);
            for (int a = 0; a < d; ++a)
              p[a] = (corner >> a & 1) ? w.cell.hi[a] : w.cell.lo[a];
            add_grid_point(p);
          }
        }
        continue;
      }

      // canonical corner-anchored crate inside b ∩ cell via binary search
      Box clip;
      clip.lo.resize(d);
      clip.hi.resize(d);
      Point anchor(d);
      std::vector<bool> from_low(d);
      for (int a = 0; a < d; ++a) {
        clip.lo[a] = std::max(w.cell.lo[a], gb[i].lo[a]);
        clip.hi[a] = std::min(w.cell.hi[a], gb[i].hi[a]);
        // anchor at the cell corner that landed inside the box (witness
        // corner-exchange); clip bounds coincide with it on that side
        bool lo_inside =
            w.cell.lo[a] >= gb[i].lo[a] && w.cell.lo[a] <= gb[i].hi[a];
        from_low[a] = lo_inside;
        anchor[a] = lo_inside ? clip.lo[a] : clip.hi[a];
      }
      Box crate = clip;
      auto interior = [&](const Box& bx) {
        RangeTree<Coord>::Query q(d);
        for (int a = 0; a < d; ++a) {
          q[a] = {bx.lo[a], bx.hi[a], true, true};
        }
        return xtree.count(q);
      };
      if (interior(crate) > k) {
        for (int a = 0; a < d; ++a) {
          // maximal extent on this axis, subsequent axes at full clip;
          // mid = step_lo is the degenerate box, mid = step_hi the full clip
          Coord step_lo = clip.lo[a], step_hi = clip.hi[a];
          Coord best = step_lo;
          Coord a1 = step_lo, b1 = step_hi;
          while (a1 <= b1) {
            Coord mid = a1 + (b1 - a1) / 2;
            Box test = crate;
            if (from_low[a]) {
              test.lo[a] = anchor[a];
              test.hi[a] = mid;
            } else {
              test.lo[a] = step_lo + step_hi - mid;
              test.hi[a] = anchor[a];
            }
            // unreached axes stay at full clip
            if (interior(test) <= k) {
              best = mid;
              a1 = mid + 1;
            } else {
              b1 = mid - 1;
            }
          }
          if (from_low[a]) {
            crate.lo[a] = anchor[a];
            crate.hi[a] = best;
          } else {
            crate.lo[a] = step_lo + step_hi - best;
            crate.hi[a] = anchor[a];
          }
        }
      }
      auto it = crate_points.find(crate);
      if (it != crate_points.end()) {
        res.stats["crate_dedup_hits"] += 1;
        continue;
      }
      auto pick = xtree.any_in(
          RangeTree<Coord>::query_of_box(crate.lo, crate.hi));
      if (!pick)
        pick = xtree.any_in(
            RangeTree<Coord>::query_of_box(clip.lo, clip.hi));
      if (!pick)
        pick = xtree.any_in(
            RangeTree<Coord>::query_of_box(gb[i].lo, gb[i].hi));
      assert(pick.has_value());
      crate_points[crate] = *pick;
      res.stats["crates"] += 1;
      add_grid_point(*pick);
    }
  }

  // map to instance space, verify in grid space
  for (std::size_t i = 0; i < heavy.size(); ++i) {
    bool hit = false;
    for (const auto& p : grid_net)
      if (gb[i].contains(p)) {
        hit = true;
        break;
      }
    if (!hit) {
      bool already = false;
      for (int f : res.failed_boxes)
        if (f == static_cast<int>(i)) already = true;
      if (!already) {
        res.ok = false;
        res.failed_boxes.push_back(static_cast<int>(i));
      }
    }
  }
  for (const auto& p : grid_net) res.net.push_back(grid_to_instance(g, p));
  std::sort(res.net.begin(), res.net.end());
  res.net.erase(std::unique(res.net.begin(), res.net.end()), res.net.end());
  res.stats["net_size"] = static_cast<double>(res.net.size());
  return res;
}

WeakNetResult weak_net_for_boxes(const std::vector<Point>& pts,
                                 const std::vector<double>& weights,
                                 double eps, const std::vector<Box>& heavy,
                                 const NetConfig& cfg, Rng& rng) {
  std::vector<double> cum(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cum[i] = total;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("weak_net: zero total weight");
  Rng local = rng.fork("weak_net_sampler");
  auto sampler = [&pts, &cum, total, local]() mutable -> Point {
    double u = local.next_double() * total;
    std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (i >= pts.size()) i = pts.size() - 1;
    return pts[i];
  };
  int dim = pts.empty() ? 0 : static_cast<int>(pts[0].size());
  return weak_net_for_boxes(sampler, eps, heavy, dim, cfg, rng);
}

}  // namespace pierce
