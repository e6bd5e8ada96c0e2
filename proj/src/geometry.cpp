#include "pierce/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace pierce {

ProblemInstance normalize_instance(const std::vector<RawBox>& raw) {
  if (raw.empty()) throw std::invalid_argument("normalize: empty input");
  const int d = raw[0].dim();
  if (d < 1) throw std::invalid_argument("normalize: dimension < 1");
  for (const auto& b : raw) {
    if (b.dim() != d || static_cast<int>(b.hi.size()) != d)
      throw std::invalid_argument("normalize: inconsistent dimensions");
    for (int i = 0; i < d; ++i)
      if (!(b.lo[i] <= b.hi[i]))
        throw std::invalid_argument("normalize: lo > hi");
  }

  const int n = static_cast<int>(raw.size());
  ProblemInstance inst;
  inst.dimension = d;
  inst.boxes.assign(n, Box{});
  for (auto& b : inst.boxes) {
    b.lo.resize(d);
    b.hi.resize(d);
  }
  inst.coord_values.assign(d, {});

  // endpoint = (value, side, box): side 0 for lo, 1 for hi
  struct Ep {
    double value;
    int side;
    int box;
  };
  for (int axis = 0; axis < d; ++axis) {
    std::vector<Ep> eps;
    eps.reserve(2 * n);
    for (int i = 0; i < n; ++i) {
      eps.push_back({raw[i].lo[axis], 0, i});
      eps.push_back({raw[i].hi[axis], 1, i});
    }
    std::sort(eps.begin(), eps.end(), [](const Ep& a, const Ep& b) {
      return std::tie(a.value, a.side, a.box) < std::tie(b.value, b.side, b.box);
    });
    inst.coord_values[axis].resize(2 * n);
    for (int r = 0; r < 2 * n; ++r) {
      const Ep& e = eps[r];
      inst.coord_values[axis][r] = e.value;
      Coord c = 2 * static_cast<Coord>(r);
      if (e.side == 0)
        inst.boxes[e.box].lo[axis] = c;
      else
        inst.boxes[e.box].hi[axis] = c;
    }
  }
  return inst;
}

ProblemInstance normalize_instance_int(const std::vector<Box>& boxes) {
  std::vector<RawBox> raw(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    raw[i].lo.assign(boxes[i].lo.begin(), boxes[i].lo.end());
    raw[i].hi.assign(boxes[i].hi.begin(), boxes[i].hi.end());
  }
  return normalize_instance(raw);
}

std::vector<double> denormalize_point(const ProblemInstance& inst,
                                      const Point& p) {
  std::vector<double> out(p.size());
  for (std::size_t axis = 0; axis < p.size(); ++axis) {
    const auto& vals = inst.coord_values[axis];
    Coord c = p[axis];
    auto last = static_cast<Coord>(vals.size()) - 1;
    if (c % 2 == 0) {
      Coord r = std::clamp<Coord>(c / 2, 0, last);
      out[axis] = vals[r];
    } else {
      Coord r = (c - 1) / 2;  // strictly between ranks r and r+1
      if (r < 0)
        out[axis] = vals.front() - 1.0;
      else if (r >= last)
        out[axis] = vals.back() + 1.0;
      else
        out[axis] = vals[r] + (vals[r + 1] - vals[r]) / 2.0;
    }
  }
  return out;
}

std::vector<int> verify_piercing(const ProblemInstance& inst,
                                 const std::vector<Point>& sol) {
  std::vector<int> unpierced;
  for (int i = 0; i < inst.n(); ++i) {
    bool hit = false;
    for (const auto& p : sol) {
      if (inst.boxes[i].contains(p)) {
        hit = true;
        break;
      }
    }
    if (!hit) unpierced.push_back(i);
  }
  return unpierced;
}

std::vector<int> verify_piercing_raw(
    const std::vector<RawBox>& boxes,
    const std::vector<std::vector<double>>& sol) {
  std::vector<int> unpierced;
  for (int i = 0; i < static_cast<int>(boxes.size()); ++i) {
    bool hit = false;
    for (const auto& p : sol) {
      if (boxes[i].contains(p)) {
        hit = true;
        break;
      }
    }
    if (!hit) unpierced.push_back(i);
  }
  return unpierced;
}

Box instance_hull(const ProblemInstance& inst) {
  Box h;
  h.lo.assign(inst.dimension, 0);
  h.hi.assign(inst.dimension, 0);
  for (int axis = 0; axis < inst.dimension; ++axis) {
    Coord lo = inst.boxes[0].lo[axis], hi = inst.boxes[0].hi[axis];
    for (const auto& b : inst.boxes) {
      lo = std::min(lo, b.lo[axis]);
      hi = std::max(hi, b.hi[axis]);
    }
    h.lo[axis] = lo - 1;
    h.hi[axis] = hi + 1;
  }
  return h;
}

namespace {

// Per-axis facet coordinates with their (unique, post-normalization) owner.
struct AxisFacets {
  std::vector<Coord> coord;
  std::vector<int> owner;
};

std::vector<AxisFacets> collect_facets(const ProblemInstance& inst) {
  std::vector<AxisFacets> fac(inst.dimension);
  for (int axis = 0; axis < inst.dimension; ++axis) {
    std::vector<std::pair<Coord, int>> v;
    for (int i = 0; i < inst.n(); ++i) {
      v.push_back({inst.boxes[i].lo[axis], i});
      v.push_back({inst.boxes[i].hi[axis], i});
    }
    std::sort(v.begin(), v.end());
    for (auto& [c, o] : v) {
      fac[axis].coord.push_back(c);
      fac[axis].owner.push_back(o);
    }
  }
  return fac;
}

}  // namespace

std::vector<Point> arrangement_vertices(const ProblemInstance& inst,
                                        std::int64_t candidate_cap) {
  const int d = inst.dimension;
  const auto fac = collect_facets(inst);
  std::int64_t candidates = 1;
  for (int axis = 0; axis < d; ++axis) {
    candidates *= static_cast<std::int64_t>(fac[axis].coord.size());
    if (candidates > candidate_cap)
      throw std::runtime_error("arrangement_vertices: candidate cap exceeded");
  }

  std::vector<Point> out;
  std::vector<std::size_t> idx(d, 0);
  Point p(d);
  for (;;) {
    for (int axis = 0; axis < d; ++axis) p[axis] = fac[axis].coord[idx[axis]];
    bool ok = true;
    for (int axis = 0; axis < d && ok; ++axis) {
      const Box& b = inst.boxes[fac[axis].owner[idx[axis]]];
      for (int j = 0; j < d; ++j) {
        if (j == axis) continue;
        if (p[j] < b.lo[j] || p[j] > b.hi[j]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back(p);
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == fac[axis].coord.size()) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

namespace {

using Mask = std::uint64_t;

struct BnbState {
  std::vector<Mask> cand_mask;           // maximal candidate vertex masks
  std::vector<Point> cand_point;         // a representative vertex per mask
  std::vector<std::vector<int>> covers;  // box -> candidate indices hitting it
  std::vector<Mask> box_inter;           // box -> mask of intersecting boxes
  std::vector<int> disjoint_order;       // boxes by increasing hi[0]
  Mask all;
  std::int64_t nodes = 0, node_cap = 0;
  bool aborted = false;
  int best_size = 0;
  std::vector<int> best, current;
};

int greedy_disjoint_lower_bound(const BnbState& st, Mask uncovered) {
  int lb = 0;
  Mask m = uncovered;
  for (int i : st.disjoint_order) {
    if (!(m >> i & 1)) continue;
    ++lb;
    m &= ~st.box_inter[i];
  }
  return lb;
}

void bnb(BnbState& st, Mask covered) {
  if (st.aborted) return;
  if (++st.nodes > st.node_cap) {
    st.aborted = true;
    return;
  }
  Mask uncovered = st.all & ~covered;
  if (!uncovered) {
    if (static_cast<int>(st.current.size()) < st.best_size) {
      st.best_size = static_cast<int>(st.current.size());
      st.best = st.current;
    }
    return;
  }
  int depth = static_cast<int>(st.current.size());
  if (depth + greedy_disjoint_lower_bound(st, uncovered) >= st.best_size)
    return;

  // branch on the uncovered box with the fewest useful candidates
  int pick = -1;
  std::size_t fewest = ~std::size_t{0};
  for (int i = 0; i < 64; ++i) {
    if (!(uncovered >> i & 1)) continue;
    if (st.covers[i].size() < fewest) {
      fewest = st.covers[i].size();
      pick = i;
    }
  }
  for (int ci : st.covers[pick]) {
    st.current.push_back(ci);
    bnb(st, covered | st.cand_mask[ci]);
    st.current.pop_back();
    if (st.aborted) return;
  }
}

}  // namespace

std::optional<ExactPiercingResult> exact_piercing(const ProblemInstance& inst,
                                                  int max_n,
                                                  std::int64_t max_vertices,
                                                  std::int64_t node_cap) {
  const int n = inst.n();
  if (n > max_n || n > 63) return std::nullopt;

  std::vector<Point> verts;
  try {
    verts = arrangement_vertices(inst);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
  if (static_cast<std::int64_t>(verts.size()) > max_vertices)
    return std::nullopt;

  BnbState st;
  st.all = n == 63 ? ~Mask{0} >> 1 : (Mask{1} << n) - 1;

  // candidate masks, deduplicated and reduced to maximal ones
  std::vector<std::pair<Mask, int>> masks;
  for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
    Mask m = 0;
    for (int i = 0; i < n; ++i)
      if (inst.boxes[i].contains(verts[v])) m |= Mask{1} << i;
    if (m) masks.push_back({m, v});
  }
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end(),
                          [](auto& a, auto& b) { return a.first == b.first; }),
              masks.end());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < masks.size() && !dominated; ++j)
      if (i != j && (masks[i].first & ~masks[j].first) == 0 &&
          (masks[i].first != masks[j].first || j < i))
        dominated = true;
    if (!dominated) {
      st.cand_mask.push_back(masks[i].first);
      st.cand_point.push_back(verts[masks[i].second]);
    }
  }

  st.covers.assign(n, {});
  for (int c = 0; c < static_cast<int>(st.cand_mask.size()); ++c)
    for (int i = 0; i < n; ++i)
      if (st.cand_mask[c] >> i & 1) st.covers[i].push_back(c);

  st.box_inter.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (inst.boxes[i].intersects(inst.boxes[j]))
        st.box_inter[i] |= Mask{1} << j;
  st.disjoint_order.resize(n);
  std::iota(st.disjoint_order.begin(), st.disjoint_order.end(), 0);
  std::sort(st.disjoint_order.begin(), st.disjoint_order.end(),
            [&](int a, int b) {
              return inst.boxes[a].hi[0] < inst.boxes[b].hi[0];
            });

  // greedy cover for the initial upper bound
  {
    Mask covered = 0;
    std::vector<int> greedy;
    while (covered != st.all) {
      int best = -1, gain = -1;
      for (int c = 0; c < static_cast<int>(st.cand_mask.size()); ++c) {
        int g = __builtin_popcountll(st.cand_mask[c] & ~covered);
        if (g > gain) {
          gain = g;
          best = c;
        }
      }
      covered |= st.cand_mask[best];
      greedy.push_back(best);
    }
    st.best = greedy;
    st.best_size = static_cast<int>(greedy.size());
  }

  st.node_cap = node_cap;
  bnb(st, 0);
  if (st.aborted) return std::nullopt;

  ExactPiercingResult res;
  res.nodes_explored = st.nodes;
  for (int c : st.best) res.points.push_back(st.cand_point[c]);
  return res;
}

}  // namespace pierce
