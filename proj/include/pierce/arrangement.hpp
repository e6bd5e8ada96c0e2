#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/rng.hpp"
#include "pierce/segtree.hpp"
#include "pierce/weight.hpp"

namespace pierce {

// One declared box of the structure.  `cover` is the (possibly clipped)
// geometric extent; the facet flags say which bounds are real facets of the
// original box (clipping to a sub-region produces bounds that are not).
struct DsEntry {
  Box cover;
  std::vector<std::uint8_t> lo_facet, hi_facet;
};

inline DsEntry entry_of_box(const Box& b) {
  DsEntry e;
  e.cover = b;
  e.lo_facet.assign(b.lo.size(), 1);
  e.hi_facet.assign(b.lo.size(), 1);
  return e;
}

inline Box box_drop_axis(const Box& b, int axis) {
  Box r;
  for (int m = 0; m < static_cast<int>(b.lo.size()); ++m) {
    if (m == axis) continue;
    r.lo.push_back(b.lo[m]);
    r.hi.push_back(b.hi[m]);
  }
  return r;
}

struct PartitionStats {
  std::size_t cells = 0;
  bool cover_ok = false;      // cells tile the hull with disjoint interiors
  bool vertex_ok = false;     // no real box corner in any cell interior
  bool crossing_ok = false;   // <= 2*sqrt(n) crossing facets per axis
  bool pile_ok = false;       // every crossing box is an i-pile
  std::int64_t max_crossing = 0;
  std::int64_t max_boundary_cells = 0;  // cells crossed by one box boundary
};

// Implicit weighted arrangement of active boxes (Overmars-Yap partition with
// a hierarchical slab tree).  Maintains, for the multiset S of update boxes,
// the doubling weight 2^{#covering updates} of every vertex of the
// arrangement of the active boxes, supporting weight/double/halve/sample/
// insert/delete.  Vertices strictly inside a cell are the product of the
// per-axis crossing-facet coordinates and live in d lazy segment trees;
// vertices on an even cut hyperplane live in a (d-1)-dimensional structure
// of the same kind attached to the tree node that separates along that cut.
template <class W>
class ArrangementDS {
 public:
  ArrangementDS(int dim, std::vector<DsEntry> entries)
      : dim_(dim), entries_(std::move(entries)) {
    assert(dim_ >= 1);
    assert(!entries_.empty());
    active_.assign(entries_.size(), 0);
    mult_.assign(entries_.size(), 0);
    if (dim_ == 1) {
      build_line();
    } else {
      build_structure();
    }
  }

  static ArrangementDS from_instance(const ProblemInstance& inst) {
    std::vector<DsEntry> es;
    es.reserve(inst.boxes.size());
    for (const auto& b : inst.boxes) es.push_back(entry_of_box(b));
    return ArrangementDS(inst.dimension, std::move(es));
  }

  int dim() const { return dim_; }
  std::size_t n_entries() const { return entries_.size(); }
  bool is_active(int id) const { return active_[id] != 0; }
  std::int64_t multiplicity(int id) const { return mult_[id]; }

  void insert_box(int id) {
    if (active_[id]) throw std::runtime_error("arrangement: double insert");
    active_[id] = 1;
    if (dim_ == 1)
      line_activate(id, +1);
    else
      visit_activation(root_, id, +1);
  }

  void erase_box(int id) {
    if (!active_[id]) throw std::runtime_error("arrangement: delete inactive");
    active_[id] = 0;
    if (dim_ == 1)
      line_activate(id, -1);
    else
      visit_activation(root_, id, -1);
  }

  void double_box(int id, std::int64_t times = 1) {
    mult_[id] += times;
    if (dim_ == 1)
      line_.range_shift(entries_[id].cover.lo[0], entries_[id].cover.hi[0],
                        times);
    else
      visit_update(root_, id, times);
  }

  void halve_box(int id, std::int64_t times = 1) {
    if (mult_[id] < times)
      throw std::runtime_error("arrangement: halve underflow");
    mult_[id] -= times;
    if (dim_ == 1)
      line_.range_shift(entries_[id].cover.lo[0], entries_[id].cover.hi[0],
                        -times);
    else
      visit_update(root_, id, -times);
  }

  W total() {
    if (dim_ == 1) return line_.total();
    W w = nodes_[root_].omega;
    w.mul_pow2(nodes_[root_].lambda);
    return w;
  }

  W weight(const Box& q) {
    if (dim_ == 1) return line_.range_weight(q.lo[0], q.hi[0]);
    W w = weight_rec(root_, q);
    w.mul_pow2(nodes_[root_].lambda);
    return w;
  }

  Point sample(Rng& rng) { return sample_in(hull_, rng); }

  Point sample_in(const Box& q, Rng& rng) {
    if (dim_ == 1) return Point{line_.sample_in(q.lo[0], q.hi[0], rng)};
    if (weight(q).is_zero())
      throw std::runtime_error("arrangement: sample from zero weight");
    return sample_rec(root_, q, rng);
  }

  const Box& hull() const { return hull_; }
  const std::vector<Box>& cells() const { return cell_boxes_; }

  // Recomputes every maintained aggregate from scratch and compares.
  bool audit_equations() {
    if (dim_ == 1) return line_.audit_lazy_consistency();
    std::vector<std::int64_t> lambda_expect(nodes_.size(), 0);
    for (std::size_t id = 0; id < entries_.size(); ++id)
      if (mult_[id] != 0)
        audit_lambda_rec(root_, static_cast<int>(id), mult_[id],
                         lambda_expect);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].lambda != lambda_expect[i]) return false;
    return audit_omega_rec(root_);
  }

  PartitionStats audit_partition() const;

 private:
  // ---- geometry predicates (integer coordinates) -------------------------
  static bool interior_overlaps(const Box& cover, const Box& box) {
    for (std::size_t m = 0; m < cover.lo.size(); ++m)
      if (cover.hi[m] < box.lo[m] + 1 || cover.lo[m] > box.hi[m] - 1)
        return false;
    return true;
  }
  static bool covers_interior(const Box& cover, const Box& box) {
    for (std::size_t m = 0; m < cover.lo.size(); ++m)
      if (cover.lo[m] > box.lo[m] + 1 || cover.hi[m] < box.hi[m] - 1)
        return false;
    return true;
  }
  static bool covers_box(const Box& cover, const Box& box) {
    return cover.contains_box(box);
  }

  static Box drop_axis(const Box& b, int axis) {
    return box_drop_axis(b, axis);
  }

  // ---- structure ----------------------------------------------------------
  struct CellData {
    Box box;
    std::vector<std::vector<Coord>> universe;   // per axis, collected coords
    std::vector<LazySegTree<W>> trees;          // built after collection
  };

  struct BoundaryData {
    int axis = -1;
    Coord cut = 0;
    int owner = -1;                       // entry whose facet carries the cut
    Box region;                           // (d-1)-dim clip region
    std::vector<DsEntry> sub_entries;
    std::unordered_map<int, int> sub_of;  // parent entry id -> sub id
    std::unique_ptr<ArrangementDS<W>> ds;
  };

  struct TreeNode {
    Box box;
    int axis = -1;  // split axis for internal nodes
    Coord cut = 0;
    int left = -1, right = -1;
    int cell = -1;  // leaf: index into cells_
    std::int64_t lambda = 0;
    W omega = W::zero();
    int boundary = -1;  // index into boundaries_, or -1
    bool is_leaf() const { return cell >= 0; }
  };

  void build_line() {
    std::vector<Coord> coords;
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const DsEntry& e = entries_[id];
      if (e.lo_facet[0]) coords.push_back(e.cover.lo[0]);
      if (e.hi_facet[0]) coords.push_back(e.cover.hi[0]);
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    line_ = LazySegTree<W>(std::move(coords));
    hull_.lo = {0};
    hull_.hi = {0};
    if (!line_.coords().empty()) {
      hull_.lo = {line_.coords().front() - 1};
      hull_.hi = {line_.coords().back() + 1};
    }
  }

  void line_activate(int id, int delta) {
    const DsEntry& e = entries_[id];
    bool lo_real = e.lo_facet[0] != 0, hi_real = e.hi_facet[0] != 0;
    auto toggle = [&](Coord c) {
      if (delta > 0)
        line_.activate(c);
      else
        line_.deactivate(c);
    };
    if (lo_real) toggle(e.cover.lo[0]);
    if (hi_real && !(lo_real && e.cover.hi[0] == e.cover.lo[0]))
      toggle(e.cover.hi[0]);
  }

  void build_structure() {
    compute_hull();
    per_axis_facet_owner_.assign(dim_, {});
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const DsEntry& e = entries_[id];
      for (int m = 0; m < dim_; ++m) {
        if (e.lo_facet[m]) per_axis_facet_owner_[m][e.cover.lo[m]] =
            static_cast<int>(id);
        if (e.hi_facet[m]) per_axis_facet_owner_[m][e.cover.hi[m]] =
            static_cast<int>(id);
      }
    }
    cut_threshold_ = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(
               std::ceil(std::sqrt(static_cast<double>(entries_.size())))));
    std::vector<std::vector<Coord>> demands(dim_);
    root_ = build_slab(0, hull_, demands);

    // register entries (collect leaf universes and boundary sub-entries)
    for (std::size_t id = 0; id < entries_.size(); ++id)
      register_entry(root_, static_cast<int>(id));

    // construct leaf trees and boundary sub-structures
    for (auto& cell : cells_) {
      cell.trees.reserve(dim_);
      for (int m = 0; m < dim_; ++m) {
        auto& u = cell.universe[m];
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        cell.trees.emplace_back(u);
      }
      cell_boxes_.push_back(cell.box);
    }
    for (auto& b : boundaries_) {
      if (!b.sub_entries.empty())
        b.ds = std::make_unique<ArrangementDS<W>>(dim_ - 1, b.sub_entries);
    }
  }

  void compute_hull() {
    hull_.lo.assign(dim_, 0);
    hull_.hi.assign(dim_, 0);
    for (int m = 0; m < dim_; ++m) {
      Coord lo = entries_[0].cover.lo[m], hi = entries_[0].cover.hi[m];
      for (const auto& e : entries_) {
        lo = std::min(lo, e.cover.lo[m]);
        hi = std::max(hi, e.cover.hi[m]);
      }
      hull_.lo[m] = lo - 1;
      hull_.hi[m] = hi + 1;
    }
  }

  // Recursive slab subdivision.  `slab` fixes axes < axis; deeper axes span
  // the hull.  `demands` carries the mandatory cut coordinates implied by
  // (i,j)-faces of boxes whose i-side is interior to an enclosing slab.
  int build_slab(int axis, const Box& slab,
                 const std::vector<std::vector<Coord>>& demands) {
    if (axis == dim_) {
      int node = new_node();
      nodes_[node].box = slab;
      nodes_[node].cell = static_cast<int>(cells_.size());
      cells_.push_back(CellData{slab, std::vector<std::vector<Coord>>(dim_), {}});
      return node;
    }

    // facet coordinates of entries overlapping this slab, on this axis
    std::vector<Coord> side_coords;
    std::vector<int> side_owner;
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const DsEntry& e = entries_[id];
      bool overlap = true;
      for (int m = 0; m < axis; ++m)
        if (e.cover.hi[m] < slab.lo[m] || e.cover.lo[m] > slab.hi[m])
          overlap = false;
      if (!overlap) continue;
      if (e.lo_facet[axis]) {
        side_coords.push_back(e.cover.lo[axis]);
        side_owner.push_back(static_cast<int>(id));
      }
      if (e.hi_facet[axis]) {
        side_coords.push_back(e.cover.hi[axis]);
        side_owner.push_back(static_cast<int>(id));
      }
    }
    std::vector<std::size_t> order(side_coords.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return side_coords[a] < side_coords[b];
    });

    // cuts: mandatory (even, on demanded facets) plus density (odd)
    std::vector<Coord> cuts;
    for (Coord c : demands[axis])
      if (c > slab.lo[axis] && c < slab.hi[axis]) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    {
      std::vector<Coord> merged = cuts;
      std::int64_t run = 0;
      std::size_t cut_ptr = 0;
      for (std::size_t oi = 0; oi < order.size(); ++oi) {
        Coord c = side_coords[order[oi]];
        if (c <= slab.lo[axis] || c >= slab.hi[axis]) continue;
        while (cut_ptr < cuts.size() && cuts[cut_ptr] <= c) {
          run = 0;
          ++cut_ptr;
        }
        ++run;
        if (run >= cut_threshold_ && c + 1 < slab.hi[axis]) {
          merged.push_back(c + 1);  // odd: facets are even
          run = 0;
        }
      }
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      cuts = std::move(merged);
    }

    // child intervals
    std::vector<std::pair<Coord, Coord>> intervals;
    Coord prev = slab.lo[axis];
    for (Coord c : cuts) {
      intervals.push_back({prev, c});
      prev = c;
    }
    intervals.push_back({prev, slab.hi[axis]});

    // demands for deeper axes, per child interval
    std::vector<int> child_nodes;
    for (const auto& [a, b] : intervals) {
      Box child = slab;
      child.lo[axis] = a;
      child.hi[axis] = b;
      std::vector<std::vector<Coord>> child_demands = demands;
      for (std::size_t oi = 0; oi < order.size(); ++oi) {
        Coord c = side_coords[order[oi]];
        if (c <= a || c >= b) continue;
        const DsEntry& e = entries_[side_owner[order[oi]]];
        bool overlap = true;
        for (int m = 0; m < axis; ++m)
          if (e.cover.hi[m] < child.lo[m] || e.cover.lo[m] > child.hi[m])
            overlap = false;
        if (!overlap) continue;
        for (int j = axis + 1; j < dim_; ++j) {
          if (e.lo_facet[j]) child_demands[j].push_back(e.cover.lo[j]);
          if (e.hi_facet[j]) child_demands[j].push_back(e.cover.hi[j]);
        }
      }
      for (int j = axis + 1; j < dim_; ++j) {
        auto& dj = child_demands[j];
        std::sort(dj.begin(), dj.end());
        dj.erase(std::unique(dj.begin(), dj.end()), dj.end());
      }
      child_nodes.push_back(build_slab(axis + 1, child, child_demands));
    }

    return combine(child_nodes, 0, child_nodes.size(), axis, slab);
  }

  int combine(const std::vector<int>& kids, std::size_t a, std::size_t b,
              int axis, const Box& span) {
    if (b - a == 1) return kids[a];
    std::size_t mid = (a + b) / 2;
    Box left_span = span, right_span = span;
    left_span.hi[axis] = nodes_[kids[mid - 1]].box.hi[axis];
    right_span.lo[axis] = nodes_[kids[mid]].box.lo[axis];
    int l = combine(kids, a, mid, axis, left_span);
    int r = combine(kids, mid, b, axis, right_span);
    int node = new_node();
    nodes_[node].box = span;
    nodes_[node].axis = axis;
    nodes_[node].cut = nodes_[kids[mid]].box.lo[axis];
    nodes_[node].left = l;
    nodes_[node].right = r;
    maybe_make_boundary(node);
    return node;
  }

  void maybe_make_boundary(int node) {
    TreeNode& u = nodes_[node];
    auto it = per_axis_facet_owner_[u.axis].find(u.cut);
    if (it == per_axis_facet_owner_[u.axis].end()) return;  // odd cut
    int owner = it->second;
    const DsEntry& oe = entries_[owner];
    Box region;
    for (int m = 0; m < dim_; ++m) {
      if (m == u.axis) continue;
      Coord lo = std::max(u.box.lo[m] + 1, oe.cover.lo[m]);
      Coord hi = std::min(u.box.hi[m] - 1, oe.cover.hi[m]);
      if (lo > hi) return;  // owner facet never meets this boundary
      region.lo.push_back(lo);
      region.hi.push_back(hi);
    }
    BoundaryData bd;
    bd.axis = u.axis;
    bd.cut = u.cut;
    bd.owner = owner;
    bd.region = region;
    u.boundary = static_cast<int>(boundaries_.size());
    boundaries_.push_back(std::move(bd));
  }

  int new_node() {
    nodes_.push_back(TreeNode{});
    return static_cast<int>(nodes_.size()) - 1;
  }

  // ---- entry registration (build phase) -----------------------------------
  void register_entry(int node, int id) {
    TreeNode& u = nodes_[node];
    const DsEntry& e = entries_[id];
    if (!interior_overlaps(e.cover, u.box)) return;
    if (covers_box(e.cover, u.box)) return;
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      for (int m = 0; m < dim_; ++m) {
        if (e.lo_facet[m] && e.cover.lo[m] > cell.box.lo[m] &&
            e.cover.lo[m] < cell.box.hi[m])
          cell.universe[m].push_back(e.cover.lo[m]);
        if (e.hi_facet[m] && e.cover.hi[m] > cell.box.lo[m] &&
            e.cover.hi[m] < cell.box.hi[m])
          cell.universe[m].push_back(e.cover.hi[m]);
      }
      return;
    }
    if (u.boundary >= 0) try_register_boundary(u.boundary, id);
    register_entry(u.left, id);
    register_entry(u.right, id);
  }

  void try_register_boundary(int bidx, int id) {
    BoundaryData& bd = boundaries_[bidx];
    const DsEntry& e = entries_[id];
    if (e.cover.lo[bd.axis] > bd.cut || e.cover.hi[bd.axis] < bd.cut) return;
    DsEntry sub;
    int k = 0;
    for (int m = 0; m < dim_; ++m) {
      if (m == bd.axis) continue;
      Coord lo = std::max(e.cover.lo[m], bd.region.lo[k]);
      Coord hi = std::min(e.cover.hi[m], bd.region.hi[k]);
      if (lo > hi) return;  // empty clip
      sub.cover.lo.push_back(lo);
      sub.cover.hi.push_back(hi);
      sub.lo_facet.push_back(e.lo_facet[m] && e.cover.lo[m] == lo);
      sub.hi_facet.push_back(e.hi_facet[m] && e.cover.hi[m] == hi);
      ++k;
    }
    bd.sub_of[id] = static_cast<int>(bd.sub_entries.size());
    bd.sub_entries.push_back(std::move(sub));
  }

  // ---- state maintenance ---------------------------------------------------
  W boundary_total(const TreeNode& u) {
    if (u.boundary < 0) return W::zero();
    BoundaryData& bd = boundaries_[u.boundary];
    if (!bd.ds || !active_[bd.owner]) return W::zero();
    return bd.ds->total();
  }

  void pull(int node) {
    TreeNode& u = nodes_[node];
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      W w = W::one();
      for (int m = 0; m < dim_; ++m) {
        w = w * cell.trees[m].total();
        if (w.is_zero()) break;
      }
      u.omega = w;
      return;
    }
    W w = nodes_[u.left].omega;
    w.mul_pow2(nodes_[u.left].lambda);
    W wr = nodes_[u.right].omega;
    wr.mul_pow2(nodes_[u.right].lambda);
    w += wr;
    w += boundary_total(u);
    u.omega = w;
  }

  void visit_activation(int node, int id, int delta) {
    TreeNode& u = nodes_[node];
    const DsEntry& e = entries_[id];
    if (!interior_overlaps(e.cover, u.box)) return;
    if (covers_box(e.cover, u.box)) return;
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      for (int m = 0; m < dim_; ++m) {
        for (int side = 0; side < 2; ++side) {
          bool facet = side == 0 ? e.lo_facet[m] : e.hi_facet[m];
          Coord q = side == 0 ? e.cover.lo[m] : e.cover.hi[m];
          if (!facet || q <= cell.box.lo[m] || q >= cell.box.hi[m]) continue;
          if (delta > 0)
            cell.trees[m].activate(q);
          else
            cell.trees[m].deactivate(q);
        }
      }
      pull(node);
      return;
    }
    if (u.boundary >= 0) {
      BoundaryData& bd = boundaries_[u.boundary];
      auto it = bd.sub_of.find(id);
      if (it != bd.sub_of.end() && bd.ds) {
        if (delta > 0)
          bd.ds->insert_box(it->second);
        else
          bd.ds->erase_box(it->second);
      }
    }
    visit_activation(u.left, id, delta);
    visit_activation(u.right, id, delta);
    pull(node);
  }

  void visit_update(int node, int id, std::int64_t k) {
    TreeNode& u = nodes_[node];
    const DsEntry& e = entries_[id];
    if (!interior_overlaps(e.cover, u.box)) return;
    if (covers_interior(e.cover, u.box)) {
      u.lambda += k;
      return;
    }
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      int pile_axis = -1;
      for (int m = 0; m < dim_; ++m) {
        bool spans = e.cover.lo[m] <= cell.box.lo[m] + 1 &&
                     e.cover.hi[m] >= cell.box.hi[m] - 1;
        if (!spans) {
          assert(pile_axis == -1 && "partition pile invariant violated");
          pile_axis = m;
        }
      }
      assert(pile_axis >= 0);
      cell.trees[pile_axis].range_shift(e.cover.lo[pile_axis],
                                        e.cover.hi[pile_axis], k);
      pull(node);
      return;
    }
    if (u.boundary >= 0) {
      BoundaryData& bd = boundaries_[u.boundary];
      auto it = bd.sub_of.find(id);
      if (it != bd.sub_of.end() && bd.ds) {
        if (k > 0)
          bd.ds->double_box(it->second, k);
        else
          bd.ds->halve_box(it->second, -k);
      }
    }
    visit_update(u.left, id, k);
    visit_update(u.right, id, k);
    pull(node);
  }

  // ---- queries --------------------------------------------------------------
  W weight_rec(int node, const Box& q) {
    TreeNode& u = nodes_[node];
    if (!interior_overlaps(q, u.box)) return W::zero();
    if (covers_interior(q, u.box)) return u.omega;
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      W w = W::one();
      for (int m = 0; m < dim_; ++m) {
        w = w * cell.trees[m].range_weight(q.lo[m], q.hi[m]);
        if (w.is_zero()) break;
      }
      return w;
    }
    W w = weight_rec(u.left, q);
    w.mul_pow2(nodes_[u.left].lambda);
    W wr = weight_rec(u.right, q);
    wr.mul_pow2(nodes_[u.right].lambda);
    w += wr;
    w += boundary_weight(u, q);
    return w;
  }

  W boundary_weight(const TreeNode& u, const Box& q) {
    if (u.boundary < 0) return W::zero();
    BoundaryData& bd = boundaries_[u.boundary];
    if (!bd.ds || !active_[bd.owner]) return W::zero();
    if (q.lo[bd.axis] > bd.cut || q.hi[bd.axis] < bd.cut) return W::zero();
    return bd.ds->weight(drop_axis(q, bd.axis));
  }

  Point sample_rec(int node, const Box& q, Rng& rng) {
    TreeNode& u = nodes_[node];
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      Point p(dim_);
      for (int m = 0; m < dim_; ++m)
        p[m] = cell.trees[m].sample_in(q.lo[m], q.hi[m], rng);
      return p;
    }
    W wl = weight_rec(u.left, q);
    wl.mul_pow2(nodes_[u.left].lambda);
    W wr = weight_rec(u.right, q);
    wr.mul_pow2(nodes_[u.right].lambda);
    W wb = boundary_weight(u, q);
    W tot = wl + wr + wb;
    assert(!tot.is_zero());
    double roll = rng.next_double();
    if (!wl.is_zero() && roll < W::ratio(wl, tot))
      return sample_rec(u.left, q, rng);
    W wlr = wl + wr;
    if (!wr.is_zero() && (wb.is_zero() || roll < W::ratio(wlr, tot)))
      return sample_rec(u.right, q, rng);
    BoundaryData& bd = boundaries_[u.boundary];
    Point sub = bd.ds->sample_in(drop_axis(q, bd.axis), rng);
    Point p;
    p.reserve(dim_);
    int k = 0;
    for (int m = 0; m < dim_; ++m) {
      if (m == bd.axis)
        p.push_back(bd.cut);
      else
        p.push_back(sub[k++]);
    }
    return p;
  }

  // ---- audits -----------------------------------------------------------------
  void audit_lambda_rec(int node, int id, std::int64_t m,
                        std::vector<std::int64_t>& expect) {
    TreeNode& u = nodes_[node];
    const DsEntry& e = entries_[id];
    if (!interior_overlaps(e.cover, u.box)) return;
    if (covers_interior(e.cover, u.box)) {
      expect[node] += m;
      return;
    }
    if (u.is_leaf()) return;
    audit_lambda_rec(u.left, id, m, expect);
    audit_lambda_rec(u.right, id, m, expect);
  }

  bool audit_omega_rec(int node) {
    TreeNode& u = nodes_[node];
    if (u.is_leaf()) {
      CellData& cell = cells_[u.cell];
      W w = W::one();
      for (int mx = 0; mx < dim_; ++mx) {
        if (!cell.trees[mx].audit_lazy_consistency()) return false;
        w = w * cell.trees[mx].total();
      }
      return W::audit_equal(w, u.omega);
    }
    if (!audit_omega_rec(u.left) || !audit_omega_rec(u.right)) return false;
    if (u.boundary >= 0 && boundaries_[u.boundary].ds &&
        !boundaries_[u.boundary].ds->audit_equations())
      return false;
    W w = nodes_[u.left].omega;
    w.mul_pow2(nodes_[u.left].lambda);
    W wr = nodes_[u.right].omega;
    wr.mul_pow2(nodes_[u.right].lambda);
    w += wr;
    w += boundary_total(u);
    return W::audit_equal(w, u.omega);
  }

  int dim_;
  std::vector<DsEntry> entries_;
  std::vector<int> active_;
  std::vector<std::int64_t> mult_;
  Box hull_;

  // d == 1
  LazySegTree<W> line_;

  // d >= 2
  std::vector<TreeNode> nodes_;
  std::vector<CellData> cells_;
  std::vector<Box> cell_boxes_;
  std::vector<BoundaryData> boundaries_;
  std::vector<std::map<Coord, int>> per_axis_facet_owner_;
  std::int64_t cut_threshold_ = 1;
  int root_ = -1;
};

// Partition invariants (audited, not assumed).
template <class W>
PartitionStats ArrangementDS<W>::audit_partition() const {
  PartitionStats st;
  st.cells = cell_boxes_.size();
  if (dim_ == 1) {
    st.cover_ok = st.vertex_ok = st.crossing_ok = st.pile_ok = true;
    return st;
  }

  // tiling: disjoint interiors, volumes sum to hull volume
  __int128 vol = 0, hull_vol = 1;
  for (int m = 0; m < dim_; ++m)
    hull_vol *= static_cast<__int128>(hull_.hi[m] - hull_.lo[m]);
  bool disjoint = true;
  for (std::size_t i = 0; i < cell_boxes_.size(); ++i) {
    __int128 v = 1;
    for (int m = 0; m < dim_; ++m)
      v *= static_cast<__int128>(cell_boxes_[i].hi[m] - cell_boxes_[i].lo[m]);
    vol += v;
    for (std::size_t j = i + 1; j < cell_boxes_.size(); ++j) {
      bool open_overlap = true;
      for (int m = 0; m < dim_; ++m)
        if (cell_boxes_[i].hi[m] <= cell_boxes_[j].lo[m] ||
            cell_boxes_[j].hi[m] <= cell_boxes_[i].lo[m])
          open_overlap = false;
      if (open_overlap) disjoint = false;
    }
  }
  st.cover_ok = disjoint && vol == hull_vol;

  // no real corner strictly inside a cell; crossing counts; pile property
  st.vertex_ok = true;
  st.crossing_ok = true;
  st.pile_ok = true;
  std::vector<std::int64_t> boundary_cells(entries_.size(), 0);
  for (const auto& cb : cell_boxes_) {
    std::vector<std::int64_t> crossing(dim_, 0);
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const DsEntry& e = entries_[id];
      if (!interior_overlaps(e.cover, cb)) continue;
      if (covers_interior(e.cover, cb)) continue;
      boundary_cells[id] += 1;
      int nonspan = 0;
      for (int m = 0; m < dim_; ++m) {
        bool spans = e.cover.lo[m] <= cb.lo[m] + 1 &&
                     e.cover.hi[m] >= cb.hi[m] - 1;
        if (!spans) ++nonspan;
        bool lo_crosses = e.lo_facet[m] && e.cover.lo[m] > cb.lo[m] &&
                          e.cover.lo[m] < cb.hi[m];
        bool hi_crosses = e.hi_facet[m] && e.cover.hi[m] > cb.lo[m] &&
                          e.cover.hi[m] < cb.hi[m];
        crossing[m] += (lo_crosses ? 1 : 0) + (hi_crosses ? 1 : 0);
      }
      if (nonspan > 1) st.pile_ok = false;
      // corner strictly inside?
      bool corner_inside = false;
      for (int corner = 0; corner < (1 << dim_); ++corner) {
        bool all_real = true, inside = true;
        for (int m = 0; m < dim_; ++m) {
          bool hi_side = corner >> m & 1;
          bool facet = hi_side ? e.hi_facet[m] : e.lo_facet[m];
          Coord c = hi_side ? e.cover.hi[m] : e.cover.lo[m];
          if (!facet) all_real = false;
          if (c <= cb.lo[m] || c >= cb.hi[m]) inside = false;
          if (!all_real || !inside) break;
        }
        if (all_real && inside) corner_inside = true;
      }
      if (corner_inside) st.vertex_ok = false;
    }
    for (int m = 0; m < dim_; ++m) {
      st.max_crossing = std::max(st.max_crossing, crossing[m]);
      if (crossing[m] >
          2 * static_cast<std::int64_t>(std::ceil(
                  std::sqrt(static_cast<double>(entries_.size())))))
        st.crossing_ok = false;
    }
  }
  for (auto c : boundary_cells)
    st.max_boundary_cells = std::max(st.max_boundary_cells, c);
  return st;
}

// Batch sampling: draws r i.i.d. vertices of the arrangement of inst.boxes,
// each with probability proportional to its doubling weight under the update
// multiset (box index -> multiplicity).  Two sweeps along the last axis over
// a (d-1)-dimensional structure: the first records per-slice weights, the
// second replays and draws within the chosen slices.
template <class W>
std::vector<Point> batch_sample(
    const ProblemInstance& inst,
    const std::vector<std::pair<int, std::int64_t>>& updates, std::int64_t r,
    Rng& rng) {
  const int d = inst.dimension;
  assert(d >= 2);
  const int last = d - 1;
  const int n = inst.n();

  std::vector<std::int64_t> mult(n, 0);
  for (auto [id, m] : updates) mult[id] += m;

  struct Event {
    Coord coord;
    int box;
    bool start;
  };
  std::vector<Event> events;
  events.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    events.push_back({inst.boxes[i].lo[last], i, true});
    events.push_back({inst.boxes[i].hi[last], i, false});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.coord < b.coord; });

  std::vector<DsEntry> proj;
  proj.reserve(n);
  for (int i = 0; i < n; ++i)
    proj.push_back(entry_of_box(box_drop_axis(inst.boxes[i], last)));
  ArrangementDS<W> ds(d - 1, proj);

  // sweep 1: per-slice weights; the sweep returns the structure to empty
  std::vector<W> alpha(events.size(), W::zero());
  auto step = [&](std::size_t i, auto&& at_slice) {
    const Event& ev = events[i];
    if (ev.start) {
      ds.insert_box(ev.box);
      if (mult[ev.box] > 0) ds.double_box(ev.box, mult[ev.box]);
    }
    at_slice(i, ev);
    if (!ev.start) {
      ds.erase_box(ev.box);
      if (mult[ev.box] > 0) ds.halve_box(ev.box, mult[ev.box]);
    }
  };
  for (std::size_t i = 0; i < events.size(); ++i)
    step(i, [&](std::size_t idx, const Event& ev) {
      alpha[idx] = ds.weight(box_drop_axis(inst.boxes[ev.box], last));
    });

  W total = W::zero();
  std::vector<W> prefix(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    total += alpha[i];
    prefix[i] = total;
  }
  if (r > 0 && total.is_zero())
    throw std::runtime_error("batch_sample: zero total weight");

  std::vector<std::int64_t> delta(events.size(), 0);
  for (std::int64_t k = 0; k < r; ++k) {
    double u = rng.next_double();
    std::size_t lo = 0, hi = events.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (W::ratio(prefix[mid], total) > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    delta[lo] += 1;
  }

  // sweep 2: replay and draw within slices
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < events.size(); ++i)
    step(i, [&](std::size_t idx, const Event& ev) {
      if (delta[idx] == 0) return;
      Box window = box_drop_axis(inst.boxes[ev.box], last);
      for (std::int64_t k = 0; k < delta[idx]; ++k) {
        Point sub = ds.sample_in(window, rng);
        Point p;
        p.reserve(d);
        for (int m = 0; m < last; ++m) p.push_back(sub[m]);
        p.push_back(ev.coord);
        out.push_back(std::move(p));
      }
    });

  // decorrelate output order from sweep order
  for (std::size_t i = out.size(); i > 1; --i)
    std::swap(out[i - 1], out[rng.next_below(i)]);
  return out;
}

}  // namespace pierce
