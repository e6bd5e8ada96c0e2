#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pierce/geometry.hpp"

namespace pierce {

// Multi-level orthogonal range tree over d-dimensional points (multiset).
//
// Every level is a leaf-oriented BST; each internal node owns a nested tree
// over its subtree's points for the next coordinate.  Updates keep the trees
// balanced with scapegoat-style partial rebuilds (amortized), plus a global
// rebuild when more than half of the peak size has been deleted.
//
// Queries take per-axis bounds with optional strict (<, >) sides so callers
// can express half-open regions exactly; canonical decomposition returns node
// ids whose subtrees partition the query result.
template <class T>
class RangeTree {
 public:
  struct Range {
    T lo, hi;
    bool lo_strict = false, hi_strict = false;
  };
  using Pt = std::vector<T>;
  using Query = std::vector<Range>;

  static Query query_of_box(const Pt& lo, const Pt& hi) {
    Query q(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) q[i] = {lo[i], hi[i]};
    return q;
  }

  explicit RangeTree(int dim) : dim_(dim) {}

  RangeTree(int dim, const std::vector<Pt>& pts) : dim_(dim) {
    std::vector<int> ids;
    for (const auto& p : pts) ids.push_back(store_point(p));
    root_ = bulk_build(ids, 0);
    live_ = static_cast<std::int64_t>(pts.size());
    peak_ = live_;
  }

  int dim() const { return dim_; }
  std::int64_t size() const { return live_; }

  void insert(const Pt& p) {
    assert(static_cast<int>(p.size()) == dim_);
    int pid = store_point(p);
    root_ = insert_into(root_, pid, 0);
    ++live_;
    peak_ = std::max(peak_, live_);
  }

  void erase(const Pt& p) {
    int pid = find_pid(root_, p, 0);
    if (pid < 0) throw std::runtime_error("RangeTree: erase of absent point");
    root_ = erase_from(root_, pid, 0);
    free_point(pid);
    --live_;
    if (live_ * 2 < peak_) full_rebuild();
  }

  bool contains(const Pt& p) const { return find_pid(root_, p, 0) >= 0; }

  std::int64_t count(const Query& q) const {
    return count_rec(root_, 0, q, true, true);
  }

  // node ids whose point sets are disjoint and union to the query result
  std::vector<int> canonical(const Query& q) const {
    std::vector<int> out;
    canonical_rec(root_, 0, q, true, true, out);
    return out;
  }

  std::int64_t node_size(int id) const { return pool_[id].size; }

  void node_points(int id, std::vector<Pt>& out) const {
    collect_points(id, out);
  }

  void report(const Query& q, std::vector<Pt>& out) const {
    for (int id : canonical(q)) collect_points(id, out);
  }

  std::optional<Pt> any_in(const Query& q) const {
    auto ids = canonical(q);
    if (ids.empty()) return std::nullopt;
    int id = ids.front();
    while (!pool_[id].is_leaf()) id = pool_[id].l;
    return points_[pool_[id].pid];
  }

 private:
  struct Node {
    int key_pid = -1;  // max element of the left subtree (routing)
    int l = -1, r = -1;
    int nested = -1;  // next-level tree over this subtree (internal only)
    int pid = -1;     // leaf payload
    std::int64_t size = 1;
    bool is_leaf() const { return pid >= 0; }
  };

  // --- point & node pools -------------------------------------------------
  // Point slots are never reused: internal routing keys may keep referring to
  // deleted elements as separators, which stays valid only while their
  // coordinates are immutable.
  int store_point(const Pt& p) {
    int pid = static_cast<int>(points_.size());
    points_.push_back(p);
    return pid;
  }
  void free_point(int) {}

  int alloc_node() {
    if (!free_nodes_.empty()) {
      int id = free_nodes_.back();
      free_nodes_.pop_back();
      pool_[id] = Node{};
      return id;
    }
    pool_.push_back(Node{});
    return static_cast<int>(pool_.size()) - 1;
  }
  void free_subtree(int id) {
    if (id < 0) return;
    free_subtree(pool_[id].l);
    free_subtree(pool_[id].r);
    free_subtree(pool_[id].nested);
    free_nodes_.push_back(id);
  }

  // total order at a level: (coord, full point, pid)
  bool pid_less(int a, int b, int level) const {
    const Pt& pa = points_[a];
    const Pt& pb = points_[b];
    if (pa[level] != pb[level]) return pa[level] < pb[level];
    if (pa != pb) return pa < pb;
    return a < b;
  }

  // --- build --------------------------------------------------------------
  int bulk_build(std::vector<int> ids, int level) {
    if (ids.empty()) return -1;
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return pid_less(a, b, level); });
    return build_sorted(ids, 0, ids.size(), level);
  }

  int build_sorted(const std::vector<int>& ids, std::size_t a, std::size_t b,
                   int level) {
    int nd = alloc_node();
    if (b - a == 1) {
      pool_[nd].pid = ids[a];
      return nd;
    }
    std::size_t mid = (a + b) / 2;
    int l = build_sorted(ids, a, mid, level);
    int r = build_sorted(ids, mid, b, level);
    pool_[nd].l = l;
    pool_[nd].r = r;
    pool_[nd].key_pid = ids[mid - 1];
    pool_[nd].size = static_cast<std::int64_t>(b - a);
    if (level + 1 < dim_) {
      std::vector<int> sub(ids.begin() + a, ids.begin() + b);
      pool_[nd].nested = bulk_build(std::move(sub), level + 1);
    }
    return nd;
  }

  void full_rebuild() {
    std::vector<int> ids;
    collect_pids(root_, ids);
    free_subtree(root_);
    root_ = bulk_build(std::move(ids), 0);
    peak_ = live_;
  }

  void collect_pids(int nd, std::vector<int>& out) const {
    if (nd < 0) return;
    if (pool_[nd].is_leaf()) {
      out.push_back(pool_[nd].pid);
      return;
    }
    collect_pids(pool_[nd].l, out);
    collect_pids(pool_[nd].r, out);
  }

  void collect_points(int nd, std::vector<Pt>& out) const {
    if (nd < 0) return;
    if (pool_[nd].is_leaf()) {
      out.push_back(points_[pool_[nd].pid]);
      return;
    }
    collect_points(pool_[nd].l, out);
    collect_points(pool_[nd].r, out);
  }

  // --- update -------------------------------------------------------------
  static constexpr double kAlpha = 0.72;

  int insert_into(int nd, int pid, int level) {
    if (nd < 0) {
      int leaf = alloc_node();
      pool_[leaf].pid = pid;
      return leaf;
    }
    nd = insert_rec(nd, pid, level);
    // rebuild the highest unbalanced node on the insert path, if any
    int bad = find_unbalanced(nd, pid, level);
    if (bad >= 0) nd = rebuild_subtree_in(nd, bad, level);
    return nd;
  }

  int insert_rec(int nd, int pid, int level) {
    Node& v = pool_[nd];
    if (v.is_leaf()) {
      int other = v.pid;
      int a = other, b = pid;
      if (pid_less(b, a, level)) std::swap(a, b);
      int la = alloc_node(), lb = alloc_node();
      pool_[la].pid = a;
      pool_[lb].pid = b;
      Node& p = pool_[nd];
      p.pid = -1;
      p.l = la;
      p.r = lb;
      p.key_pid = a;
      p.size = 2;
      if (level + 1 < dim_) pool_[nd].nested = bulk_build({a, b}, level + 1);
      return nd;
    }
    if (v.nested >= 0)
      pool_[nd].nested = insert_into(v.nested, pid, level + 1);
    Node& v2 = pool_[nd];
    v2.size += 1;
    if (pid_less(pid, v2.key_pid, level) || pid == v2.key_pid)
      pool_[nd].l = insert_rec(v2.l, pid, level);
    else
      pool_[nd].r = insert_rec(v2.r, pid, level);
    return nd;
  }

  int find_unbalanced(int nd, int pid, int level) {
    int cur = nd;
    while (cur >= 0 && !pool_[cur].is_leaf()) {
      const Node& v = pool_[cur];
      std::int64_t limit =
          static_cast<std::int64_t>(kAlpha * static_cast<double>(v.size)) + 1;
      if (pool_[v.l].size > limit || pool_[v.r].size > limit) return cur;
      cur = (pid_less(pid, v.key_pid, level) || pid == v.key_pid) ? v.l : v.r;
    }
    return -1;
  }

  int rebuild_subtree_in(int root, int bad, int level) {
    std::vector<int> ids;
    collect_pids(bad, ids);
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return pid_less(a, b, level); });
    if (bad == root) {
      free_subtree(root);
      return build_sorted(ids, 0, ids.size(), level);
    }
    int parent = parent_of(root, bad, level);
    int fresh;
    {
      free_subtree(bad);
      fresh = build_sorted(ids, 0, ids.size(), level);
    }
    if (pool_[parent].l == bad)
      pool_[parent].l = fresh;
    else
      pool_[parent].r = fresh;
    return root;
  }

  int parent_of(int root, int child, int level) const {
    int cur = root;
    int key = pool_[child].key_pid >= 0 ? pool_[child].key_pid
                                        : pool_[child].pid;
    while (!pool_[cur].is_leaf()) {
      const Node& v = pool_[cur];
      if (v.l == child || v.r == child) return cur;
      cur = (pid_less(key, v.key_pid, level) || key == v.key_pid) ? v.l : v.r;
    }
    throw std::logic_error("RangeTree: parent not found");
  }

  // Finds any live copy of p.  Duplicates are tie-broken by pid, so when the
  // query value equals a routing key both sides must be searched.
  int find_pid(int nd, const Pt& p, int level) const {
    if (nd < 0) return -1;
    const Node& v = pool_[nd];
    if (v.is_leaf()) return points_[v.pid] == p ? v.pid : -1;
    const Pt& k = points_[v.key_pid];
    if (p[level] < k[level] || (p[level] == k[level] && p < k))
      return find_pid(v.l, p, level);
    if (p[level] > k[level] || (p[level] == k[level] && p > k))
      return find_pid(v.r, p, level);
    int res = find_pid(v.l, p, level);
    return res >= 0 ? res : find_pid(v.r, p, level);
  }

  int erase_from(int nd, int pid, int level) {
    assert(nd >= 0);
    if (pool_[nd].is_leaf()) {
      assert(pool_[nd].pid == pid);
      free_nodes_.push_back(nd);
      return -1;
    }
    Node& v = pool_[nd];
    if (v.nested >= 0) {
      int nn = erase_from(v.nested, pid, level + 1);
      pool_[nd].nested = nn;
    }
    pool_[nd].size -= 1;
    bool left =
        pid_less(pid, pool_[nd].key_pid, level) || pid == pool_[nd].key_pid;
    int child = left ? pool_[nd].l : pool_[nd].r;
    int replaced = erase_from(child, pid, level);
    if (replaced < 0) {
      // child collapsed to nothing: splice this node out
      int sibling = left ? pool_[nd].r : pool_[nd].l;
      if (pool_[nd].nested >= 0) free_subtree(pool_[nd].nested);
      pool_[nd].l = pool_[nd].r = pool_[nd].nested = -1;
      free_nodes_.push_back(nd);
      return sibling;
    }
    if (left)
      pool_[nd].l = replaced;
    else
      pool_[nd].r = replaced;
    return nd;
  }

  // --- queries ------------------------------------------------------------
  bool coord_ge_lo(T c, const Range& r) const {
    return r.lo_strict ? c > r.lo : c >= r.lo;
  }
  bool coord_le_hi(T c, const Range& r) const {
    return r.hi_strict ? c < r.hi : c <= r.hi;
  }

  bool point_in_suffix(int pid, int level, const Query& q) const {
    const Pt& p = points_[pid];
    for (int a = level; a < dim_; ++a)
      if (!coord_ge_lo(p[a], q[a]) || !coord_le_hi(p[a], q[a])) return false;
    return true;
  }

  std::int64_t count_rec(int nd, int level, const Query& q, bool lo_chk,
                         bool hi_chk) const {
    if (nd < 0) return 0;
    const Node& v = pool_[nd];
    if (!lo_chk && !hi_chk) {
      if (level + 1 == dim_) return v.size;
      if (v.is_leaf()) return point_in_suffix(v.pid, level + 1, q) ? 1 : 0;
      return count_rec(v.nested, level + 1, q, true, true);
    }
    if (v.is_leaf()) return point_in_suffix(v.pid, level, q) ? 1 : 0;
    T kc = points_[v.key_pid][level];
    if (lo_chk && !coord_ge_lo(kc, q[level]))
      return count_rec(v.r, level, q, lo_chk, hi_chk);
    if (hi_chk && !coord_le_hi(kc, q[level]))
      return count_rec(v.l, level, q, lo_chk, hi_chk);
    return count_rec(v.l, level, q, lo_chk, false) +
           count_rec(v.r, level, q, false, hi_chk);
  }

  void canonical_rec(int nd, int level, const Query& q, bool lo_chk,
                     bool hi_chk, std::vector<int>& out) const {
    if (nd < 0) return;
    const Node& v = pool_[nd];
    if (!lo_chk && !hi_chk) {
      if (level + 1 == dim_) {
        out.push_back(nd);
        return;
      }
      if (v.is_leaf()) {
        if (point_in_suffix(v.pid, level + 1, q)) out.push_back(nd);
        return;
      }
      canonical_rec(v.nested, level + 1, q, true, true, out);
      return;
    }
    if (v.is_leaf()) {
      if (point_in_suffix(v.pid, level, q)) out.push_back(nd);
      return;
    }
    T kc = points_[v.key_pid][level];
    if (lo_chk && !coord_ge_lo(kc, q[level])) {
      canonical_rec(v.r, level, q, lo_chk, hi_chk, out);
      return;
    }
    if (hi_chk && !coord_le_hi(kc, q[level])) {
      canonical_rec(v.l, level, q, lo_chk, hi_chk, out);
      return;
    }
    canonical_rec(v.l, level, q, lo_chk, false, out);
    canonical_rec(v.r, level, q, false, hi_chk, out);
  }

  int dim_;
  int root_ = -1;
  std::int64_t live_ = 0, peak_ = 0;
  std::vector<Pt> points_;
  std::vector<Node> pool_;
  std::vector<int> free_nodes_;
};

}  // namespace pierce
