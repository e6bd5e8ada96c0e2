#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/rng.hpp"
#include "pierce/weight.hpp"

namespace pierce {

// Lazy segment tree over a fixed universe of endpoint coordinates.
//
// Each leaf carries an activity count and an exponent; an active leaf has
// doubling weight 2^exponent.  double/halve multiply the weight of every
// coordinate in an interval by 2 (resp. 1/2) via lazy exponent propagation.
// Exponents keep accumulating on inactive leaves, so a coordinate activated
// after a batch of doubles comes up with the weight those doubles imply.
template <class W>
class LazySegTree {
 public:
  LazySegTree() = default;

  explicit LazySegTree(std::vector<Coord> coords) : coords_(std::move(coords)) {
    assert(std::is_sorted(coords_.begin(), coords_.end()));
    assert(std::adjacent_find(coords_.begin(), coords_.end()) == coords_.end());
    m_ = coords_.size();
    std::size_t p2 = 1;
    while (p2 < std::max<std::size_t>(m_, 1)) p2 <<= 1;
    size_ = p2;
    omega_.assign(2 * size_, W::zero());
    alpha_.assign(2 * size_, 0);
    cnt_.assign(2 * size_, 0);
    active_.assign(size_, 0);
  }

  std::size_t universe_size() const { return m_; }
  const std::vector<Coord>& coords() const { return coords_; }
  bool has_coord(Coord c) const {
    auto it = std::lower_bound(coords_.begin(), coords_.end(), c);
    return it != coords_.end() && *it == c;
  }

  W total() const { return omega_[1]; }
  std::int64_t active_count() const { return cnt_[1]; }

  void activate(Coord c) { set_active(c, +1); }
  void deactivate(Coord c) { set_active(c, -1); }

  void range_double(Coord a, Coord b) { range_shift(a, b, +1); }
  void range_halve(Coord a, Coord b) { range_shift(a, b, -1); }

  // multiply weights of active coordinates in [a, b] by 2^k
  void range_shift(Coord a, Coord b, std::int64_t k) {
    if (k == 0) return;
    auto [ql, qr] = index_range(a, b);
    if (ql >= qr) return;
    shift_rec(1, 0, size_, ql, qr, k);
  }

  // Sum of doubling weights of active coordinates in [a, b].
  W range_weight(Coord a, Coord b) {
    auto [ql, qr] = index_range(a, b);
    if (ql >= qr) return W::zero();
    return weight_rec(1, 0, size_, ql, qr);
  }

  std::int64_t range_count(Coord a, Coord b) {
    auto [ql, qr] = index_range(a, b);
    if (ql >= qr) return 0;
    return count_rec(1, 0, size_, ql, qr);
  }

  W point_weight(Coord c) { return range_weight(c, c); }

  // #doubles - #halves whose interval covers c, over the whole history.
  std::int64_t point_exponent(Coord c) {
    std::size_t i = index_of(c);
    std::size_t node = 1, l = 0, r = size_;
    while (r - l > 1) {
      push(node);
      std::size_t mid = (l + r) / 2;
      if (i < mid) {
        node = 2 * node;
        r = mid;
      } else {
        node = 2 * node + 1;
        l = mid;
      }
    }
    return alpha_[node];
  }

  // Weighted draw over all active coordinates.
  Coord sample(Rng& rng) {
    if (total().is_zero()) throw std::runtime_error("segtree sample: zero weight");
    return descend(1, 0, size_, rng);
  }

  // Weighted draw restricted to coordinates in [a, b].
  Coord sample_in(Coord a, Coord b, Rng& rng) {
    auto [ql, qr] = index_range(a, b);
    std::vector<std::size_t> nodes;
    decompose(1, 0, size_, ql, qr, nodes);
    W tot = W::zero();
    for (auto nd : nodes) tot += omega_[nd];
    if (tot.is_zero())
      throw std::runtime_error("segtree sample_in: zero weight in range");
    double u = rng.next_double();
    W acc = W::zero();
    std::size_t chosen = nodes.back();
    for (auto nd : nodes) {
      acc += omega_[nd];
      if (u < W::ratio(acc, tot)) {
        chosen = nd;
        break;
      }
    }
    auto [l, r] = node_span(chosen);
    return descend(chosen, l, r, rng);
  }

  // Recomputes every node bottom-up after flushing all pending exponents and
  // compares with the stored aggregates.
  bool audit_lazy_consistency() {
    push_all(1, 0, size_);
    return audit_rec(1, 0, size_);
  }

 private:
  std::pair<std::size_t, std::size_t> index_range(Coord a, Coord b) const {
    auto lo = std::lower_bound(coords_.begin(), coords_.end(), a);
    auto hi = std::upper_bound(coords_.begin(), coords_.end(), b);
    return {static_cast<std::size_t>(lo - coords_.begin()),
            static_cast<std::size_t>(hi - coords_.begin())};
  }

  std::size_t index_of(Coord c) const {
    auto it = std::lower_bound(coords_.begin(), coords_.end(), c);
    if (it == coords_.end() || *it != c)
      throw std::runtime_error("segtree: coordinate not in universe");
    return static_cast<std::size_t>(it - coords_.begin());
  }

  bool is_leaf(std::size_t node) const { return node >= size_; }

  std::pair<std::size_t, std::size_t> node_span(std::size_t node) const {
    std::size_t l = node, r = node + 1;
    while (l < size_) {
      l *= 2;
      r *= 2;
    }
    return {l - size_, r - size_};
  }

  void push(std::size_t node) {
    if (is_leaf(node)) return;
    std::int64_t a = alpha_[node];
    if (a == 0) return;
    for (std::size_t ch : {2 * node, 2 * node + 1}) {
      alpha_[ch] += a;
      omega_[ch].mul_pow2(a);
    }
    alpha_[node] = 0;
  }

  void pull(std::size_t node) {
    omega_[node] = omega_[2 * node] + omega_[2 * node + 1];
    cnt_[node] = cnt_[2 * node] + cnt_[2 * node + 1];
  }

  void set_active(Coord c, int delta) {
    std::size_t i = index_of(c);
    set_active_rec(1, 0, size_, i, delta);
  }

  void set_active_rec(std::size_t node, std::size_t l, std::size_t r,
                      std::size_t i, int delta) {
    if (r - l == 1) {
      int before = active_[i];
      int after = before + delta;
      if (after < 0) throw std::runtime_error("segtree: deactivate inactive");
      active_[i] = after;
      cnt_[node] = after > 0 ? 1 : 0;
      omega_[node] = after > 0 ? W::pow2(alpha_[node]) : W::zero();
      return;
    }
    push(node);
    std::size_t mid = (l + r) / 2;
    if (i < mid)
      set_active_rec(2 * node, l, mid, i, delta);
    else
      set_active_rec(2 * node + 1, mid, r, i, delta);
    pull(node);
  }

  void shift_rec(std::size_t node, std::size_t l, std::size_t r,
                 std::size_t ql, std::size_t qr, std::int64_t k) {
    if (qr <= l || r <= ql) return;
    if (ql <= l && r <= qr) {
      alpha_[node] += k;
      omega_[node].mul_pow2(k);
      return;
    }
    push(node);
    std::size_t mid = (l + r) / 2;
    shift_rec(2 * node, l, mid, ql, qr, k);
    shift_rec(2 * node + 1, mid, r, ql, qr, k);
    pull(node);
  }

  W weight_rec(std::size_t node, std::size_t l, std::size_t r, std::size_t ql,
               std::size_t qr) {
    if (qr <= l || r <= ql) return W::zero();
    if (ql <= l && r <= qr) return omega_[node];
    push(node);
    std::size_t mid = (l + r) / 2;
    return weight_rec(2 * node, l, mid, ql, qr) +
           weight_rec(2 * node + 1, mid, r, ql, qr);
  }

  std::int64_t count_rec(std::size_t node, std::size_t l, std::size_t r,
                         std::size_t ql, std::size_t qr) const {
    if (qr <= l || r <= ql) return 0;
    if (ql <= l && r <= qr) return cnt_[node];
    std::size_t mid = (l + r) / 2;
    return count_rec(2 * node, l, mid, ql, qr) +
           count_rec(2 * node + 1, mid, r, ql, qr);
  }

  void decompose(std::size_t node, std::size_t l, std::size_t r,
                 std::size_t ql, std::size_t qr,
                 std::vector<std::size_t>& out) {
    if (qr <= l || r <= ql) return;
    if (ql <= l && r <= qr) {
      out.push_back(node);
      return;
    }
    push(node);
    std::size_t mid = (l + r) / 2;
    decompose(2 * node, l, mid, ql, qr, out);
    decompose(2 * node + 1, mid, r, ql, qr, out);
  }

  Coord descend(std::size_t node, std::size_t l, std::size_t r, Rng& rng) {
    while (r - l > 1) {
      push(node);
      std::size_t mid = (l + r) / 2;
      const W& wl = omega_[2 * node];
      const W& wr = omega_[2 * node + 1];
      bool go_left;
      if (wl.is_zero())
        go_left = false;
      else if (wr.is_zero())
        go_left = true;
      else
        go_left = rng.next_double() < W::ratio(wl, omega_[node]);
      if (go_left) {
        node = 2 * node;
        r = mid;
      } else {
        node = 2 * node + 1;
        l = mid;
      }
    }
    assert(l < m_ && active_[l] > 0);
    return coords_[l];
  }

  void push_all(std::size_t node, std::size_t l, std::size_t r) {
    if (r - l == 1) return;
    push(node);
    std::size_t mid = (l + r) / 2;
    push_all(2 * node, l, mid);
    push_all(2 * node + 1, mid, r);
  }

  bool audit_rec(std::size_t node, std::size_t l, std::size_t r) {
    if (r - l == 1) {
      W expect = (l < m_ && active_[l] > 0) ? W::pow2(alpha_[node]) : W::zero();
      return W::audit_equal(omega_[node], expect);
    }
    std::size_t mid = (l + r) / 2;
    if (!audit_rec(2 * node, l, mid) || !audit_rec(2 * node + 1, mid, r))
      return false;
    return alpha_[node] == 0 &&
           W::audit_equal(omega_[node],
                          omega_[2 * node] + omega_[2 * node + 1]) &&
           cnt_[node] == cnt_[2 * node] + cnt_[2 * node + 1];
  }

  std::vector<Coord> coords_;
  std::size_t m_ = 0, size_ = 0;
  std::vector<W> omega_;
  std::vector<std::int64_t> alpha_;
  std::vector<std::int64_t> cnt_;
  std::vector<int> active_;
};

}  // namespace pierce
