#pragma once

// Shared helpers for the test suites: small random instance generators, the
// naive reference structures the differential tests compare against, and a
// chi-square goodness-of-fit check.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/rng.hpp"
#include "pierce/weight.hpp"

namespace testsup {

using pierce::Box;
using pierce::Coord;
using pierce::Point;
using pierce::ProblemInstance;
using pierce::RawBox;
using pierce::Rng;

inline RawBox random_raw_box(Rng& rng, int d, double span = 100.0,
                             double max_side = 40.0) {
  RawBox b;
  b.lo.resize(d);
  b.hi.resize(d);
  for (int i = 0; i < d; ++i) {
    double lo = rng.next_double() * span;
    double side = rng.next_double() * max_side + 0.5;
    b.lo[i] = lo;
    b.hi[i] = lo + side;
  }
  return b;
}

inline ProblemInstance random_instance(Rng& rng, int d, int n,
                                       double span = 100.0,
                                       double max_side = 40.0) {
  std::vector<RawBox> raw;
  raw.reserve(n);
  for (int i = 0; i < n; ++i)
    raw.push_back(random_raw_box(rng, d, span, max_side));
  return pierce::normalize_instance(raw);
}

// Independent vertex oracle: enumerate every tuple of per-axis endpoint
// values and keep it if, on each axis, *some* box has a facet there whose
// closed facet contains the point.  Deliberately searches all boxes instead
// of using owner uniqueness.
inline std::vector<Point> vertices_bruteforce(const ProblemInstance& inst) {
  const int d = inst.dimension;
  std::vector<std::vector<Coord>> axis_coords(d);
  for (int a = 0; a < d; ++a) {
    for (const auto& b : inst.boxes) {
      axis_coords[a].push_back(b.lo[a]);
      axis_coords[a].push_back(b.hi[a]);
    }
    std::sort(axis_coords[a].begin(), axis_coords[a].end());
    axis_coords[a].erase(
        std::unique(axis_coords[a].begin(), axis_coords[a].end()),
        axis_coords[a].end());
  }
  std::vector<Point> out;
  std::vector<std::size_t> idx(d, 0);
  Point p(d);
  for (;;) {
    for (int a = 0; a < d; ++a) p[a] = axis_coords[a][idx[a]];
    bool ok = true;
    for (int a = 0; a < d && ok; ++a) {
      bool axis_ok = false;
      for (const auto& b : inst.boxes) {
        if (b.lo[a] != p[a] && b.hi[a] != p[a]) continue;
        bool inside = true;
        for (int j = 0; j < d; ++j) {
          if (j == a) continue;
          if (p[j] < b.lo[j] || p[j] > b.hi[j]) {
            inside = false;
            break;
          }
        }
        if (inside) {
          axis_ok = true;
          break;
        }
      }
      ok = axis_ok;
    }
    if (ok) out.push_back(p);
    int a = d - 1;
    while (a >= 0 && ++idx[a] == axis_coords[a].size()) {
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Naive 1D reference for the lazy segment tree: per-coordinate exponent and
// activity maintained by direct scans.
struct NaiveSegTree {
  std::vector<Coord> coords;
  std::vector<std::int64_t> expo;
  std::vector<int> active;

  explicit NaiveSegTree(std::vector<Coord> cs)
      : coords(std::move(cs)), expo(coords.size(), 0), active(coords.size(), 0) {}

  void range_shift(Coord a, Coord b, std::int64_t k) {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (a <= coords[i] && coords[i] <= b) expo[i] += k;
  }
  void activate(Coord c) { active[find(c)] += 1; }
  void deactivate(Coord c) { active[find(c)] -= 1; }
  std::size_t find(Coord c) const {
    return static_cast<std::size_t>(
        std::lower_bound(coords.begin(), coords.end(), c) - coords.begin());
  }
  pierce::BigDyadic range_weight(Coord a, Coord b) const {
    auto w = pierce::BigDyadic::zero();
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (active[i] > 0 && a <= coords[i] && coords[i] <= b)
        w += pierce::BigDyadic::pow2(expo[i]);
    return w;
  }
  pierce::BigDyadic total() const {
    return range_weight(coords.empty() ? 0 : coords.front(),
                        coords.empty() ? 0 : coords.back());
  }
  // exact per-coordinate probabilities (as doubles, for sampling checks)
  std::vector<double> probabilities() const {
    auto tot = total();
    std::vector<double> p(coords.size(), 0.0);
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (active[i] > 0)
        p[i] = pierce::BigDyadic::ratio(pierce::BigDyadic::pow2(expo[i]), tot);
    return p;
  }
};

// Naive reference for the implicit arrangement structure: materializes every
// candidate vertex (product of per-axis facet coordinates with their owning
// box) and maintains exact exponents by direct scans.
struct NaiveArr {
  struct Cand {
    Point p;
    std::vector<int> owner;  // box owning the facet on each axis
    bool geom_ok;            // p lies inside each owner's facet
    std::int64_t expo = 0;
  };
  ProblemInstance inst;
  std::vector<Cand> cands;
  std::vector<int> active;
  std::vector<std::int64_t> mult;

  explicit NaiveArr(const ProblemInstance& in) : inst(in) {
    const int d = inst.dimension;
    std::vector<std::vector<std::pair<Coord, int>>> fac(d);
    for (int a = 0; a < d; ++a) {
      for (int i = 0; i < inst.n(); ++i) {
        fac[a].push_back({inst.boxes[i].lo[a], i});
        fac[a].push_back({inst.boxes[i].hi[a], i});
      }
      std::sort(fac[a].begin(), fac[a].end());
    }
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      Cand c;
      c.p.resize(d);
      c.owner.resize(d);
      c.geom_ok = true;
      for (int a = 0; a < d; ++a) {
        c.p[a] = fac[a][idx[a]].first;
        c.owner[a] = fac[a][idx[a]].second;
      }
      for (int a = 0; a < d && c.geom_ok; ++a) {
        const Box& b = inst.boxes[c.owner[a]];
        for (int j = 0; j < d; ++j) {
          if (j == a) continue;
          if (c.p[j] < b.lo[j] || c.p[j] > b.hi[j]) {
            c.geom_ok = false;
            break;
          }
        }
      }
      cands.push_back(std::move(c));
      int a = d - 1;
      while (a >= 0 && ++idx[a] == fac[a].size()) {
        idx[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
    active.assign(inst.n(), 0);
    mult.assign(inst.n(), 0);
  }

  bool exists(const Cand& c) const {
    if (!c.geom_ok) return false;
    for (int o : c.owner)
      if (!active[o]) return false;
    return true;
  }
  void insert_box(int id) { active[id] = 1; }
  void erase_box(int id) { active[id] = 0; }
  void double_box(int id, std::int64_t k = 1) {
    mult[id] += k;
    for (auto& c : cands)
      if (inst.boxes[id].contains(c.p)) c.expo += k;
  }
  void halve_box(int id, std::int64_t k = 1) { double_box(id, -k); }
  pierce::BigDyadic weight(const Box& q) const {
    auto w = pierce::BigDyadic::zero();
    for (const auto& c : cands)
      if (exists(c) && q.contains(c.p)) w += pierce::BigDyadic::pow2(c.expo);
    return w;
  }
  pierce::BigDyadic total() const {
    auto w = pierce::BigDyadic::zero();
    for (const auto& c : cands)
      if (exists(c)) w += pierce::BigDyadic::pow2(c.expo);
    return w;
  }
  // exact vertex list with probabilities (deduplicated)
  std::vector<std::pair<Point, double>> distribution() const {
    auto tot = total();
    std::map<Point, pierce::BigDyadic> acc;
    for (const auto& c : cands)
      if (exists(c)) {
        auto it = acc.find(c.p);
        if (it == acc.end())
          acc.emplace(c.p, pierce::BigDyadic::pow2(c.expo));
        else
          it->second += pierce::BigDyadic::pow2(c.expo);
      }
    std::vector<std::pair<Point, double>> out;
    for (auto& [p, w] : acc)
      out.push_back({p, pierce::BigDyadic::ratio(w, tot)});
    return out;
  }
};

// Acklam's inverse normal CDF approximation; adequate for test thresholds.
inline double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p <= phigh) {
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  q = std::sqrt(-2 * std::log(1 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
           c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
}

// Wilson-Hilferty upper-tail chi-square critical value.
inline double chi2_critical(int df, double significance) {
  double z = normal_quantile(1.0 - significance);
  double t = 2.0 / (9.0 * df);
  double v = 1.0 - t + z * std::sqrt(t);
  return df * v * v * v;
}

// Goodness of fit of observed counts against expected probabilities; bins
// with tiny expectation are pooled.  Returns true when the chi-square
// statistic is below the critical value at the given significance.
inline bool chi2_fits(const std::vector<std::int64_t>& observed,
                      const std::vector<double>& probs, double significance,
                      double* stat_out = nullptr) {
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  double stat = 0.0, pooled_exp = 0.0, pooled_obs = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = probs[i] * total;
    double o = static_cast<double>(observed[i]);
    if (e < 5.0) {
      pooled_exp += e;
      pooled_obs += o;
      if (pooled_exp >= 5.0) {
        stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) /
                pooled_exp;
        pooled_exp = pooled_obs = 0.0;
        ++df;
      }
      continue;
    }
    stat += (o - e) * (o - e) / e;
    ++df;
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++df;
  }
  if (stat_out) *stat_out = stat;
  if (df < 1) return true;
  return stat <= chi2_critical(df, significance);
}

}  // namespace testsup
