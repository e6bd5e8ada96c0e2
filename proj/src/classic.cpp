#include "pierce/classic.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>

namespace pierce {

std::vector<Point> greedy_interval_pierce(const std::vector<Box>& intervals) {
  std::vector<int> order(intervals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return intervals[a].hi[0] < intervals[b].hi[0];
  });
  std::vector<Point> points;
  bool have_last = false;
  Coord last = 0;
  for (int i : order) {
    if (have_last && intervals[i].lo[0] <= last) continue;
    last = intervals[i].hi[0];
    have_last = true;
    points.push_back({last});
  }
  return points;
}

std::vector<int> greedy_interval_independent(
    const std::vector<Box>& intervals) {
  std::vector<int> order(intervals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return intervals[a].hi[0] < intervals[b].hi[0];
  });
  std::vector<int> chosen;
  bool have_last = false;
  Coord last = 0;
  for (int i : order) {
    if (have_last && intervals[i].lo[0] <= last) continue;
    last = intervals[i].hi[0];
    have_last = true;
    chosen.push_back(i);
  }
  return chosen;
}

namespace {

Box project_tail(const Box& b) {
  Box r;
  r.lo.assign(b.lo.begin() + 1, b.lo.end());
  r.hi.assign(b.hi.begin() + 1, b.hi.end());
  return r;
}

// odd coordinate next to the median endpoint on the first axis
Coord median_cut(const std::vector<Box>& boxes,
                 const std::vector<int>& subset) {
  std::vector<Coord> eps;
  eps.reserve(2 * subset.size());
  for (int i : subset) {
    eps.push_back(boxes[i].lo[0]);
    eps.push_back(boxes[i].hi[0]);
  }
  std::sort(eps.begin(), eps.end());
  return eps[eps.size() / 2 - 1] + 1;
}

void dnc_pierce_rec(const std::vector<Box>& boxes,
                    const std::vector<int>& subset, std::vector<Point>& out) {
  if (subset.empty()) return;
  const int d = boxes[subset[0]].dim();
  if (d == 1) {
    std::vector<Box> iv;
    iv.reserve(subset.size());
    for (int i : subset) iv.push_back(boxes[i]);
    for (auto& p : greedy_interval_pierce(iv)) out.push_back(p);
    return;
  }
  Coord m = median_cut(boxes, subset);
  std::vector<int> left, right;
  std::vector<Box> crossing;
  for (int i : subset) {
    if (boxes[i].hi[0] < m)
      left.push_back(i);
    else if (boxes[i].lo[0] > m)
      right.push_back(i);
    else
      crossing.push_back(project_tail(boxes[i]));
  }
  if (!crossing.empty()) {
    for (auto& q : dnc_pierce(crossing)) {
      Point p;
      p.reserve(d);
      p.push_back(m);
      p.insert(p.end(), q.begin(), q.end());
      out.push_back(std::move(p));
    }
  }
  dnc_pierce_rec(boxes, left, out);
  dnc_pierce_rec(boxes, right, out);
}

void dnc_indep_rec(const std::vector<Box>& boxes,
                   const std::vector<int>& subset, int depth,
                   std::map<int, std::vector<int>>& groups) {
  if (subset.empty()) return;
  const int d = boxes[subset[0]].dim();
  assert(d >= 2);
  Coord m = median_cut(boxes, subset);
  std::vector<int> left, right, crossing;
  for (int i : subset) {
    if (boxes[i].hi[0] < m)
      left.push_back(i);
    else if (boxes[i].lo[0] > m)
      right.push_back(i);
    else
      crossing.push_back(i);
  }
  if (!crossing.empty()) {
    std::vector<Box> proj;
    proj.reserve(crossing.size());
    for (int i : crossing) proj.push_back(project_tail(boxes[i]));
    std::vector<int> chosen =
        d == 2 ? greedy_interval_independent(proj) : dnc_independent(proj);
    for (int c : chosen) groups[depth].push_back(crossing[c]);
  }
  dnc_indep_rec(boxes, left, depth + 1, groups);
  dnc_indep_rec(boxes, right, depth + 1, groups);
}

}  // namespace

std::vector<Point> dnc_pierce(const std::vector<Box>& boxes) {
  std::vector<int> all(boxes.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<Point> out;
  dnc_pierce_rec(boxes, all, out);
  return out;
}

std::vector<int> dnc_independent(const std::vector<Box>& boxes) {
  if (boxes.empty()) return {};
  if (boxes[0].dim() == 1) return greedy_interval_independent(boxes);
  std::vector<int> all(boxes.size());
  std::iota(all.begin(), all.end(), 0);
  std::map<int, std::vector<int>> groups;
  dnc_indep_rec(boxes, all, 0, groups);
  std::vector<int> best;
  for (auto& [depth, g] : groups)
    if (g.size() > best.size()) best = g;
  return best;
}

}  // namespace pierce
