#include <algorithm>
#include <map>

#include "doctest.h"
#include "pierce/range_tree.hpp"
#include "support.hpp"

using namespace pierce;
using RT = RangeTree<Coord>;

namespace {

RT::Pt random_point(Rng& rng, int d, Coord span) {
  RT::Pt p(d);
  for (int i = 0; i < d; ++i) p[i] = rng.next_in(0, span);
  return p;
}

RT::Query random_query(Rng& rng, int d, Coord span) {
  RT::Query q(d);
  for (int i = 0; i < d; ++i) {
    Coord a = rng.next_in(0, span), b = rng.next_in(0, span);
    if (a > b) std::swap(a, b);
    q[i] = {a, b, rng.next_bool(0.25), rng.next_bool(0.25)};
  }
  return q;
}

std::int64_t brute_count(const std::vector<RT::Pt>& pts, const RT::Query& q) {
  std::int64_t c = 0;
  for (const auto& p : pts) {
    bool in = true;
    for (std::size_t i = 0; i < q.size() && in; ++i) {
      if (q[i].lo_strict ? p[i] <= q[i].lo : p[i] < q[i].lo) in = false;
      if (q[i].hi_strict ? p[i] >= q[i].hi : p[i] > q[i].hi) in = false;
    }
    if (in) ++c;
  }
  return c;
}

}  // namespace

TEST_CASE("range tree: empty") {
  RT t(2);
  CHECK(t.count(RT::query_of_box({0, 0}, {100, 100})) == 0);
  CHECK(t.canonical(RT::query_of_box({0, 0}, {100, 100})).empty());
}

TEST_CASE("range tree: static counts match brute force") {
  Rng rng(17);
  for (int d : {1, 2, 3, 4}) {
    std::vector<RT::Pt> pts;
    for (int i = 0; i < 60; ++i) pts.push_back(random_point(rng, d, 30));
    RT t(d, pts);
    for (int k = 0; k < 100; ++k) {
      auto q = random_query(rng, d, 30);
      CHECK(t.count(q) == brute_count(pts, q));
    }
  }
}

TEST_CASE("range tree: duplicates counted with multiplicity") {
  RT t(2);
  for (int i = 0; i < 3; ++i) t.insert({5, 5});
  CHECK(t.count(RT::query_of_box({0, 0}, {10, 10})) == 3);
  t.erase({5, 5});
  CHECK(t.count(RT::query_of_box({0, 0}, {10, 10})) == 2);
}

TEST_CASE("range tree: canonical subsets are disjoint and exact") {
  Rng rng(29);
  for (int d : {1, 2, 4}) {
    std::vector<RT::Pt> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(random_point(rng, d, 20));
    RT t(d, pts);
    for (int k = 0; k < 50; ++k) {
      auto q = random_query(rng, d, 20);
      auto ids = t.canonical(q);
      std::vector<RT::Pt> uni;
      std::int64_t total = 0;
      for (int id : ids) {
        total += t.node_size(id);
        t.node_points(id, uni);
      }
      CHECK(total == brute_count(pts, q));
      CHECK(static_cast<std::int64_t>(uni.size()) == total);
      std::vector<RT::Pt> expect;
      for (const auto& p : pts)
        if (brute_count({p}, q) == 1) expect.push_back(p);
      std::sort(uni.begin(), uni.end());
      std::sort(expect.begin(), expect.end());
      CHECK(uni == expect);
    }
  }
}

TEST_CASE("range tree: 1D full-range decomposition is logarithmic") {
  std::vector<RT::Pt> pts;
  for (int i = 0; i < 256; ++i) pts.push_back({i});
  RT t(1, pts);
  auto ids = t.canonical(RT::query_of_box({0}, {255}));
  CHECK(ids.size() <= 2 * 9);
}

TEST_CASE("range tree: insert/delete round trip restores counts") {
  Rng rng(31);
  std::vector<RT::Pt> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(random_point(rng, 3, 25));
  RT t(3, pts);
  auto q = RT::query_of_box({0, 0, 0}, {25, 25, 25});
  auto before = t.count(q);
  RT::Pt p = {7, 7, 7};
  t.insert(p);
  CHECK(t.count(q) == before + 1);
  t.erase(p);
  CHECK(t.count(q) == before);
}

TEST_CASE("range tree: 1000 mixed updates track brute force") {
  Rng rng(37);
  for (int d : {2, 4}) {
    RT t(d);
    std::vector<RT::Pt> shadow;
    for (int op = 0; op < 1000; ++op) {
      double roll = rng.next_double();
      if (roll < 0.55 || shadow.empty()) {
        auto p = random_point(rng, d, 15);
        t.insert(p);
        shadow.push_back(p);
      } else {
        auto idx = rng.next_below(shadow.size());
        t.erase(shadow[idx]);
        shadow.erase(shadow.begin() + static_cast<std::ptrdiff_t>(idx));
      }
      if (op % 7 == 0) {
        auto q = random_query(rng, d, 15);
        CHECK(t.count(q) == brute_count(shadow, q));
      }
      CHECK(t.size() == static_cast<std::int64_t>(shadow.size()));
    }
  }
}

TEST_CASE("range tree: delete of absent point errors") {
  RT t(2);
  t.insert({1, 2});
  CHECK_THROWS(t.erase({3, 4}));
  t.erase({1, 2});
  CHECK_THROWS(t.erase({1, 2}));
}

TEST_CASE("range tree: strictness flags give half-open semantics") {
  RT t(1, {{5}, {6}, {7}});
  RT::Query q(1);
  q[0] = {5, 7, true, true};
  CHECK(t.count(q) == 1);
  q[0] = {5, 7, false, true};
  CHECK(t.count(q) == 2);
  q[0] = {5, 7, false, false};
  CHECK(t.count(q) == 3);
}
