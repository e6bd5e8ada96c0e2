#include <algorithm>
#include <set>

#include "doctest.h"
#include "pierce/geometry.hpp"
#include "support.hpp"

using namespace pierce;

TEST_CASE("contains: closed box membership") {
  Box b{{0, 0}, {2, 2}};
  CHECK(contains(b, {1, 1}));
  CHECK(contains(b, {2, 0}));  // boundary corner, closed
  CHECK_FALSE(contains(b, {3, 1}));
}

TEST_CASE("normalize: 1D duplicate intervals get distinct even endpoints") {
  auto inst = normalize_instance_int({Box{{0}, {5}}, Box{{0}, {5}}});
  CHECK(inst.boxes[0] == Box{{0}, {4}});
  CHECK(inst.boxes[1] == Box{{2}, {6}});
  CHECK(inst.boxes[0].intersects(inst.boxes[1]));
}

TEST_CASE("normalize: single box") {
  auto inst = normalize_instance_int({Box{{1}, {2}}});
  CHECK(inst.boxes[0] == Box{{0}, {2}});
}

TEST_CASE("normalize: disjointness preserved in 2D") {
  auto inst =
      normalize_instance_int({Box{{0, 0}, {1, 1}}, Box{{2, 2}, {3, 3}}});
  CHECK_FALSE(inst.boxes[0].intersects(inst.boxes[1]));
}

TEST_CASE("normalize: intersection graph preserved (incl. ties/touching)") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + static_cast<int>(rng.next_below(3));
    int n = 2 + static_cast<int>(rng.next_below(10));
    // integer coordinates on a small grid force many ties and touching boxes
    std::vector<RawBox> raw(n);
    for (auto& b : raw) {
      b.lo.resize(d);
      b.hi.resize(d);
      for (int i = 0; i < d; ++i) {
        auto a = static_cast<double>(rng.next_below(8));
        auto c = static_cast<double>(rng.next_below(8));
        b.lo[i] = std::min(a, c);
        b.hi[i] = std::max(a, c);
      }
    }
    auto inst = normalize_instance(raw);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        bool raw_inter = true;
        for (int a = 0; a < d; ++a)
          if (raw[i].lo[a] > raw[j].hi[a] || raw[j].lo[a] > raw[i].hi[a])
            raw_inter = false;
        CHECK(inst.boxes[i].intersects(inst.boxes[j]) == raw_inter);
      }
    }
  }
}

TEST_CASE("normalize: errors") {
  CHECK_THROWS(normalize_instance({}));
  CHECK_THROWS(normalize_instance(
      {RawBox{{0.0}, {1.0}}, RawBox{{0.0, 0.0}, {1.0, 1.0}}}));
}

TEST_CASE("arrangement_vertices: single box gives its corners") {
  auto inst = normalize_instance_int({Box{{0, 0}, {2, 2}}});
  auto v = arrangement_vertices(inst);
  std::sort(v.begin(), v.end());
  std::vector<Point> want = {{0, 0}, {0, 2}, {2, 0}, {2, 2}};
  CHECK(v == want);
}

TEST_CASE("arrangement_vertices: two crossing rectangles") {
  auto inst = normalize_instance_int(
      {Box{{0, 2}, {4, 6}}, Box{{2, 0}, {6, 4}}});
  auto v = arrangement_vertices(inst);
  auto ref = testsup::vertices_bruteforce(inst);
  std::sort(v.begin(), v.end());
  CHECK(v == ref);
  // 8 corners plus the two crossings that lie inside both facets
  std::vector<Point> want = {{0, 2}, {0, 6}, {2, 0}, {2, 2}, {2, 4},
                             {4, 2}, {4, 4}, {4, 6}, {6, 0}, {6, 4}};
  CHECK(v == want);
}

TEST_CASE("arrangement_vertices: disjoint boxes give only corners") {
  auto inst =
      normalize_instance_int({Box{{0, 0}, {1, 1}}, Box{{5, 5}, {7, 7}}});
  auto v = arrangement_vertices(inst);
  CHECK(v.size() == 8);
}

TEST_CASE("arrangement_vertices matches independent oracle on random n<=6") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    int d = 1 + static_cast<int>(rng.next_below(3));
    int n = 1 + static_cast<int>(rng.next_below(6));
    auto inst = testsup::random_instance(rng, d, n);
    auto v = arrangement_vertices(inst);
    std::sort(v.begin(), v.end());
    CHECK(v == testsup::vertices_bruteforce(inst));
  }
}

TEST_CASE("arrangement_vertices: cap guard") {
  Rng rng(3);
  auto inst = testsup::random_instance(rng, 3, 20);
  CHECK_THROWS(arrangement_vertices(inst, 1000));
}

TEST_CASE("verify_piercing basics") {
  auto inst = normalize_instance_int({Box{{0}, {2}}});
  CHECK(verify_piercing(inst, {{1}}).empty());

  auto inst2 = normalize_instance_int({Box{{0}, {2}}, Box{{4}, {6}}});
  auto missed = verify_piercing(inst2, {{inst2.boxes[0].lo[0]}});
  REQUIRE(missed.size() == 1);
  CHECK(missed[0] == 1);
}

TEST_CASE("exact_piercing: 1D disjoint boxes need two points") {
  auto inst = normalize_instance_int({Box{{0}, {2}}, Box{{4}, {6}}});
  auto res = exact_piercing(inst);
  REQUIRE(res.has_value());
  CHECK(res->points.size() == 2);
  CHECK(verify_piercing(inst, res->points).empty());
}

TEST_CASE("exact_piercing: common point family has piercing number 1") {
  std::vector<Box> boxes;
  for (int i = 0; i < 6; ++i)
    boxes.push_back(Box{{-10 - i, -10 - i}, {10 + i, 10 + i}});
  auto inst = normalize_instance_int(boxes);
  auto res = exact_piercing(inst);
  REQUIRE(res.has_value());
  CHECK(res->points.size() == 1);
  CHECK(verify_piercing(inst, res->points).empty());
}

TEST_CASE("exact_piercing: 5x5 grid of disjoint unit squares") {
  std::vector<Box> boxes;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      boxes.push_back(Box{{3 * i, 3 * j}, {3 * i + 1, 3 * j + 1}});
  auto inst = normalize_instance_int(boxes);
  auto res = exact_piercing(inst);
  REQUIRE(res.has_value());
  CHECK(res->points.size() == 25);
  CHECK(verify_piercing(inst, res->points).empty());
}

TEST_CASE("exact_piercing: valid and >= independence bound on random 2D") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng.next_below(12));
    auto inst = testsup::random_instance(rng, 2, n);
    auto res = exact_piercing(inst);
    REQUIRE(res.has_value());
    CHECK(verify_piercing(inst, res->points).empty());

    // independence lower bound: any maximal pairwise-disjoint subset
    std::vector<int> indep;
    for (int i = 0; i < n; ++i) {
      bool ok = true;
      for (int j : indep)
        if (inst.boxes[i].intersects(inst.boxes[j])) ok = false;
      if (ok) indep.push_back(i);
    }
    CHECK(res->points.size() >= indep.size());
  }
}

TEST_CASE("denormalize: points map into original boxes") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + static_cast<int>(rng.next_below(3));
    int n = 2 + static_cast<int>(rng.next_below(8));
    std::vector<RawBox> raw;
    for (int i = 0; i < n; ++i) raw.push_back(testsup::random_raw_box(rng, d));
    auto inst = normalize_instance(raw);
    auto res = exact_piercing(inst);
    REQUIRE(res.has_value());
    std::vector<std::vector<double>> sol;
    for (const auto& p : res->points) sol.push_back(denormalize_point(inst, p));
    CHECK(verify_piercing_raw(raw, sol).empty());

    // odd (between-ranks) coordinates must also denormalize consistently:
    // normalized containment implies raw containment
    for (int k = 0; k < 20; ++k) {
      Point q(d);
      for (int a = 0; a < d; ++a) q[a] = rng.next_in(-1, 4 * n);
      auto qd = denormalize_point(inst, q);
      for (int i = 0; i < n; ++i)
        if (inst.boxes[i].contains(q)) CHECK(raw[i].contains(qd));
    }
  }
}
