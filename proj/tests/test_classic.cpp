#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pierce/classic.hpp"
#include "support.hpp"

using namespace pierce;

namespace {

bool pierces_all(const std::vector<Box>& boxes,
                 const std::vector<Point>& pts) {
  for (const auto& b : boxes) {
    bool hit = false;
    for (const auto& p : pts)
      if (b.contains(p)) hit = true;
    if (!hit) return false;
  }
  return true;
}

bool pairwise_disjoint(const std::vector<Box>& boxes,
                       const std::vector<int>& idx) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (boxes[idx[i]].intersects(boxes[idx[j]])) return false;
  return true;
}

// exhaustive optimal interval piercing over endpoint subsets
std::size_t brute_pierce_1d(const std::vector<Box>& iv) {
  std::vector<Coord> cand;
  for (const auto& b : iv) {
    cand.push_back(b.lo[0]);
    cand.push_back(b.hi[0]);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (std::size_t k = 1; k <= iv.size(); ++k) {
    std::vector<std::size_t> pick(k, 0);
    auto advance = [&]() {
      std::size_t i = k;
      while (i-- > 0) {
        if (++pick[i] <= cand.size() - (k - i)) {
          for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    do {
      bool all = true;
      for (const auto& b : iv) {
        bool hit = false;
        for (auto pi : pick)
          if (b.lo[0] <= cand[pi] && cand[pi] <= b.hi[0]) hit = true;
        if (!hit) {
          all = false;
          break;
        }
      }
      if (all) return k;
    } while (advance());
  }
  return iv.size();
}

std::size_t brute_mis_1d(const std::vector<Box>& iv) {
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (1ull << iv.size()); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < iv.size() && ok; ++i)
      for (std::size_t j = i + 1; j < iv.size() && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) &&
            iv[i].intersects(iv[j]))
          ok = false;
    if (ok) best = std::max(best, static_cast<std::size_t>(
                                      __builtin_popcountll(mask)));
  }
  return best;
}

}  // namespace

TEST_CASE("greedy interval pierce examples") {
  std::vector<Box> iv = {Box{{0}, {2}}, Box{{1}, {3}}, Box{{4}, {5}}};
  auto pts = greedy_interval_pierce(iv);
  CHECK(pts.size() == 2);
  CHECK(pts[0][0] == 2);
  CHECK(pts[1][0] == 5);

  std::vector<Box> nested = {Box{{0}, {10}}, Box{{1}, {9}}, Box{{2}, {8}}};
  CHECK(greedy_interval_pierce(nested).size() == 1);

  std::vector<Box> disjoint;
  for (int i = 0; i < 7; ++i) disjoint.push_back(Box{{10 * i}, {10 * i + 3}});
  CHECK(greedy_interval_pierce(disjoint).size() == 7);
}

TEST_CASE("greedy interval independent examples") {
  std::vector<Box> iv = {Box{{0}, {2}}, Box{{1}, {3}}, Box{{4}, {5}}};
  auto got = greedy_interval_independent(iv);
  CHECK(got == std::vector<int>{0, 2});

  std::vector<Box> common = {Box{{0}, {10}}, Box{{5}, {15}}, Box{{9}, {12}}};
  CHECK(greedy_interval_independent(common).size() == 1);

  std::vector<Box> disjoint;
  for (int i = 0; i < 5; ++i) disjoint.push_back(Box{{10 * i}, {10 * i + 3}});
  CHECK(greedy_interval_independent(disjoint).size() == 5);
}

TEST_CASE("1D routines are exact on random instances") {
  Rng rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(11));
    auto inst = testsup::random_instance(rng, 1, n);
    auto pts = greedy_interval_pierce(inst.boxes);
    CHECK(pierces_all(inst.boxes, pts));
    CHECK(pts.size() == brute_pierce_1d(inst.boxes));
    auto mis = greedy_interval_independent(inst.boxes);
    CHECK(pairwise_disjoint(inst.boxes, mis));
    CHECK(mis.size() == brute_mis_1d(inst.boxes));
  }
}

TEST_CASE("dnc_pierce: 1D base case equals greedy") {
  Rng rng(61);
  auto inst = testsup::random_instance(rng, 1, 9);
  CHECK(dnc_pierce(inst.boxes).size() ==
        greedy_interval_pierce(inst.boxes).size());
}

TEST_CASE("dnc_pierce: disjoint grid is pierced with exactly k^2 points") {
  for (int k : {2, 4}) {
    std::vector<Box> boxes;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        boxes.push_back(Box{{4 * i, 4 * j}, {4 * i + 2, 4 * j + 2}});
    auto inst = normalize_instance_int(boxes);
    auto pts = dnc_pierce(inst.boxes);
    CHECK(pierces_all(inst.boxes, pts));
    CHECK(pts.size() == static_cast<std::size_t>(k * k));
  }
}

TEST_CASE("dnc_pierce: within log factor of optimum on random 2D/3D") {
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    int d = 2 + static_cast<int>(rng.next_below(2));
    int n = 6 + static_cast<int>(rng.next_below(25));
    auto inst = testsup::random_instance(rng, d, n);
    auto pts = dnc_pierce(inst.boxes);
    CHECK(pierces_all(inst.boxes, pts));
    auto exact = exact_piercing(inst);
    REQUIRE(exact.has_value());
    double lg = std::floor(std::log2(static_cast<double>(n))) + 1;
    CHECK(static_cast<double>(pts.size()) <=
          static_cast<double>(exact->points.size()) * std::pow(lg, d - 1));
  }
}

TEST_CASE("dnc_independent: validity and size") {
  SUBCASE("grid squares") {
    for (int k : {3, 4}) {
      std::vector<Box> boxes;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          boxes.push_back(Box{{4 * i, 4 * j}, {4 * i + 2, 4 * j + 2}});
      auto inst = normalize_instance_int(boxes);
      auto mis = dnc_independent(inst.boxes);
      CHECK(pairwise_disjoint(inst.boxes, mis));
      int n = k * k;
      auto bound = static_cast<std::size_t>(
          std::ceil(n / (std::floor(std::log2(n)) + 1)));
      CHECK(mis.size() >= bound);
    }
  }
  SUBCASE("common point means size one") {
    std::vector<Box> boxes;
    for (int i = 0; i < 6; ++i)
      boxes.push_back(Box{{-2 - i, -3 - i}, {4 + i, 5 + i}});
    auto inst = normalize_instance_int(boxes);
    auto mis = dnc_independent(inst.boxes);
    CHECK(mis.size() == 1);
  }
  SUBCASE("random instances: disjoint and duality sandwich") {
    Rng rng(81);
    for (int trial = 0; trial < 25; ++trial) {
      int d = 2 + static_cast<int>(rng.next_below(2));
      int n = 5 + static_cast<int>(rng.next_below(20));
      auto inst = testsup::random_instance(rng, d, n);
      auto mis = dnc_independent(inst.boxes);
      CHECK(pairwise_disjoint(inst.boxes, mis));
      auto exact = exact_piercing(inst);
      REQUIRE(exact.has_value());
      auto pts = dnc_pierce(inst.boxes);
      CHECK(mis.size() <= exact->points.size());
      CHECK(exact->points.size() <= pts.size());
    }
  }
}
