#include "doctest.h"
#include "pierce/multiround.hpp"
#include "support.hpp"

using namespace pierce;

TEST_CASE("multi_round_pierce: r=1 matches the inner solver") {
  Rng rng(9);
  auto inst = testsup::random_instance(rng, 2, 24);
  MultiRoundConfig cfg;
  cfg.rounds = 1;
  auto a = multi_round_pierce(inst, 42, cfg);
  auto b = improved_mwu(inst, Rng(42).fork("k", 2).fork("final").next_u64());
  CHECK(verify_piercing(inst, a.points).empty());
  CHECK(a.points == b.points);
}

TEST_CASE("multi_round_pierce: r=2 on random instances") {
  Rng rng(19);
  for (int trial = 0; trial < 6; ++trial) {
    int d = 2 + static_cast<int>(rng.next_below(2));
    int n = 30 + static_cast<int>(rng.next_below(120));
    auto inst = testsup::random_instance(rng, d, n);
    MultiRoundConfig cfg;
    cfg.rounds = 2;
    auto sol = multi_round_pierce(inst, 100 + trial, cfg);
    CHECK(verify_piercing(inst, sol.points).empty());
  }
}

TEST_CASE("multi_round_pierce: k >= n degenerates to a single round") {
  Rng rng(29);
  auto inst = testsup::random_instance(rng, 2, 8);
  MultiRoundConfig cfg;
  cfg.rounds = 3;
  auto sol = multi_round_pierce(inst, 5, cfg);
  CHECK(verify_piercing(inst, sol.points).empty());
}

TEST_CASE("two_round_2d: common-point instance stays tiny") {
  std::vector<Box> boxes;
  for (int i = 0; i < 150; ++i)
    boxes.push_back(Box{{-1 - i, -2 - i}, {5 + i, 3 + i}});
  auto inst = normalize_instance_int(boxes);
  auto sol = two_round_2d(inst, 77);
  CHECK(verify_piercing(inst, sol.points).empty());
  CHECK(sol.points.size() <= 12);
}

TEST_CASE("two_round_2d: small n solves directly") {
  Rng rng(31);
  auto inst = testsup::random_instance(rng, 2, 30);
  auto sol = two_round_2d(inst, 3);
  CHECK(verify_piercing(inst, sol.points).empty());
  CHECK(sol.stats.count("direct") == 1);
}

TEST_CASE("two_round_2d: planted instance, both rounds run") {
  Rng rng(41);
  // planted piercing set of ~20 cluster points, 3000 rectangles
  std::vector<Box> boxes;
  std::vector<Point> plants;
  for (int c = 0; c < 20; ++c)
    plants.push_back({rng.next_in(0, 100000), rng.next_in(0, 100000)});
  for (int i = 0; i < 3000; ++i) {
    const auto& p = plants[rng.next_below(plants.size())];
    Box b;
    b.lo = {p[0] - rng.next_in(1, 3000), p[1] - rng.next_in(1, 3000)};
    b.hi = {p[0] + rng.next_in(1, 3000), p[1] + rng.next_in(1, 3000)};
    boxes.push_back(b);
  }
  auto inst = normalize_instance_int(boxes);
  TwoRoundConfig cfg;
  auto sol = two_round_2d(inst, 123, cfg);
  CHECK(verify_piercing(inst, sol.points).empty());
  CHECK(sol.stats.count("direct") == 0);
  MESSAGE("two_round planted: size=", sol.points.size(),
          " residue=", sol.stats["residue"]);
}

TEST_CASE("residual_shrinkage_check") {
  Rng rng(51);
  auto inst = testsup::random_instance(rng, 2, 20);
  auto exact = exact_piercing(inst);
  REQUIRE(exact.has_value());
  auto rep = residual_shrinkage_check(inst, exact->points, 0.5);
  CHECK(rep.unpierced == 0);
  CHECK_FALSE(rep.violated);

  // adversarial: a solution missing one disjoint cluster
  std::vector<Box> boxes;
  for (int i = 0; i < 10; ++i)
    boxes.push_back(Box{{10 * i, 0}, {10 * i + 5, 5}});
  auto inst2 = normalize_instance_int(boxes);
  std::vector<Point> q = {inst2.boxes[0].lo};
  auto rep2 = residual_shrinkage_check(inst2, q, 0.5);
  CHECK(rep2.unpierced == 9);
  CHECK(rep2.violated);
}
