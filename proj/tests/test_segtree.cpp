#include <vector>

#include "doctest.h"
#include "pierce/segtree.hpp"
#include "support.hpp"

using namespace pierce;
using testsup::NaiveSegTree;

namespace {

std::vector<Coord> make_universe(int m) {
  std::vector<Coord> c;
  for (int i = 0; i < m; ++i) c.push_back(2 * i);
  return c;
}

}  // namespace

TEST_CASE("segtree: build starts inactive with zero weight") {
  LazySegTree<FloatDyadic> t(make_universe(4));
  CHECK(t.total().is_zero());
  for (Coord c : t.coords()) t.activate(c);
  CHECK(t.total().to_double() == doctest::Approx(4.0));
  CHECK(t.active_count() == 4);
}

TEST_CASE("segtree: doubles on intervals") {
  LazySegTree<FloatDyadic> t({1, 5});
  t.activate(1);
  t.activate(5);
  t.range_double(0, 10);
  CHECK(t.total().to_double() == doctest::Approx(4.0));
  CHECK(t.point_weight(1).to_double() == doctest::Approx(2.0));

  LazySegTree<FloatDyadic> t2({1, 5});
  t2.activate(1);
  t2.activate(5);
  t2.range_double(0, 3);
  CHECK(t2.point_weight(1).to_double() == doctest::Approx(2.0));
  CHECK(t2.point_weight(5).to_double() == doctest::Approx(1.0));
  CHECK(t2.total().to_double() == doctest::Approx(3.0));
}

TEST_CASE("segtree: insert after covering double sees the exponent") {
  LazySegTree<FloatDyadic> t(make_universe(8));
  t.range_double(0, 14);
  t.range_double(4, 8);
  t.activate(6);
  CHECK(t.point_weight(6).to_double() == doctest::Approx(4.0));
  t.deactivate(6);
  CHECK(t.total().is_zero());
  t.activate(6);
  CHECK(t.point_weight(6).to_double() == doctest::Approx(4.0));
}

TEST_CASE("segtree: differential against naive reference (big-int mode)") {
  Rng rng(42);
  for (int script = 0; script < 40; ++script) {
    int m = 1 + static_cast<int>(rng.next_below(64));
    auto coords = make_universe(m);
    LazySegTree<BigDyadic> t(coords);
    NaiveSegTree ref(coords);
    int ops = 200 + static_cast<int>(rng.next_below(800));
    for (int op = 0; op < ops; ++op) {
      Coord a = rng.next_in(-2, 2 * m);
      Coord b = rng.next_in(-2, 2 * m);
      if (a > b) std::swap(a, b);
      switch (rng.next_below(6)) {
        case 0: {
          t.range_double(a, b);
          ref.range_shift(a, b, +1);
          break;
        }
        case 1: {
          t.range_halve(a, b);
          ref.range_shift(a, b, -1);
          break;
        }
        case 2: {
          Coord c = coords[rng.next_below(m)];
          if (ref.active[ref.find(c)] == 0) {
            t.activate(c);
            ref.activate(c);
          }
          break;
        }
        case 3: {
          Coord c = coords[rng.next_below(m)];
          if (ref.active[ref.find(c)] > 0) {
            t.deactivate(c);
            ref.deactivate(c);
          }
          break;
        }
        default: {
          CHECK(t.range_weight(a, b) == ref.range_weight(a, b));
          break;
        }
      }
    }
    CHECK(t.total() == ref.total());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      CHECK(t.point_exponent(coords[i]) == ref.expo[i]);
      CHECK(t.point_weight(coords[i]) ==
            (ref.active[i] ? BigDyadic::pow2(ref.expo[i]) : BigDyadic::zero()));
    }
    CHECK(t.audit_lazy_consistency());
  }
}

TEST_CASE("segtree: sample matches exact distribution") {
  Rng rng(123);

  SUBCASE("single active point") {
    LazySegTree<FloatDyadic> t({0, 2, 4});
    t.activate(2);
    for (int i = 0; i < 100; ++i) CHECK(t.sample(rng) == 2);
  }

  SUBCASE("weights 2:1") {
    LazySegTree<FloatDyadic> t({0, 2});
    t.activate(0);
    t.activate(2);
    t.range_double(0, 0);
    std::int64_t hits = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
      if (t.sample(rng) == 0) ++hits;
    double p = 2.0 / 3.0;
    double sigma = std::sqrt(draws * p * (1 - p));
    CHECK(std::abs(hits - draws * p) < 3 * sigma + 1);
  }

  SUBCASE("random weights, chi-square at 1e-3") {
    auto coords = make_universe(16);
    LazySegTree<FloatDyadic> t(coords);
    NaiveSegTree ref(coords);
    for (Coord c : coords) {
      t.activate(c);
      ref.activate(c);
    }
    for (int i = 0; i < 30; ++i) {
      Coord a = rng.next_in(0, 30), b = rng.next_in(0, 30);
      if (a > b) std::swap(a, b);
      t.range_double(a, b);
      ref.range_shift(a, b, +1);
    }
    std::vector<std::int64_t> observed(coords.size(), 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      Coord c = t.sample(rng);
      observed[static_cast<std::size_t>(c / 2)]++;
    }
    CHECK(testsup::chi2_fits(observed, ref.probabilities(), 1e-3));
  }

  SUBCASE("uniform weights are uniform") {
    auto coords = make_universe(10);
    LazySegTree<FloatDyadic> t(coords);
    for (Coord c : coords) t.activate(c);
    std::vector<std::int64_t> observed(coords.size(), 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) observed[t.sample(rng) / 2]++;
    std::vector<double> uniform(coords.size(), 1.0 / coords.size());
    CHECK(testsup::chi2_fits(observed, uniform, 1e-3));
  }
}

TEST_CASE("segtree: sample_in restricts to range") {
  Rng rng(77);
  auto coords = make_universe(12);
  LazySegTree<FloatDyadic> t(coords);
  for (Coord c : coords) t.activate(c);
  t.range_double(4, 10);
  for (int i = 0; i < 2000; ++i) {
    Coord c = t.sample_in(6, 16, rng);
    CHECK(c >= 6);
    CHECK(c <= 16);
  }
  CHECK_THROWS(t.sample_in(1, 1, rng));
}

TEST_CASE("segtree: errors") {
  Rng rng(1);
  LazySegTree<FloatDyadic> t(make_universe(4));
  CHECK_THROWS(t.sample(rng));  // zero total
  CHECK_THROWS(t.activate(3));  // outside universe
  t.activate(2);
  t.deactivate(2);
  CHECK_THROWS(t.deactivate(2));  // already inactive
}
