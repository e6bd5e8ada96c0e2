#include "pierce/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "pierce/rng.hpp"

namespace pierce {

namespace {

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

RawBox box_around(const std::vector<double>& center, Rng& rng, double max_ext) {
  RawBox b;
  const int d = static_cast<int>(center.size());
  b.lo.resize(d);
  b.hi.resize(d);
  for (int i = 0; i < d; ++i) {
    b.lo[i] = center[i] - (rng.next_double() * max_ext + 0.01);
    b.hi[i] = center[i] + (rng.next_double() * max_ext + 0.01);
  }
  return b;
}

}  // namespace

std::vector<std::string> generator_kinds() {
  return {"uniform-random", "planted-piercing", "disjoint-grid",
          "nested",         "squares-uniform",  "adversarial-crate"};
}

GeneratedInstance generate_instance(
    const std::string& kind, int n, int d, std::uint64_t seed,
    const std::map<std::string, double>& params) {
  if (n < 1 || d < 1) throw std::invalid_argument("generate: bad n or d");
  Rng rng(seed);
  GeneratedInstance out;
  const double span = param_or(params, "span", 1000.0);

  if (kind == "uniform-random") {
    double max_side = param_or(params, "max_side", span * 0.25);
    for (int i = 0; i < n; ++i) {
      RawBox b;
      b.lo.resize(d);
      b.hi.resize(d);
      for (int a = 0; a < d; ++a) {
        double lo = rng.next_double() * span;
        b.lo[a] = lo;
        b.hi[a] = lo + rng.next_double() * max_side + 0.01;
      }
      out.boxes.push_back(std::move(b));
    }
    return out;
  }

  if (kind == "planted-piercing") {
    int k = static_cast<int>(param_or(params, "k", 10));
    if (k < 1) throw std::invalid_argument("planted-piercing: k < 1");
    std::vector<std::vector<double>> plants;
    for (int c = 0; c < k; ++c) {
      std::vector<double> p(d);
      for (int a = 0; a < d; ++a) p[a] = rng.next_double() * span;
      plants.push_back(std::move(p));
    }
    double max_ext = param_or(params, "max_ext", span / (2.0 * std::cbrt(k)));
    for (int i = 0; i < n; ++i)
      out.boxes.push_back(
          box_around(plants[rng.next_below(plants.size())], rng, max_ext));
    out.metadata["p_upper"] = k;
    return out;
  }

  if (kind == "disjoint-grid") {
    int k = static_cast<int>(param_or(
        params, "k",
        std::max(1.0, std::round(std::pow(static_cast<double>(n), 1.0 / d)))));
    out.boxes.clear();
    std::vector<int> idx(d, 0);
    for (;;) {
      RawBox b;
      b.lo.resize(d);
      b.hi.resize(d);
      for (int a = 0; a < d; ++a) {
        b.lo[a] = 3.0 * idx[a];
        b.hi[a] = 3.0 * idx[a] + 1.0;
      }
      out.boxes.push_back(std::move(b));
      int a = d - 1;
      while (a >= 0 && ++idx[a] == k) {
        idx[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
    out.metadata["p_exact"] = std::pow(static_cast<double>(k), d);
    return out;
  }

  if (kind == "nested") {
    for (int i = 0; i < n; ++i) {
      RawBox b;
      b.lo.assign(d, -1.0 - i - rng.next_double());
      b.hi.assign(d, 1.0 + i + rng.next_double());
      out.boxes.push_back(std::move(b));
    }
    out.metadata["p_exact"] = 1;
    return out;
  }

  if (kind == "squares-uniform") {
    if (d != 2) throw std::invalid_argument("squares-uniform: d must be 2");
    double max_r = param_or(params, "max_radius", span * 0.1);
    for (int i = 0; i < n; ++i) {
      double cx = rng.next_double() * span;
      double cy = rng.next_double() * span;
      double r = rng.next_double() * max_r + 0.01;
      RawBox b;
      b.lo = {cx - r, cy - r};
      b.hi = {cx + r, cy + r};
      out.boxes.push_back(std::move(b));
    }
    return out;
  }

  if (kind == "adversarial-crate") {
    // product staircase: n/2 points blocking on the first coordinate pair,
    // n/2 on the second, yielding >= (n/2)^2 empty corner boxes
    if (d != 4) throw std::invalid_argument("adversarial-crate: d must be 4");
    int m = std::max(1, n / 2);
    auto tiny = [&](double x1, double x2, double x3, double x4) {
      RawBox b;
      b.lo = {x1 - 0.25, x2 - 0.25, x3 - 0.25, x4 - 0.25};
      b.hi = {x1 + 0.25, x2 + 0.25, x3 + 0.25, x4 + 0.25};
      return b;
    };
    for (int i = 1; i <= m; ++i)
      out.boxes.push_back(tiny(i + 1, m + 2 - i, 1, 1));
    for (int j = 1; j <= m; ++j)
      out.boxes.push_back(tiny(1, 1, j + 1, m + 2 - j));
    out.metadata["staircase_m"] = m;
    return out;
  }

  throw std::invalid_argument("generate: unknown kind '" + kind + "'");
}

}  // namespace pierce
