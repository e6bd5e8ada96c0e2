#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pierce {

using Coord = std::int64_t;
using Point = std::vector<Coord>;

// Axis-aligned closed box, one [lo[i], hi[i]] interval per axis.  After
// normalization all endpoint coordinates are distinct even integers.
struct Box {
  std::vector<Coord> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Point& p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }

  bool intersects(const Box& o) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > o.hi[i] || o.lo[i] > hi[i]) return false;
    return true;
  }

  bool contains_box(const Box& o) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (o.lo[i] < lo[i] || o.hi[i] > hi[i]) return false;
    return true;
  }

  bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
};

inline bool contains(const Box& b, const Point& p) { return b.contains(p); }

// Input box with arbitrary finite real coordinates, prior to normalization.
struct RawBox {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const std::vector<double>& p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

// Normalized instance: per axis, the 2n endpoint ranks are mapped onto the
// even integers 0,2,...,4n-2; coord_values keeps the original value of each
// rank so solutions can be mapped back.
struct ProblemInstance {
  int dimension = 0;
  std::vector<Box> boxes;
  std::vector<std::vector<double>> coord_values;  // [axis][rank]

  int n() const { return static_cast<int>(boxes.size()); }
};

// Rank normalization.  Ties are broken by (value, lo-before-hi, box index),
// which keeps the closed-box intersection graph intact even for touching or
// degenerate inputs.  Throws std::invalid_argument on empty/inconsistent
// input.
ProblemInstance normalize_instance(const std::vector<RawBox>& raw);

// Convenience for integer-coordinate inputs (tests, generators).
ProblemInstance normalize_instance_int(const std::vector<Box>& boxes);

// Maps a normalized point back to original coordinates.  Even coordinates
// map to the exact original endpoint value; odd coordinates map strictly
// between the neighbouring ranks (midpoint).
std::vector<double> denormalize_point(const ProblemInstance& inst,
                                      const Point& p);

// Boxes of `inst` containing no point of `sol` (indices).  Empty result
// means `sol` is a piercing set.
std::vector<int> verify_piercing(const ProblemInstance& inst,
                                 const std::vector<Point>& sol);
std::vector<int> verify_piercing_raw(const std::vector<RawBox>& boxes,
                                     const std::vector<std::vector<double>>& sol);

// Bounding box of the instance expanded by one unit per side (odd bounds,
// so no facet lies on it).
Box instance_hull(const ProblemInstance& inst);

// All vertices of the arrangement A(B): points formed by d facet hyperplanes,
// one per axis, each containing the point within its (closed) facet.
// Intended as an oracle; refuses when the (2n)^d candidate grid exceeds
// `candidate_cap`.
std::vector<Point> arrangement_vertices(const ProblemInstance& inst,
                                        std::int64_t candidate_cap = 20'000'000);

struct ExactPiercingResult {
  std::vector<Point> points;
  std::int64_t nodes_explored = 0;
};

// Optimal piercing set by branch and bound over the arrangement vertices.
// Refuses (nullopt) when n > max_n, |V| > max_vertices, or the search
// exceeds node_cap nodes.
std::optional<ExactPiercingResult> exact_piercing(
    const ProblemInstance& inst, int max_n = 40, std::int64_t max_vertices = 5000,
    std::int64_t node_cap = 20'000'000);

}  // namespace pierce
