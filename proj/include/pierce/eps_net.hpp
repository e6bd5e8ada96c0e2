#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/range_tree.hpp"
#include "pierce/rng.hpp"

namespace pierce {

// Weak eps-net constructions: reduce the point set to a sample Q of size
// rho = 2^h, map it onto the integer grid by per-axis ranks, and pierce every
// heavy box through a witness grid cell and a canonical corner-anchored crate
// (or the cell corners themselves, for massive cells in the weak variant).

struct NetConfig {
  double alpha = 32.0;    // rho = next pow2 >= alpha * (1/eps) * log2(1/eps)
  double beta = 0.5;      // second-sample multiplier; crate fixups do the rest
  bool strong = true;     // net points drawn from the sample (default d <= 3)
  int pierce_alpha = 6;   // first-phase multiplier in pierce_heavy_family
};

std::int64_t reduce_sample_size(double eps, double alpha);

// rho i.i.d. weight-proportional draws (with repetition).
std::vector<Point> sample_reduce(const std::function<Point()>& sampler,
                                 double eps, double alpha);
std::vector<Point> sample_reduce(const std::vector<Point>& pts,
                                 const std::vector<double>& weights,
                                 double eps, double alpha, Rng& rng);

struct GridContext {
  int dim = 0;
  int h = 0;
  std::int64_t rho = 0;               // 2^h
  std::vector<Point> sample;          // Q, instance space
  std::vector<Point> gridded;         // X, rank space: coords in [1, rho]
  std::vector<std::vector<Coord>> rank_value;  // [axis][rank-1] -> coordinate
};

// Per-axis rank map with (value, index) tie-breaking; |sample| must be 2^h.
GridContext gridify(std::vector<Point> sample);

// Largest integral-corner grid box whose sample membership equals b's:
// [#(values < lo)+1, #(values <= hi)] per axis (may be empty).
Box grid_image(const GridContext& g, const Box& b);

// Grid point (coords in [0, rho]) back to instance space.
Point grid_to_instance(const GridContext& g, const Point& p);

// Rectangles each holding exactly k points of X such that any axis rectangle
// holding >= 4k points fully contains one of them (rank coordinates).
std::vector<Box> canonical_rects_2d(const std::vector<Point>& X,
                                    std::int64_t k);

struct Witness {
  Box cell;                    // dyadic grid cell
  std::int64_t kept = 0;       // |b ∩ cell ∩ X|
  std::int64_t box_count = 0;  // |b ∩ X|
};

// Constructive halving walk of the witness lemma; `b` lives in [0, 2^h]^d.
Witness find_witness(const RangeTree<Coord>& xtree, const Box& b, int h);

struct Crate {
  Box box;
  int corner_mask = 0;  // bit m set: anchored at cell.hi on axis m
  std::int64_t interior_count = 0;
};

// All maximal corner-anchored boxes of `cell` with at most k interior points,
// over all 2^d corners, deduplicated.
std::vector<Crate> enumerate_kcrates(const std::vector<Point>& cell_points,
                                     const Box& cell, std::int64_t k);

// Two-phase piercing of a family of heavy boxes (rank space): a random first
// sample, then one fixup point per unpierced member.  The strengthened mode
// tops every member up to Omega(log log 1/eps) net points.
std::vector<Point> pierce_heavy_family(const std::vector<Point>& X,
                                       const std::vector<Box>& family,
                                       double eps, bool strengthened,
                                       const NetConfig& cfg, Rng& rng,
                                       double* size_constant = nullptr);

struct WeakNetResult {
  std::vector<Point> net;  // instance space
  bool ok = true;          // false when the sample missed a heavy box
  std::vector<int> failed_boxes;
  std::map<std::string, double> stats;
};

// Net piercing every box of `heavy` (instance space), all of which are
// assumed eps-heavy for the sampled distribution.  Pipeline: sample ->
// gridify -> second sample -> witness/crate fixups with crate deduplication.
WeakNetResult weak_net_for_boxes(const std::function<Point()>& sampler,
                                 double eps, const std::vector<Box>& heavy,
                                 int dim, const NetConfig& cfg, Rng& rng);

WeakNetResult weak_net_for_boxes(const std::vector<Point>& pts,
                                 const std::vector<double>& weights,
                                 double eps, const std::vector<Box>& heavy,
                                 const NetConfig& cfg, Rng& rng);

}  // namespace pierce
