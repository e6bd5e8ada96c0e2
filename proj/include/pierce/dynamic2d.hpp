#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pierce/geometry.hpp"
#include "pierce/mwu.hpp"
#include "pierce/range_tree.hpp"

namespace pierce {

// Dynamic maintenance of a near-optimal piercing set for boxes in the plane.
//
// A box [x1,x2] x [y1,y2] maps to the 4D point (x1,y1,x2,y2); a query point
// p maps to the orthant {u1 <= px, u2 <= py, u3 >= px, u4 >= py}, so a box is
// pierced by p exactly when its 4D image lies in the orthant.  Unpierced
// boxes are retrieved as canonical subsets of a 4-level dynamic range tree
// queried with a partition of the complement of the orthant union.  Squares
// are the same 4D image written in sheared coordinates (cx-a, cy-a, cx+a,
// cy+a), so the machinery is shared; squares mode differs in the
// three-round reconstruction schedule with smaller samples.
struct DynConfig {
  double c1 = 2.0;  // sample size multiplier
  double c2 = 4.0;  // residue threshold multiplier
  int max_restarts = 3;
  MwuConfig inner;
};

// Partition of K = R^4 minus the union of the piercing orthants into
// interior-disjoint half-open regions (strictness flags per side).
std::vector<RangeTree<double>::Query> complement_partition(
    const std::vector<std::vector<double>>& points);

class DynamicPiercer {
 public:
  enum class Mode { rects, squares };

  DynamicPiercer(Mode mode, std::uint64_t seed, DynConfig cfg = {});

  void insert(const RawBox& b);
  void erase(const RawBox& b);  // by value; throws if absent

  const std::vector<std::vector<double>>& solution() const { return pierce_; }
  std::int64_t live_count() const { return static_cast<std::int64_t>(tree_.size()); }
  std::vector<RawBox> live_boxes() const;
  std::int64_t reconstructions() const { return reconstructions_; }
  const std::map<std::string, double>& stats() const { return stats_; }

  // ids of live boxes not pierced by the given points (via the canonical
  // machinery); exposed for the squares-mode set-equality tests
  std::vector<RawBox> unpierced_by(
      const std::vector<std::vector<double>>& points) const;

  void reconstruct();

 private:
  std::vector<double> to_point4(const RawBox& b) const;
  std::vector<RawBox> boxes_of_canonical(
      const std::vector<std::vector<double>>& points,
      std::int64_t size_cap, bool* over_cap) const;
  RawBox from_point4(const std::vector<double>& p) const;

  Mode mode_;
  DynConfig cfg_;
  Rng rng_;
  RangeTree<double> tree_;  // 4D images of the live boxes
  std::vector<std::vector<double>> pierce_;
  std::int64_t since_rebuild_ = 0;
  std::int64_t s_ = 0;  // |P| at the last reconstruction
  std::int64_t reconstructions_ = 0;
  std::map<std::string, double> stats_;
};

}  // namespace pierce
