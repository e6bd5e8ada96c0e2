#pragma once

#include <vector>

#include "pierce/geometry.hpp"

namespace pierce {

// Exact 1D solvers (greedy over right endpoints) and the divide-and-conquer
// approximations for d >= 2: boxes crossing the median hyperplane are solved
// as a (d-1)-dimensional instance on that hyperplane, the rest recursively on
// both sides.

// Minimum piercing set of a set of intervals (exact).
std::vector<Point> greedy_interval_pierce(const std::vector<Box>& intervals);

// Maximum independent set of intervals (exact); returns indices.
std::vector<int> greedy_interval_independent(const std::vector<Box>& intervals);

// Piercing set of size O(opt * log^{d-1} n); valid for every input.
std::vector<Point> dnc_pierce(const std::vector<Box>& boxes);

// Pairwise-disjoint subset (indices); the largest of the per-depth groups.
std::vector<int> dnc_independent(const std::vector<Box>& boxes);

}  // namespace pierce
