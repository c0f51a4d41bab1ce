#pragma once

#include "rsdlab/rational.hpp"

#include <vector>

namespace rsdlab {

// x majorizes y: equal sums, and every prefix sum of the descending sort of x
// dominates the corresponding prefix sum for y.
bool majorizes(const std::vector<Rat>& x, const std::vector<Rat>& y);

// Floating-point variant with an absolute tolerance on the comparisons.
bool majorizes(const std::vector<double>& x, const std::vector<double>& y, double tol = 1e-12);

} // namespace rsdlab
