#pragma once

// Internal: allocation-free composite integral over a node/value array
// (same piecewise-cubic rule as cumulative_integral). Defined in grid.cpp.

#include <cstddef>

namespace pseudolin::detail {

double integrate_array(const double* nodes, const double* values, std::size_t n);

} // namespace pseudolin::detail
