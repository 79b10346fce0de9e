#pragma once

#include <string>

#include "pseudolin/grid.hpp"

namespace pseudolin {

/// Parse a time expression from the small config vocabulary: a sum of terms,
/// each a constant, t, t^a, exp(a*t), cos(a*t) or sin(a*t), optionally scaled
/// by a leading coefficient. Examples:
///   "0"   "1.5"   "t^-3"   "2*t^0.5"   "exp(0.1*t)"   "1 + 0.2*cos(t)"
///   "-0.1 + 0.3*sin(2.5*t)"
/// Throws ConfigError with a position diagnostic on malformed input.
TimeFn parse_time_expression(const std::string& text);

} // namespace pseudolin
