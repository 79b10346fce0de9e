#pragma once

#include <iosfwd>
#include <string>

#include "pseudolin/criteria.hpp"
#include "pseudolin/grid.hpp"
#include "pseudolin/integrate.hpp"
#include "pseudolin/riccati.hpp"

namespace pseudolin {

/// All CSV output: '.' decimal separator, 17 significant digits, LF line ends.
std::string format_double(double x);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj); // t,phi,psi
void write_grid_csv(std::ostream& os, const GridFunction& f,
                    const std::string& value_header = "value");      // t,<header>
void write_bound_curve_csv(std::ostream& os, const BoundCurve& c,
                           const std::string& value_header);         // t,<header>
void write_trace_csv(std::ostream& os, const RiccatiTrace& trace);   // t,value,h_value

} // namespace pseudolin
