#include "pseudolin/csv.hpp"

#include <cstdio>
#include <ostream>

namespace pseudolin {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,phi,psi\n";
    for (std::size_t i = 0; i < traj.nodes.size(); ++i)
        os << format_double(traj.nodes[i]) << ',' << format_double(traj.phi[i]) << ','
           << format_double(traj.psi[i]) << '\n';
}

void write_grid_csv(std::ostream& os, const GridFunction& f,
                    const std::string& value_header) {
    os << "t," << value_header << "\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        os << format_double(f.nodes[i]) << ',' << format_double(f.values[i]) << '\n';
}

void write_bound_curve_csv(std::ostream& os, const BoundCurve& c,
                           const std::string& value_header) {
    os << "t," << value_header << "\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        os << format_double(c.grid[i]) << ',' << format_double(c.values[i]) << '\n';
}

void write_trace_csv(std::ostream& os, const RiccatiTrace& trace) {
    os << "t,value,h_value\n";
    for (std::size_t i = 0; i < trace.nodes.size(); ++i)
        os << format_double(trace.nodes[i]) << ',' << format_double(trace.values[i]) << ','
           << format_double(trace.h_values[i]) << '\n';
}

} // namespace pseudolin
