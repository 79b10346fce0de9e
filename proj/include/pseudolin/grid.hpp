#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pseudolin/errors.hpp"

namespace pseudolin {

/// Scalar function of time only.
using TimeFn = std::function<double(double)>;

/// Function sampled on a strictly increasing time grid, the discretization
/// carrier for every cumulative / nested integral in the library.
/// error_est holds per-node quadrature error estimates when produced by a
/// quadrature pass (empty otherwise). overflow marks that values past some
/// node saturated to +inf in an exponential-weighted pass.
struct GridFunction {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> error_est;
    bool overflow = false;

    std::size_t size() const { return nodes.size(); }
    double front_node() const { return nodes.front(); }
    double back_node() const { return nodes.back(); }

    /// Throws Error if nodes are not strictly increasing, sizes disagree,
    /// or values are non-finite (overflow grids are exempt from finiteness).
    void validate() const;
};

/// Sample a time function on the given nodes.
GridFunction sample(const TimeFn& f, const std::vector<double>& nodes);

/// Uniform grid of n nodes on [a, b] (n >= 2).
std::vector<double> uniform_nodes(double a, double b, std::size_t n);

/// Insert nodes so that no spacing exceeds max_dt; keeps the original nodes.
std::vector<double> enrich_nodes(const std::vector<double>& nodes, double max_dt);

/// Grids must share nodes for binary operations; exact node equality required.
bool same_nodes(const GridFunction& a, const GridFunction& b);

/// Cumulative integral F(t_i) = int_{t_0}^{t_i} f, F(t_0) = 0.
/// Piecewise-cubic (4-point Lagrange) composite rule, 4th order on smooth
/// integrands, valid on non-uniform grids; error_est is the node-wise
/// difference against the trapezoid (halved-order) cumulative.
/// If error_cap is given, throws GridTooCoarse when any estimate exceeds it.
GridFunction cumulative_integral(const GridFunction& f,
                                 std::optional<double> error_cap = std::nullopt);

/// t |-> int_{t0}^{t} exp{E(t) - E(tau)} * inner(tau) dtau with
/// E = cumulative_integral(weight_exponent); equivalently the solution of
/// y' = w*y + inner, y(t0) = 0. Evaluated by an O(N) stepwise recurrence whose
/// exponentials only ever see local increments of E, so intermediate factors
/// cannot overflow unless the result itself does; on overflow the remaining
/// values are +inf sentinels and the overflow flag is set.
GridFunction exp_weighted_integral(const GridFunction& inner,
                                   const GridFunction& weight_exponent);

/// 4th-order derivative estimate at every node (local cubic differentiation).
GridFunction derivative(const GridFunction& f);

/// max_i |a_i - b_i| on shared nodes.
double max_abs_diff(const GridFunction& a, const GridFunction& b);

} // namespace pseudolin
