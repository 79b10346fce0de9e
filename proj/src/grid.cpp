#include "pseudolin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quad_detail.hpp"

namespace pseudolin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral over [0, h] of the Lagrange basis polynomial that is 1 at xi[j]
// and 0 at the other stencil offsets (stencil size 2..4, offsets relative to
// the interval's left node).
double basis_integral(const double* xi, int m, int j, double h) {
    double roots[3];
    int nr = 0;
    for (int l = 0; l < m; ++l)
        if (l != j) roots[nr++] = xi[l];
    double denom = 1.0;
    for (int l = 0; l < nr; ++l) denom *= xi[j] - roots[l];
    switch (nr) {
        case 1: // linear basis
            return (h * h / 2.0 - roots[0] * h) / denom;
        case 2: { // quadratic
            const double s1 = roots[0] + roots[1], s2 = roots[0] * roots[1];
            return (h * h * h / 3.0 - s1 * h * h / 2.0 + s2 * h) / denom;
        }
        default: { // cubic
            const double a = roots[0], b = roots[1], c = roots[2];
            const double s1 = a + b + c, s2 = a * b + a * c + b * c, s3 = a * b * c;
            const double h2 = h * h;
            return (h2 * h2 / 4.0 - s1 * h2 * h / 3.0 + s2 * h2 / 2.0 - s3 * h) / denom;
        }
    }
}

// Derivative at x of the Lagrange basis polynomial through up to 4 offsets.
double basis_derivative(const double* xi, int m, int j, double x) {
    double denom = 1.0;
    for (int l = 0; l < m; ++l)
        if (l != j) denom *= xi[j] - xi[l];
    double num = 0.0;
    for (int skip = 0; skip < m; ++skip) {
        if (skip == j) continue;
        double prod = 1.0;
        for (int l = 0; l < m; ++l) {
            if (l == j || l == skip) continue;
            prod *= x - xi[l];
        }
        num += prod;
    }
    return num / denom;
}

// Stencil [first, first+m) for the interval [i, i+1] on an n-node grid.
void interval_stencil(std::size_t n, std::size_t i, std::size_t& first, int& m) {
    if (n >= 4) {
        m = 4;
        first = (i == 0) ? 0 : std::min(i - 1, n - 4);
    } else {
        m = static_cast<int>(n);
        first = 0;
    }
}

} // namespace

namespace detail {

double integrate_array(const double* nodes, const double* values, std::size_t n) {
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t first;
        int m;
        interval_stencil(n, i, first, m);
        const double h = nodes[i + 1] - nodes[i];
        double xi[4];
        for (int l = 0; l < m; ++l) xi[l] = nodes[first + l] - nodes[i];
        for (int l = 0; l < m; ++l) acc += values[first + l] * basis_integral(xi, m, l, h);
    }
    return acc;
}

} // namespace detail

void GridFunction::validate() const {
    if (nodes.size() < 1 || nodes.size() != values.size())
        throw Error("grid function: node/value size mismatch");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw Error("grid function: nodes must be strictly increasing");
    if (!overflow) {
        for (double v : values)
            if (!std::isfinite(v)) throw Error("grid function: non-finite value");
    }
    if (!error_est.empty() && error_est.size() != nodes.size())
        throw Error("grid function: error_est size mismatch");
}

GridFunction sample(const TimeFn& f, const std::vector<double>& nodes) {
    GridFunction out;
    out.nodes = nodes;
    out.values.reserve(nodes.size());
    for (double t : nodes) out.values.push_back(f(t));
    return out;
}

std::vector<double> uniform_nodes(double a, double b, std::size_t n) {
    if (n < 2 || !(b > a)) throw Error("uniform_nodes: need n >= 2 and b > a");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

std::vector<double> enrich_nodes(const std::vector<double>& nodes, double max_dt) {
    std::vector<double> out;
    out.reserve(nodes.size());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        out.push_back(nodes[i]);
        const double gap = nodes[i + 1] - nodes[i];
        if (gap > max_dt) {
            const auto extra = static_cast<std::size_t>(std::ceil(gap / max_dt)) - 1;
            for (std::size_t k = 1; k <= extra; ++k)
                out.push_back(nodes[i] + gap * static_cast<double>(k) /
                                             static_cast<double>(extra + 1));
        }
    }
    out.push_back(nodes.back());
    return out;
}

bool same_nodes(const GridFunction& a, const GridFunction& b) {
    return a.nodes.size() == b.nodes.size() &&
           std::equal(a.nodes.begin(), a.nodes.end(), b.nodes.begin());
}

GridFunction cumulative_integral(const GridFunction& f, std::optional<double> error_cap) {
    if (f.size() < 2) throw Error("cumulative_integral: need at least 2 nodes");
    const std::size_t n = f.size();
    GridFunction out;
    out.nodes = f.nodes;
    out.values.assign(n, 0.0);
    out.error_est.assign(n, 0.0);
    out.overflow = f.overflow;

    double acc = 0.0, acc_trap = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t first;
        int m;
        interval_stencil(n, i, first, m);
        const double h = f.nodes[i + 1] - f.nodes[i];
        double xi[4];
        for (int l = 0; l < m; ++l) xi[l] = f.nodes[first + l] - f.nodes[i];
        double piece = 0.0;
        for (int l = 0; l < m; ++l)
            piece += f.values[first + l] * basis_integral(xi, m, l, h);
        acc += piece;
        acc_trap += 0.5 * h * (f.values[i] + f.values[i + 1]);
        out.values[i + 1] = acc;
        out.error_est[i + 1] = std::abs(acc - acc_trap);
        if (!std::isfinite(acc)) out.overflow = true;
    }
    if (error_cap) {
        for (double e : out.error_est)
            if (e > *error_cap) throw GridTooCoarse(e, *error_cap);
    }
    return out;
}

GridFunction exp_weighted_integral(const GridFunction& inner,
                                   const GridFunction& weight_exponent) {
    if (!same_nodes(inner, weight_exponent))
        throw Error("exp_weighted_integral: grids must share nodes");
    const std::size_t n = inner.size();
    if (n < 2) throw Error("exp_weighted_integral: need at least 2 nodes");
    const GridFunction E = cumulative_integral(weight_exponent);

    GridFunction out;
    out.nodes = inner.nodes;
    out.values.assign(n, 0.0);
    out.error_est.assign(n, 0.0);

    double acc = 0.0, acc_trap = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t first;
        int m;
        interval_stencil(n, i, first, m);
        const double h = inner.nodes[i + 1] - inner.nodes[i];
        // local integrand g(tau) = exp{E(t_i) - E(tau)} inner(tau); only local
        // increments of E enter the exponentials.
        double xi[4], g[4];
        for (int l = 0; l < m; ++l) {
            xi[l] = inner.nodes[first + l] - inner.nodes[i];
            g[l] = std::exp(E.values[i] - E.values[first + l]) * inner.values[first + l];
        }
        double local = 0.0;
        for (int l = 0; l < m; ++l) local += g[l] * basis_integral(xi, m, l, h);
        const double g_left = inner.values[i];
        const double g_right = std::exp(E.values[i] - E.values[i + 1]) * inner.values[i + 1];
        const double local_trap = 0.5 * h * (g_left + g_right);

        const double growth = std::exp(E.values[i + 1] - E.values[i]);
        acc = growth * (acc + local);
        acc_trap = growth * (acc_trap + local_trap);
        out.values[i + 1] = acc;
        if (!std::isfinite(acc)) {
            out.overflow = true;
            // saturate the remaining nodes rather than propagating NaN noise
            for (std::size_t k = i + 1; k < n; ++k) {
                out.values[k] = kInf;
                out.error_est[k] = kInf;
            }
            break;
        }
        out.error_est[i + 1] = std::abs(acc - acc_trap);
    }
    return out;
}

GridFunction derivative(const GridFunction& f) {
    const std::size_t n = f.size();
    if (n < 2) throw Error("derivative: need at least 2 nodes");
    GridFunction out;
    out.nodes = f.nodes;
    out.values.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t first;
        int m;
        if (n >= 4) {
            m = 4;
            first = (k < 2) ? 0 : std::min(k - 1, n - 4);
        } else {
            m = static_cast<int>(n);
            first = 0;
        }
        double xi[4];
        for (int l = 0; l < m; ++l) xi[l] = f.nodes[first + l] - f.nodes[k];
        double d = 0.0;
        for (int l = 0; l < m; ++l)
            d += f.values[first + l] * basis_derivative(xi, m, l, 0.0);
        out.values[k] = d;
    }
    return out;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    if (!same_nodes(a, b)) throw Error("max_abs_diff: grids must share nodes");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

} // namespace pseudolin
