#pragma once

// Internal embedded Dormand-Prince 5(4) stepper with free 4th-order dense
// output, shared by the trajectory integrator (N = 2) and the ratio-equation
// solver (N = 1). Not installed; implementation detail.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

namespace pseudolin::detail {

template <int N>
using State = std::array<double, N>;

enum class RunStatus {
    ReachedEnd,      // integrated to the requested horizon
    Escaped,         // norm passed the escape threshold, or collapse with growth
    StepCollapse,    // step below h_min without norm growth
    BudgetExhausted, // max_steps hit
};

struct RunOutcome {
    RunStatus status = RunStatus::ReachedEnd;
    double t_last = 0.0;
    double t_escape = 0.0; // last time + extrapolated escape estimate
    long n_accepted = 0, n_rejected = 0;
};

struct RunOptions {
    double rtol = 1e-8, atol = 1e-10;
    double h_min = 0.0; // 0: 1e-12 * span
    double escape_norm = 1e8;
    long max_steps = 10'000'000;
};

template <int N>
double inf_norm(const State<N>& y) {
    double m = 0.0;
    for (double x : y) m = std::max(m, std::abs(x));
    return m;
}

// Remaining-time estimate for an escaping solution: |y|/|y'| of the largest
// component, when that component is still growing (exact for y' = y^2).
template <int N>
double escape_time_estimate(const State<N>& y, const State<N>& f) {
    int imax = 0;
    for (int i = 1; i < N; ++i)
        if (std::abs(y[i]) > std::abs(y[imax])) imax = i;
    if (f[imax] * (y[imax] >= 0 ? 1.0 : -1.0) > 0.0 && f[imax] != 0.0)
        return std::abs(y[imax]) / std::abs(f[imax]);
    return 0.0;
}

// rhs(t, y, dydt) -> bool; false means a coefficient went non-finite and the
// step must be rejected. on_accept(t_left, h, y_left, y_new, rcont[5]) is
// called for every accepted step.
template <int N, class RHS, class OnAccept>
RunOutcome run_dopri5(RHS&& rhs, State<N> y, double t0, double t_end,
                      const RunOptions& opt, OnAccept&& on_accept) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    const double span = t_end - t0;
    const double h_min = opt.h_min > 0 ? opt.h_min : 1e-12 * span;

    RunOutcome out;
    out.t_last = t0;

    State<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};
    double t = t0;
    if (!rhs(t, y, k1)) {
        out.status = RunStatus::StepCollapse;
        return out;
    }

    // initial step: scale-based guess, refined immediately by error control
    double h;
    {
        double d0 = 0.0, dd1 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            dd1 = std::max(dd1, std::abs(k1[i]) / sc);
        }
        h = (dd1 > 1e-10) ? 0.01 * d0 / dd1 : 1e-6 * span;
        h = std::clamp(h, 1e-8 * span, 0.1 * span);
        if (h <= 0) h = 1e-6 * span;
    }

    std::deque<double> norm_window{inf_norm<N>(y)};
    bool just_rejected = false;

    // escape requires monotone growth across the window, not a transient swing
    const auto norm_grew = [&]() {
        if (norm_window.size() < 2) return false;
        for (std::size_t i = 1; i < norm_window.size(); ++i)
            if (norm_window[i] < norm_window[i - 1] * (1.0 - 1e-12)) return false;
        return norm_window.back() > norm_window.front();
    };

    while (t < t_end) {
        if (out.n_accepted + out.n_rejected >= opt.max_steps) {
            out.status = RunStatus::BudgetExhausted;
            return out;
        }
        bool last = false;
        if (t + 1.01 * h >= t_end) {
            h = t_end - t;
            last = true;
        }

        bool finite = true;
        auto stage = [&](State<N>& k, double tc, auto... terms) {
            for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (... + terms(i));
            finite = finite && rhs(t + tc * h, ytmp, k);
        };
        stage(k2, c2, [&](int i) { return a21 * k1[i]; });
        stage(k3, c3, [&](int i) { return a31 * k1[i]; }, [&](int i) { return a32 * k2[i]; });
        stage(k4, c4, [&](int i) { return a41 * k1[i]; }, [&](int i) { return a42 * k2[i]; },
              [&](int i) { return a43 * k3[i]; });
        stage(k5, c5, [&](int i) { return a51 * k1[i]; }, [&](int i) { return a52 * k2[i]; },
              [&](int i) { return a53 * k3[i]; }, [&](int i) { return a54 * k4[i]; });
        stage(k6, 1.0, [&](int i) { return a61 * k1[i]; }, [&](int i) { return a62 * k2[i]; },
              [&](int i) { return a63 * k3[i]; }, [&](int i) { return a64 * k4[i]; },
              [&](int i) { return a65 * k5[i]; });
        for (int i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        finite = finite && rhs(t + h, ynew, k7);
        for (int i = 0; i < N; ++i) finite = finite && std::isfinite(ynew[i]);

        double err = 0.0;
        if (finite) {
            for (int i = 0; i < N; ++i) {
                const double sc =
                    opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                err += (ei / sc) * (ei / sc);
            }
            err = std::sqrt(err / N);
        } else {
            err = 1e10;
        }

        if (err <= 1.0) {
            std::array<State<N>, 5> rcont;
            for (int i = 0; i < N; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = -h * k7[i] + ydiff - bspl;
                rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
            }
            on_accept(t, h, y, ynew, rcont);
            ++out.n_accepted;
            t += h;
            y = ynew;
            k1 = k7; // FSAL
            out.t_last = t;

            norm_window.push_back(inf_norm<N>(y));
            if (norm_window.size() > 11) norm_window.pop_front();

            if (norm_window.back() > opt.escape_norm) {
                out.status = RunStatus::Escaped;
                out.t_escape = t + escape_time_estimate<N>(y, k1);
                return out;
            }
            if (last || t >= t_end) break;

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, just_rejected ? 1.0 : 10.0);
            h *= fac;
            just_rejected = false;
        } else {
            ++out.n_rejected;
            just_rejected = true;
            const double fac = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= fac;
            if (h < h_min) {
                if (norm_grew()) {
                    out.status = RunStatus::Escaped;
                    out.t_escape = t + escape_time_estimate<N>(y, k1);
                } else {
                    out.status = RunStatus::StepCollapse;
                }
                return out;
            }
        }
    }
    out.status = RunStatus::ReachedEnd;
    return out;
}

// Dense-output evaluation on one accepted step, theta in [0, 1].
template <int N>
double dense_component(const std::array<State<N>, 5>& rcont, int i, double theta) {
    const double th1 = 1.0 - theta;
    return rcont[0][i] +
           theta * (rcont[1][i] +
                    th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i])));
}

} // namespace pseudolin::detail
