#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "slratio/errors.hpp"
#include "slratio/format.hpp"

namespace slratio {

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double min_step = 1e-14;
    std::size_t max_steps = 5'000'000;
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with FSAL and an elementary (I-)controller.
///
/// Integrates y' = f(x, y) from x0 to x1 > x0 and returns y(x1). Every breakpoint strictly
/// inside (x0, x1) is hit exactly by a step end point, so a right-hand side that is only
/// piecewise smooth between breakpoints keeps the full order.
template <std::size_t N, class Rhs>
std::array<double, N> dopri5(Rhs&& f, double x0, std::array<double, N> y, double x1,
                             const StepControl& ctl, std::span<const double> breakpoints = {},
                             IntegrationStats* stats = nullptr) {
    using Vec = std::array<double, N>;
    if (!(x1 >= x0)) throw DomainError("dopri5: end point before start point");
    if (x1 == x0) return y;

    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [](const Vec& base, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
        Vec out = base;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (const auto& [c, k] : terms) acc += c * (*k)[i];
            out[i] += h * acc;
        }
        return out;
    };

    double x = x0;
    Vec k1 = f(x, y);
    double h = 0.0;
    {
        double scale = 1.0;
        for (double v : k1) scale = std::max(scale, std::abs(v));
        h = std::min(x1 - x0, 0.1 / scale);
    }

    std::size_t next_bp = 0;
    while (next_bp < breakpoints.size() && breakpoints[next_bp] <= x0) ++next_bp;

    std::size_t steps = 0;
    while (x < x1) {
        double stop = x1;
        while (next_bp < breakpoints.size() && breakpoints[next_bp] <= x) ++next_bp;
        if (next_bp < breakpoints.size() && breakpoints[next_bp] < x1) stop = breakpoints[next_bp];

        bool hits_stop = false;
        double step = h;
        if (x + step >= stop || stop - (x + step) < ctl.min_step) {
            step = stop - x;
            hits_stop = true;
        }

        Vec k2 = f(x + c2 * step, axpy(y, step, {{a21, &k1}}));
        Vec k3 = f(x + c3 * step, axpy(y, step, {{a31, &k1}, {a32, &k2}}));
        Vec k4 = f(x + c4 * step, axpy(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        Vec k5 = f(x + c5 * step, axpy(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        Vec k6 = f(x + step, axpy(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        Vec y_new = axpy(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double x_new = hits_stop ? stop : x + step;
        Vec k7 = f(x_new, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double ratio = std::abs(e) / sc;
            if (!std::isfinite(ratio) || !std::isfinite(y_new[i])) {
                err = 1e10;
                break;
            }
            err = std::max(err, ratio);
        }

        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err <= 1.0) {
            x = x_new;
            y = y_new;
            k1 = k7;
            if (stats) ++stats->accepted;
            // A step truncated at a stop point says nothing about the natural step size.
            h = hits_stop ? std::max(h, step * factor) : step * factor;
        } else {
            if (stats) ++stats->rejected;
            h = step * std::min(factor, 1.0);
            if (h < ctl.min_step)
                throw IntegrationFailure("step size underflow (h = " + format_real(h) + ") at x = " +
                                         format_real(x));
        }
        if (++steps > ctl.max_steps)
            throw IntegrationFailure("step budget exhausted at x = " + format_real(x));
    }
    return y;
}

}  // namespace slratio
