#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "slratio/dopri.hpp"
#include "slratio/errors.hpp"
#include "slratio/potential.hpp"

namespace slratio {

inline constexpr double default_rel_tol = 1e-10;
inline constexpr double default_abs_tol = 1e-12;

/// Modified Pruefer state of the solution of -y'' + q y = z^2 y, y(0) = 0, y'(0) = 1,
/// written as y = r sin(phi), y' = z r cos(phi).
struct PrueferState {
    double x = 0.0;
    double phi = 0.0;      // unwrapped phase
    double log_r = 0.0;    // log amplitude
    double phi_dot = 0.0;  // d(phi)/dz
};

inline PrueferState initial_state(double z) { return {0.0, 0.0, -std::log(z), 0.0}; }

namespace detail {

inline void check_spectral_parameter(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("spectral parameter z must be > 0, got " + format_real(z));
}

}  // namespace detail

/// Continues `from` up to x_end (from.x <= x_end <= domain end) at spectral parameter z.
///
/// Right-hand side of the augmented system, with s = sin(phi), c = cos(phi):
///   phi'     = z - (q/z) s^2
///   log r'   = (q/z) s c
///   phi_dot' = 1 + (q/z^2) s^2 - (q/z) 2 s c phi_dot
inline PrueferState advance(const Potential& p, double z, const PrueferState& from, double x_end,
                            double rel_tol = default_rel_tol, IntegrationStats* stats = nullptr) {
    detail::check_spectral_parameter(z);
    if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be > 0");
    if (!(x_end >= from.x && x_end <= p.domain_end()))
        throw DomainError("x_end = " + format_real(x_end) + " outside [" + format_real(from.x) + ", " +
                          format_real(p.domain_end()) + "]");

    const double inv_z = 1.0 / z;
    auto rhs = [&](double x, const std::array<double, 3>& u) {
        const double q = p.value(x);
        const double s = std::sin(u[0]), c = std::cos(u[0]);
        const double qz = q * inv_z;
        return std::array<double, 3>{
            z - qz * s * s,
            qz * s * c,
            1.0 + qz * inv_z * s * s - qz * 2.0 * s * c * u[2],
        };
    };

    StepControl ctl;
    ctl.rel_tol = rel_tol;
    ctl.abs_tol = std::min(default_abs_tol, rel_tol);
    const auto kinks = p.kinks(from.x, x_end);
    const auto u = dopri5<3>(rhs, from.x, {from.phi, from.log_r, from.phi_dot}, x_end, ctl, kinks, stats);
    return {x_end, u[0], u[1], u[2]};
}

/// Integrates the augmented Pruefer system from 0 to x_end.
inline PrueferState integrate_phase(const Potential& p, double z, double x_end, double rel_tol = default_rel_tol,
                                    IntegrationStats* stats = nullptr) {
    detail::check_spectral_parameter(z);
    if (!(x_end > 0.0)) throw DomainError("x_end must be > 0");
    return advance(p, z, initial_state(z), x_end, rel_tol, stats);
}

/// Scaled phase phi / z.
inline double theta(const PrueferState& s, double z) { return s.phi / z; }

/// z-derivative of phi / z at x0: (phi_dot z - phi) / z^2.
inline double theta_dot(const Potential& p, double z, double x0, double rel_tol = default_rel_tol) {
    const PrueferState s = integrate_phase(p, z, x0, rel_tol);
    return (s.phi_dot * z - s.phi) / (z * z);
}

struct TracePoint {
    double x;
    double y;
};

/// Samples y = r sin(phi) on a sorted grid inside [0, domain end].
inline std::vector<TracePoint> eigenfunction_trace(const Potential& p, double z, std::span<const double> grid,
                                                   double rel_tol = default_rel_tol) {
    detail::check_spectral_parameter(z);
    std::vector<TracePoint> out;
    out.reserve(grid.size());
    PrueferState s = initial_state(z);
    for (double x : grid) {
        if (x < s.x) throw DomainError("eigenfunction_trace: grid must be sorted");
        if (x == 0.0) {
            out.push_back({0.0, 0.0});
            continue;
        }
        s = advance(p, z, s, x, rel_tol);
        out.push_back({x, std::exp(s.log_r) * std::sin(s.phi)});
    }
    return out;
}

}  // namespace slratio
