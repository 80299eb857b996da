#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slratio/boundary.hpp"
#include "slratio/errors.hpp"
#include "slratio/oracle.hpp"
#include "slratio/potential.hpp"
#include "slratio/pruefer.hpp"

namespace slratio {

enum class Method { shooting, oracle };

inline std::string_view to_string(Method m) { return m == Method::shooting ? "shooting" : "oracle"; }

/// One eigenvalue with its certificate. For method == oracle, `residual` is 0 and `z` is
/// sqrt(max(lambda, 0)).
struct EigenvalueRecord {
    int n = 0;
    double z = 0.0;
    double lambda = 0.0;
    double residual = 0.0;  // |phi(l, z) - target| in radians
    Method method = Method::shooting;
};

struct SolverOptions {
    double rel_tol = default_rel_tol;  // integrator tolerance
    double z_tol = 1e-11;              // relative width of the final z bracket
    double phase_tol = 1e-10;          // residual aimed for before stopping
    std::size_t oracle_nodes = 400;    // coarse grid for the finite-difference fallback
    int max_expansions = 60;
};

/// Terminal Pruefer phase phi(l, z).
inline double phase_at(const Potential& p, double z, double ell, double rel_tol = default_rel_tol) {
    if (!(ell > 0.0 && ell <= p.domain_end())) throw DomainError("ell outside (0, domain end]");
    return integrate_phase(p, z, ell, rel_tol).phi;
}

namespace detail {

inline void check_index(int n) {
    if (n < 1) throw ParameterError("eigenvalue index must be >= 1");
}

}  // namespace detail

/// z-interval with phi(l, z_lo) < target < phi(l, z_hi).
///
/// Starts from lambda in [k^2 + q_min, k^2 + q_max], k = target / l (comparison with the
/// constant potentials q_min and q_max), then doubles / halves on the lambda scale until the
/// phase check holds. A lower end that cannot be placed above 0 raises NegativeSpectrumSuspected.
inline std::pair<double, double> bracket(const Potential& p, int n, BoundaryCondition bc, double ell,
                                         const SolverOptions& opts = {}) {
    detail::check_index(n);
    if (!(ell > 0.0 && ell <= p.domain_end())) throw DomainError("ell outside (0, domain end]");
    const double target = phase_target(bc, n);
    const Extrema ext = min_max(p, 0.0, ell);
    const double k = target / ell;
    double lambda_lo = k * k + ext.q_min;
    double lambda_hi = k * k + ext.q_max;

    auto negative = [&](const std::string& why) {
        return NegativeSpectrumSuspected(n, "no positive bracket for index " + std::to_string(n) + ": " + why);
    };
    if (!(lambda_hi > 0.0)) throw negative("comparison bound k^2 + q_max <= 0");

    auto f = [&](double lambda) { return phase_at(p, std::sqrt(lambda), ell, opts.rel_tol) - target; };

    int expansions = 0;
    while (f(lambda_hi) <= 0.0) {
        if (++expansions > opts.max_expansions) throw IntegrationFailure("upper bracket expansion did not terminate");
        lambda_hi *= 2.0;
    }

    if (!(lambda_lo > 0.0)) lambda_lo = 0.5 * lambda_hi;
    expansions = 0;
    try {
        while (f(lambda_lo) >= 0.0) {
            if (++expansions > opts.max_expansions) throw negative("phase stays above target as z -> 0+");
            lambda_hi = std::min(lambda_hi, lambda_lo);
            lambda_lo *= 0.5;
        }
    } catch (const IntegrationFailure& e) {
        throw negative(std::string("integration failed near z = 0+: ") + e.what());
    }
    return {std::sqrt(lambda_lo), std::sqrt(lambda_hi)};
}

/// n-th eigenvalue on [0, l] by bracketed root finding on phi(l, z) - target.
///
/// Bisection keeps the bracket; a secant step through the last two iterates is taken only
/// when it lands strictly inside the bracket and the previous step at least halved it.
/// If an iterate breaks phase monotonicity the search degrades to pure bisection.
inline EigenvalueRecord solve_one(const Potential& p, int n, BoundaryCondition bc, double ell,
                                  const SolverOptions& opts = {}) {
    const double target = phase_target(bc, n);
    auto [lo, hi] = bracket(p, n, bc, ell, opts);
    auto f = [&](double z) { return phase_at(p, z, ell, opts.rel_tol) - target; };

    double flo = f(lo), fhi = f(hi);
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    bool bisection_only = false;
    bool force_bisect = false;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int it = 0; it < 400; ++it) {
        const double width = hi - lo;
        const double best = std::min(std::abs(flo), std::abs(fhi));
        if (width <= opts.z_tol * hi && best <= opts.phase_tol) break;
        if (width <= 4.0 * eps * hi) break;

        double c = 0.5 * (lo + hi);
        if (!bisection_only && !force_bisect && f1 != f0) {
            const double s = x1 - f1 * (x1 - x0) / (f1 - f0);
            if (s > lo && s < hi) c = s;
        }
        const double fc = f(c);
        if (fc < flo || fc > fhi) bisection_only = true;
        if (fc == 0.0) {
            lo = hi = c;
            flo = fhi = 0.0;
            break;
        }
        if (fc < 0.0) {
            lo = c;
            flo = fc;
        } else {
            hi = c;
            fhi = fc;
        }
        force_bisect = (hi - lo) > 0.5 * width;
        x0 = x1;
        f0 = f1;
        x1 = c;
        f1 = fc;
    }

    const bool take_lo = std::abs(flo) <= std::abs(fhi);
    const double z = take_lo ? lo : hi;
    return {n, z, z * z, take_lo ? std::abs(flo) : std::abs(fhi), Method::shooting};
}

/// Eigenvalues 1..n_max. Indices without a positive bracket are filled from the
/// Richardson-refined finite-difference oracle and marked Method::oracle.
inline std::vector<EigenvalueRecord> solve_range(const Potential& p, int n_max, BoundaryCondition bc, double ell,
                                                 const SolverOptions& opts = {}) {
    if (n_max < 1) throw ParameterError("n_max must be >= 1");
    std::vector<EigenvalueRecord> out;
    out.reserve(static_cast<std::size_t>(n_max));
    std::optional<std::vector<double>> fallback;
    for (int n = 1; n <= n_max; ++n) {
        try {
            out.push_back(solve_one(p, n, bc, ell, opts));
        } catch (const NegativeSpectrumSuspected&) {
            if (!fallback) {
                const std::size_t nodes = std::max<std::size_t>(opts.oracle_nodes, 4 * static_cast<std::size_t>(n_max));
                fallback = refined_eigenvalues(p, ell, static_cast<std::size_t>(n_max), nodes, bc);
            }
            const double lambda = (*fallback)[static_cast<std::size_t>(n - 1)];
            out.push_back({n, std::sqrt(std::max(lambda, 0.0)), lambda, 0.0, Method::oracle});
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i].lambda > out[i - 1].lambda))
            throw Error("computed spectrum is not strictly increasing at n = " + std::to_string(out[i].n));
    return out;
}

}  // namespace slratio
