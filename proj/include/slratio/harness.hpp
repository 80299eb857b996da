#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slratio/boundary.hpp"
#include "slratio/eigensolver.hpp"
#include "slratio/errors.hpp"
#include "slratio/oracle.hpp"
#include "slratio/potential.hpp"
#include "slratio/pruefer.hpp"

namespace slratio {

enum class Theorem {
    t1,             // theta_dot(x0, z) <= 0 for z >= sqrt(-2 q_min), q <= 0 nondecreasing on [0, x0]
    t2,             // lambda_n / lambda_m >= n^2 / m^2, q <= 0 single barrier, lambda_m >= -2 q_min
    t3,             // same ratio bound for every pair on [0, l0]
    t4,             // lambda_n / lambda_m >= (2n-1)^2 / (2m-1)^2, y'(l) = 0, q <= 0 nondecreasing
    ab_n2,          // lambda_n / lambda_1 <= n^2, q >= 0
    ab_ceil,        // lambda_n / lambda_m <= ceil(n/m)^2, q >= 0
    chen_floor,     // lambda_n / lambda_m >= floor(n/m)^2, q <= 0
    hk_singlewell,  // lambda_n / lambda_m <= n^2 / m^2, q >= 0 single well
};

inline std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::t1: return "T1";
        case Theorem::t2: return "T2";
        case Theorem::t3: return "T3";
        case Theorem::t4: return "T4";
        case Theorem::ab_n2: return "AB_n2";
        case Theorem::ab_ceil: return "AB_ceil";
        case Theorem::chen_floor: return "Chen_floor";
        case Theorem::hk_singlewell: return "HK_singlewell";
    }
    return "";
}

inline std::optional<Theorem> parse_theorem(std::string_view s) {
    for (Theorem t : {Theorem::t1, Theorem::t2, Theorem::t3, Theorem::t4, Theorem::ab_n2, Theorem::ab_ceil,
                      Theorem::chen_floor, Theorem::hk_singlewell}) {
        const auto name = to_string(t);
        if (s.size() != name.size()) continue;
        bool same = true;
        for (std::size_t i = 0; i < s.size(); ++i)
            same = same && std::tolower(static_cast<unsigned char>(s[i])) ==
                               std::tolower(static_cast<unsigned char>(name[i]));
        if (same) return t;
    }
    return std::nullopt;
}

/// Direction of the inequality a theorem asserts.
///   lower: value >= bound, reported as lhs = value, rhs = bound
///   upper: value <= bound, reported as lhs = bound, rhs = value
/// so that margin = lhs - rhs is nonnegative whenever the inequality holds.
enum class Sense { lower, upper };

inline Sense sense_of(Theorem t) {
    switch (t) {
        case Theorem::t1:
        case Theorem::ab_n2:
        case Theorem::ab_ceil:
        case Theorem::hk_singlewell:
            return Sense::upper;
        default:
            return Sense::lower;
    }
}

/// One inequality instance. Ratio theorems fill (m, n); T1 fills z (m = n = 0).
struct Check {
    int m = 0;
    int n = 0;
    std::optional<double> z;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

struct IndexPair {
    int m = 0;
    int n = 0;
};

enum class SpectrumSource { shooting, oracle };

inline std::string_view to_string(SpectrumSource s) { return s == SpectrumSource::shooting ? "shooting" : "oracle"; }

struct Tolerances {
    double slack = 1e-8;                  // relative to max(1, |bound|)
    double rel_tol = default_rel_tol;     // integrator tolerance
    double eligibility_threshold = 0.0;   // -2 q_min where it applies
    SpectrumSource source = SpectrumSource::shooting;
};

/// Certificate of the l0 search.
struct L0Result {
    double ell0 = 1.0;
    double lambda1 = 0.0;
    double threshold = 0.0;  // -2 min_[0, l0] q
    double gap = 0.0;        // final bisection gap (0 when l0 is the full interval)
};

struct VerificationReport {
    Theorem theorem = Theorem::t2;
    std::string potential;
    double ell = 1.0;
    std::vector<Check> checks;
    std::vector<IndexPair> ineligible;
    int eligible_count = 0;
    bool pass = true;
    Tolerances tolerances;
    std::optional<L0Result> l0;  // T3 only
    std::optional<double> x0;    // T1 only

    Sense sense() const { return sense_of(theorem); }
};

/// The bound side of a check: rhs for lower bounds, lhs for upper bounds.
inline double bound_of(const Check& c, Sense s) { return s == Sense::lower ? c.rhs : c.lhs; }
/// The computed side of a check (ratio or theta_dot).
inline double value_of(const Check& c, Sense s) { return s == Sense::lower ? c.lhs : c.rhs; }

inline bool check_passes(const Check& c, Sense s, double slack) {
    return c.margin >= -slack * std::max(1.0, std::abs(bound_of(c, s)));
}

/// Recomputes `pass` from the listed margins.
inline bool recompute_pass(const VerificationReport& r) {
    return std::all_of(r.checks.begin(), r.checks.end(),
                       [&](const Check& c) { return check_passes(c, r.sense(), r.tolerances.slack); });
}

struct HarnessOptions {
    double slack = 1e-8;
    SpectrumSource source = SpectrumSource::shooting;
    SolverOptions solver;
    std::size_t oracle_nodes = 2000;  // coarse Richardson grid when source == oracle
    int l0_grid = 16;
};

/// lambda_1..lambda_{n_max} on [0, ell] from the selected solver.
inline std::vector<double> compute_spectrum(const Potential& p, int n_max, BoundaryCondition bc, double ell,
                                            const HarnessOptions& opts) {
    if (n_max < 1) throw ParameterError("n_max must be >= 1");
    if (opts.source == SpectrumSource::oracle) {
        const auto n = static_cast<std::size_t>(n_max);
        return refined_eigenvalues(p, ell, n, std::max(opts.oracle_nodes, 4 * n), bc);
    }
    std::vector<double> out;
    for (const auto& rec : solve_range(p, n_max, bc, ell, opts.solver)) out.push_back(rec.lambda);
    return out;
}

namespace detail {

inline VerificationReport make_report(Theorem t, const Potential& p, double ell, const HarnessOptions& opts) {
    VerificationReport r;
    r.theorem = t;
    r.potential = p.describe();
    r.ell = ell;
    r.tolerances.slack = opts.slack;
    r.tolerances.rel_tol = opts.solver.rel_tol;
    r.tolerances.source = opts.source;
    return r;
}

inline void finish(VerificationReport& r) {
    r.eligible_count = static_cast<int>(r.checks.size());
    r.pass = recompute_pass(r);
}

inline void require(bool ok, Theorem t, const std::string& what) {
    if (!ok) throw IneligiblePotential(std::string(to_string(t)) + " requires " + what);
}

// Adds one ratio check for the pair (m, n), 1-based, from the spectrum.
inline void add_ratio_check(VerificationReport& r, const std::vector<double>& lambda, int m, int n, double bound) {
    const double ratio = lambda[static_cast<std::size_t>(n - 1)] / lambda[static_cast<std::size_t>(m - 1)];
    Check c;
    c.m = m;
    c.n = n;
    if (r.sense() == Sense::lower) {
        c.lhs = ratio;
        c.rhs = bound;
    } else {
        c.lhs = bound;
        c.rhs = ratio;
    }
    c.margin = c.lhs - c.rhs;
    r.checks.push_back(c);
}

inline double sq(double v) { return v * v; }

// -2 q_min for q_min <= 0, else 0 (never -0.0).
inline double eligibility_threshold(double q_min) { return std::max(0.0, -2.0 * q_min); }

}  // namespace detail

/// Samples theta_dot(x0, z) on a geometric grid over [sqrt(-2 q_min), 4 sqrt(-2 q_min)]
/// (over [pi, 4 pi] when q_min = 0) and checks each value is <= 0.
inline VerificationReport check_theorem1(const Potential& p, double x0, int z_count, const HarnessOptions& opts = {}) {
    if (z_count < 1) throw ParameterError("z_count must be >= 1");
    if (!(x0 > 0.0 && x0 <= p.domain_end())) throw DomainError("x0 must lie in (0, domain end]");
    const ShapeReport shape = classify(p);
    detail::require(shape.nonpositive, Theorem::t1, "q <= 0");
    detail::require(is_nondecreasing_on(p, 0.0, x0, shape.tolerance), Theorem::t1, "q nondecreasing on [0, x0]");

    VerificationReport r = detail::make_report(Theorem::t1, p, p.domain_end(), opts);
    r.x0 = x0;
    const double q_min = std::min(0.0, min_max(p).q_min);
    r.tolerances.eligibility_threshold = detail::eligibility_threshold(q_min);
    const double z_lo = q_min < 0.0 ? std::sqrt(-2.0 * q_min) : std::numbers::pi;
    const double z_hi = 4.0 * z_lo;
    for (int i = 0; i < z_count; ++i) {
        const double t = z_count == 1 ? 0.0 : static_cast<double>(i) / (z_count - 1);
        const double z = i + 1 == z_count && z_count > 1 ? z_hi : z_lo * std::pow(z_hi / z_lo, t);
        Check c;
        c.z = z;
        c.lhs = 0.0;
        c.rhs = theta_dot(p, z, x0, opts.solver.rel_tol);
        c.margin = c.lhs - c.rhs;
        r.checks.push_back(c);
    }
    detail::finish(r);
    return r;
}

namespace detail {

// Lower ratio bound over pairs m < n whose lower eigenvalue clears `threshold`.
template <class Bound>
void ratio_pairs(VerificationReport& r, const std::vector<double>& lambda, double threshold, Bound&& bound) {
    const int n_max = static_cast<int>(lambda.size());
    for (int m = 1; m <= n_max; ++m)
        for (int n = m + 1; n <= n_max; ++n) {
            if (lambda[static_cast<std::size_t>(m - 1)] >= threshold)
                add_ratio_check(r, lambda, m, n, bound(m, n));
            else
                r.ineligible.push_back({m, n});
        }
}

}  // namespace detail

/// Dirichlet ratio bound n^2/m^2 on the pairs with lambda_m >= -2 q_min.
inline VerificationReport check_theorem2(const Potential& p, int n_max, const HarnessOptions& opts = {}) {
    const ShapeReport shape = classify(p);
    detail::require(shape.nonpositive, Theorem::t2, "q <= 0");
    detail::require(shape.single_barrier.has_value(), Theorem::t2, "a single-barrier potential");

    const double ell = p.domain_end();
    VerificationReport r = detail::make_report(Theorem::t2, p, ell, opts);
    const double threshold = detail::eligibility_threshold(min_max(p).q_min);
    r.tolerances.eligibility_threshold = threshold;
    const auto lambda = compute_spectrum(p, n_max, BoundaryCondition::dirichlet, ell, opts);
    detail::ratio_pairs(r, lambda, threshold, [](int m, int n) { return detail::sq(n) / detail::sq(m); });
    detail::finish(r);
    return r;
}

/// Largest l (to bisection resolution) with lambda_1(l) > 0 and lambda_1(l) >= -2 min_[0, l] q.
///
/// Scans l = k / grid downward from the full interval, then bisects between the first
/// admissible grid point and its inadmissible right neighbour.
inline L0Result find_l0(const Potential& p, int grid, const HarnessOptions& opts = {}) {
    if (grid < 1) throw ParameterError("grid must be >= 1");
    const ShapeReport shape = classify(p);
    detail::require(shape.nonpositive, Theorem::t3, "q <= 0");
    detail::require(shape.single_barrier.has_value(), Theorem::t3, "a single-barrier potential");

    struct Probe {
        bool ok;
        double lambda1;
        double threshold;
    };
    auto probe = [&](double ell) -> Probe {
        const double threshold = detail::eligibility_threshold(min_max(p, 0.0, ell).q_min);
        double lambda1 = 0.0;
        if (opts.source == SpectrumSource::oracle) {
            lambda1 = refined_eigenvalue(p, ell, 1, opts.oracle_nodes, BoundaryCondition::dirichlet);
        } else {
            try {
                lambda1 = solve_one(p, 1, BoundaryCondition::dirichlet, ell, opts.solver).lambda;
            } catch (const NegativeSpectrumSuspected&) {
                return {false, 0.0, threshold};
            }
        }
        return {lambda1 > 0.0 && lambda1 >= threshold, lambda1, threshold};
    };

    const double full = p.domain_end();
    Probe at = probe(full);
    if (at.ok) return {full, at.lambda1, at.threshold, 0.0};

    double lo = 0.0, hi = full;
    Probe lo_probe{false, 0.0, 0.0};
    for (int k = grid - 1; k >= 1; --k) {
        const double ell = full * k / grid;
        Probe pr = probe(ell);
        if (pr.ok) {
            lo = ell;
            lo_probe = pr;
            break;
        }
        hi = ell;
    }
    for (int halvings = 0; !lo_probe.ok; ++halvings) {
        if (halvings > 60) throw Error("find_l0: no admissible interval length found");
        const double ell = 0.5 * hi;
        Probe pr = probe(ell);
        if (pr.ok) {
            lo = ell;
            lo_probe = pr;
        } else {
            hi = ell;
        }
    }
    for (int it = 0; it < 60 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        Probe pr = probe(mid);
        if (pr.ok) {
            lo = mid;
            lo_probe = pr;
        } else {
            hi = mid;
        }
    }
    return {lo, lo_probe.lambda1, lo_probe.threshold, hi - lo};
}

/// Ratio bound n^2/m^2 on all pairs of the Dirichlet spectrum on [0, l0].
inline VerificationReport check_theorem3(const Potential& p, int n_max, const HarnessOptions& opts = {}) {
    const L0Result l0 = find_l0(p, opts.l0_grid, opts);
    VerificationReport r = detail::make_report(Theorem::t3, p, l0.ell0, opts);
    r.l0 = l0;
    r.tolerances.eligibility_threshold = l0.threshold;
    const auto lambda = compute_spectrum(p, n_max, BoundaryCondition::dirichlet, l0.ell0, opts);
    detail::ratio_pairs(r, lambda, -std::numeric_limits<double>::infinity(),
                        [](int m, int n) { return detail::sq(n) / detail::sq(m); });
    detail::finish(r);
    return r;
}

/// Dirichlet-Neumann ratio bound (2n-1)^2/(2m-1)^2 on the pairs with lambda_m >= -2 q_min.
inline VerificationReport check_theorem4(const Potential& p, int n_max, const HarnessOptions& opts = {}) {
    const ShapeReport shape = classify(p);
    detail::require(shape.nonpositive, Theorem::t4, "q <= 0");
    detail::require(shape.monotone_increasing, Theorem::t4, "a nondecreasing potential");

    const double ell = p.domain_end();
    VerificationReport r = detail::make_report(Theorem::t4, p, ell, opts);
    const double threshold = detail::eligibility_threshold(min_max(p).q_min);
    r.tolerances.eligibility_threshold = threshold;
    const auto lambda = compute_spectrum(p, n_max, BoundaryCondition::dirichlet_neumann, ell, opts);
    detail::ratio_pairs(r, lambda, threshold,
                        [](int m, int n) { return detail::sq(2.0 * n - 1.0) / detail::sq(2.0 * m - 1.0); });
    detail::finish(r);
    return r;
}

/// The classical Dirichlet ratio bounds for sign-definite potentials.
inline VerificationReport check_cited_bounds(const Potential& p, int n_max, Theorem which,
                                             const HarnessOptions& opts = {}) {
    const ShapeReport shape = classify(p);
    switch (which) {
        case Theorem::ab_n2:
        case Theorem::ab_ceil:
            detail::require(shape.nonnegative, which, "q >= 0");
            break;
        case Theorem::chen_floor:
            detail::require(shape.nonpositive, which, "q <= 0");
            break;
        case Theorem::hk_singlewell:
            detail::require(shape.nonnegative, which, "q >= 0");
            detail::require(shape.single_well.has_value(), which, "a single-well potential");
            break;
        default:
            throw ParameterError("check_cited_bounds: not a cited bound");
    }

    const double ell = p.domain_end();
    VerificationReport r = detail::make_report(which, p, ell, opts);
    const auto lambda = compute_spectrum(p, n_max, BoundaryCondition::dirichlet, ell, opts);
    using detail::sq;
    switch (which) {
        case Theorem::ab_n2:
            for (int n = 2; n <= n_max; ++n) detail::add_ratio_check(r, lambda, 1, n, sq(n));
            break;
        case Theorem::ab_ceil:
            detail::ratio_pairs(r, lambda, -std::numeric_limits<double>::infinity(),
                                [](int m, int n) { return sq((n + m - 1) / m); });
            break;
        case Theorem::chen_floor:
            // Ratios are only meaningful above a positive lower eigenvalue.
            detail::ratio_pairs(r, lambda, std::numeric_limits<double>::min(),
                                [](int m, int n) { return sq(n / m); });
            break;
        case Theorem::hk_singlewell:
            detail::ratio_pairs(r, lambda, -std::numeric_limits<double>::infinity(),
                                [](int m, int n) { return sq(n) / sq(m); });
            break;
        default:
            break;
    }
    detail::finish(r);
    return r;
}

/// Parameters for the generic dispatcher.
struct VerifyRequest {
    Theorem theorem = Theorem::t2;
    int n_max = 10;
    double x0 = 1.0;  // T1 only
    int z_count = 64; // T1 only
};

inline VerificationReport verify(const Potential& p, const VerifyRequest& req, const HarnessOptions& opts = {}) {
    switch (req.theorem) {
        case Theorem::t1: return check_theorem1(p, req.x0, req.z_count, opts);
        case Theorem::t2: return check_theorem2(p, req.n_max, opts);
        case Theorem::t3: return check_theorem3(p, req.n_max, opts);
        case Theorem::t4: return check_theorem4(p, req.n_max, opts);
        default: return check_cited_bounds(p, req.n_max, req.theorem, opts);
    }
}

}  // namespace slratio
