#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "slratio/boundary.hpp"
#include "slratio/errors.hpp"
#include "slratio/potential.hpp"

namespace slratio {

/// Symmetric tridiagonal matrix given by its diagonal and (n - 1) off-diagonal entries.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const noexcept { return diag.size(); }
};

/// Number of eigenvalues of `t` strictly below sigma.
///
/// Counts negative pivots of the LDL^T factorisation of (T - sigma I). The pivot ratio
/// recurrence is the renormalised Sturm sequence p_k / p_{k-1}, so it cannot overflow.
/// Runs in extended precision: for fine grids the diagonal is ~1/h^2 and the low
/// eigenvalues would otherwise lose digits to cancellation.
inline std::size_t sturm_count(const Tridiagonal& t, double sigma) {
    using Real = long double;
    const std::size_t n = t.size();
    if (n == 0) return 0;
    Real bmax = 1.0L;
    for (double b : t.offdiag) bmax = std::max(bmax, static_cast<Real>(b) * b);
    const Real pivmin = std::numeric_limits<Real>::min() * bmax;
    const Real s = sigma;

    std::size_t count = 0;
    Real d = t.diag[0] - s;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0L) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const Real b = t.offdiag[i - 1];
        d = (t.diag[i] - s) - b * b / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0L) ++count;
    }
    return count;
}

/// Gershgorin interval containing the whole spectrum.
inline std::pair<double, double> gershgorin(const Tridiagonal& t) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(t.offdiag[i - 1]);
        if (i + 1 < t.size()) radius += std::abs(t.offdiag[i]);
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    return {lo, hi};
}

/// The k-th smallest eigenvalue (k >= 1) by Sturm-count bisection to relative width rel_tol.
inline double tridiagonal_eigenvalue(const Tridiagonal& t, std::size_t k, double rel_tol = 1e-12) {
    if (k == 0 || k > t.size()) throw ParameterError("eigenvalue index out of range");
    auto [lo, hi] = gershgorin(t);
    for (int it = 0; it < 256; ++it) {
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) >= k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Three-point discretisation of -y'' + q y on [0, l].
///
/// Dirichlet: nodes x_i = i h, h = l / (N + 1). Dirichlet-Neumann: nodes x_i = i h with
/// h = l / (N + 1/2), so that l lies midway between x_N and the mirror node x_{N+1};
/// y_{N+1} = y_N turns the last diagonal entry into q(x_N) + 1/h^2.
struct FdProblem {
    Tridiagonal matrix;
    double h = 0.0;
    double ell = 1.0;
    BoundaryCondition bc = BoundaryCondition::dirichlet;

    std::size_t nodes() const noexcept { return matrix.size(); }
};

inline constexpr std::size_t min_fd_nodes = 8;

inline double fd_step(double ell, std::size_t nodes, BoundaryCondition bc) {
    const double n = static_cast<double>(nodes);
    return bc == BoundaryCondition::dirichlet ? ell / (n + 1.0) : ell / (n + 0.5);
}

inline FdProblem build_fd_problem(const Potential& p, double ell, std::size_t nodes, BoundaryCondition bc) {
    if (nodes < min_fd_nodes) throw ParameterError("finite-difference grid needs at least 8 interior nodes");
    if (!(ell > 0.0 && ell <= p.domain_end())) throw DomainError("ell outside (0, domain end]");
    FdProblem fd;
    fd.h = fd_step(ell, nodes, bc);
    fd.ell = ell;
    fd.bc = bc;
    const double inv_h2 = 1.0 / (fd.h * fd.h);
    fd.matrix.diag.resize(nodes);
    fd.matrix.offdiag.assign(nodes - 1, -inv_h2);
    for (std::size_t i = 0; i < nodes; ++i)
        fd.matrix.diag[i] = p.value(static_cast<double>(i + 1) * fd.h) + 2.0 * inv_h2;
    if (bc == BoundaryCondition::dirichlet_neumann) fd.matrix.diag.back() -= inv_h2;
    return fd;
}

/// The n_max lowest eigenvalues of the discretised problem. Requires n_max <= N / 4.
inline std::vector<double> fd_eigenvalues(const Potential& p, double ell, std::size_t n_max, std::size_t nodes,
                                          BoundaryCondition bc) {
    if (n_max == 0) throw ParameterError("n_max must be >= 1");
    if (nodes < min_fd_nodes) throw ParameterError("finite-difference grid needs at least 8 interior nodes");
    if (4 * n_max > nodes) throw ParameterError("n_max exceeds N/4: discrete eigenvalues too inaccurate");
    const FdProblem fd = build_fd_problem(p, ell, nodes, bc);
    std::vector<double> out(n_max);
    for (std::size_t k = 1; k <= n_max; ++k) out[k - 1] = tridiagonal_eigenvalue(fd.matrix, k);
    return out;
}

/// Richardson combination of the O(h^2) discrete eigenvalues on grids N and 2N, using the
/// actual step ratio r = h_N / h_2N: (r^2 lambda_2N - lambda_N) / (r^2 - 1).
inline std::vector<double> refined_eigenvalues(const Potential& p, double ell, std::size_t n_max, std::size_t nodes,
                                               BoundaryCondition bc) {
    const auto coarse = fd_eigenvalues(p, ell, n_max, nodes, bc);
    const auto fine = fd_eigenvalues(p, ell, n_max, 2 * nodes, bc);
    const double r = fd_step(ell, nodes, bc) / fd_step(ell, 2 * nodes, bc);
    const double r2 = r * r;
    std::vector<double> out(n_max);
    for (std::size_t i = 0; i < n_max; ++i) out[i] = (r2 * fine[i] - coarse[i]) / (r2 - 1.0);
    return out;
}

inline double refined_eigenvalue(const Potential& p, double ell, std::size_t n, std::size_t nodes,
                                 BoundaryCondition bc) {
    if (n == 0) throw ParameterError("eigenvalue index must be >= 1");
    return refined_eigenvalues(p, ell, n, nodes, bc).back();
}

}  // namespace slratio
