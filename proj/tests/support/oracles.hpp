#pragma once

// Test-only reference computations. Nothing here calls the adaptive integrator, the
// root finder or the Sturm bisection under test.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "slratio/potential.hpp"

namespace slratio::ref {

struct PhaseAmplitude {
    double phi;
    double log_r;
};

/// Classical fixed-step RK4 on (phi, log r) from 0 to x_end with the given step count.
/// With a fixed step sequence the result is a smooth function of z, which makes it a
/// sound base for finite differences in z.
inline PhaseAmplitude rk4_phase(const Potential& p, double z, double x_end, std::size_t steps) {
    auto f = [&](double x, const std::array<double, 2>& u) {
        const double q = p.value(x);
        const double s = std::sin(u[0]), c = std::cos(u[0]);
        return std::array<double, 2>{z - q / z * s * s, q / z * s * c};
    };
    std::array<double, 2> u{0.0, -std::log(z)};
    const double h = x_end / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double x = h * static_cast<double>(i);
        auto add = [](const std::array<double, 2>& a, double s, const std::array<double, 2>& b) {
            return std::array<double, 2>{a[0] + s * b[0], a[1] + s * b[1]};
        };
        const auto k1 = f(x, u);
        const auto k2 = f(x + h / 2, add(u, h / 2, k1));
        const auto k3 = f(x + h / 2, add(u, h / 2, k2));
        const auto k4 = f(x + h, add(u, h, k3));
        for (int j = 0; j < 2; ++j) u[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return {u[0], u[1]};
}

/// Central difference of the RK4 phase in z.
inline double fd_phi_dot(const Potential& p, double z, double x, double h = 1e-5, std::size_t steps = 20000) {
    return (rk4_phase(p, z + h, x, steps).phi - rk4_phase(p, z - h, x, steps).phi) / (2 * h);
}

/// Central difference of phi / z in z.
inline double fd_theta_dot(const Potential& p, double z, double x, double h = 1e-5, std::size_t steps = 20000) {
    return (rk4_phase(p, z + h, x, steps).phi / (z + h) - rk4_phase(p, z - h, x, steps).phi / (z - h)) / (2 * h);
}

/// Exact eigenvalues of the Dirichlet three-point Laplacian with N interior nodes on [0, ell]:
/// 4 sin^2(k pi h / (2 ell)) / h^2, h = ell / (N + 1).
inline double discrete_laplacian_eigenvalue(std::size_t k, std::size_t nodes, double ell = 1.0) {
    const double h = ell / (static_cast<double>(nodes) + 1.0);
    const double s = std::sin(static_cast<double>(k) * std::numbers::pi * h / (2.0 * ell));
    return 4.0 * s * s / (h * h);
}

/// Same for the mirror-node Dirichlet-Neumann grid, h = ell / (N + 1/2), wave number (k - 1/2) pi / ell.
inline double discrete_dn_laplacian_eigenvalue(std::size_t k, std::size_t nodes, double ell = 1.0) {
    const double h = ell / (static_cast<double>(nodes) + 0.5);
    const double w = (static_cast<double>(k) - 0.5) * std::numbers::pi / ell;
    const double s = std::sin(0.5 * w * h);
    return 4.0 * s * s / (h * h);
}

/// All eigenvalues of a dense symmetric matrix (Eigen's self-adjoint QR).
inline std::vector<double> dense_eigenvalues(const std::vector<double>& diag, const std::vector<double>& off) {
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

/// Random nonpositive single-barrier potential sampled on `points` uniform nodes: values
/// rise (weakly) to a peak at a random interior node, then fall.
inline Potential random_single_barrier(std::mt19937_64& rng, std::size_t points = 17, double depth = 6.0) {
    std::uniform_int_distribution<std::size_t> peak_dist(2, points - 3);
    std::uniform_real_distribution<double> step(0.0, 1.0);
    const std::size_t peak = peak_dist(rng);
    std::vector<double> xs(points), qs(points);
    for (std::size_t i = 0; i < points; ++i) xs[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    xs.back() = 1.0;
    double top = -std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    qs[peak] = top;
    double v = top;
    for (std::size_t i = peak; i-- > 0;) {
        v -= step(rng) * depth / static_cast<double>(points);
        qs[i] = v;
    }
    v = top;
    for (std::size_t i = peak + 1; i < points; ++i) {
        v -= step(rng) * depth / static_cast<double>(points);
        qs[i] = v;
    }
    return Potential::sampled(std::move(xs), std::move(qs));
}

}  // namespace slratio::ref
