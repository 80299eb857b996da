#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace slratio {

/// Separated boundary conditions at x = 0 and x = l. y(0) = 0 in both cases.
enum class BoundaryCondition {
    dirichlet,          // y(l) = 0
    dirichlet_neumann,  // y'(l) = 0
};

/// Terminal phase that marks the n-th eigenvalue: n pi for Dirichlet, (n - 1/2) pi for y'(l) = 0.
inline double phase_target(BoundaryCondition bc, int n) {
    const double k = bc == BoundaryCondition::dirichlet ? n : n - 0.5;
    return k * std::numbers::pi;
}

inline std::string_view to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::dirichlet ? "dirichlet" : "dirichlet_neumann";
}

inline std::optional<BoundaryCondition> parse_boundary_condition(std::string_view s) {
    if (s == "dirichlet" || s == "d") return BoundaryCondition::dirichlet;
    if (s == "dirichlet_neumann" || s == "dirichlet-neumann" || s == "dn") return BoundaryCondition::dirichlet_neumann;
    return std::nullopt;
}

}  // namespace slratio
