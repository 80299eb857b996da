#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slratio/errors.hpp"
#include "slratio/format.hpp"

namespace slratio {

/// A continuous potential q(x) on [0, 1], restricted to the active interval [0, domain_end].
///
/// Analytic families are evaluated from their closed form. Sampled potentials are
/// piecewise linear through their nodes. Instances are immutable; the `with_*` and
/// `plus_constant` members return modified copies.
class Potential {
public:
    enum class Kind { constant, barrier_sin, ramp, poly, sampled };

    /// q(x) = c
    static Potential constant(double c) { return Potential(Kind::constant, {c}); }

    /// q(x) = a + b sin(pi x). b > 0 gives a single barrier peaked at 1/2, b < 0 a single well.
    static Potential barrier_sin(double a, double b) { return Potential(Kind::barrier_sin, {a, b}); }

    /// q(x) = a + b x
    static Potential ramp(double a, double b) { return Potential(Kind::ramp, {a, b}); }

    /// q(x) = sum_k coeffs[k] x^k
    static Potential poly(std::vector<double> coeffs) {
        if (coeffs.empty()) coeffs.push_back(0.0);
        return Potential(Kind::poly, std::move(coeffs));
    }

    /// Piecewise-linear potential through (xs[i], qs[i]); xs must start at 0, end at 1 and
    /// be strictly increasing.
    static Potential sampled(std::vector<double> xs, std::vector<double> qs) {
        if (xs.size() != qs.size()) throw ParameterError("sampled potential: x and q sizes differ");
        if (xs.size() < 2) throw ParameterError("sampled potential needs at least 2 points");
        if (xs.front() != 0.0) throw ParameterError("sampled potential: domain must start at 0");
        if (xs.back() != 1.0) throw ParameterError("sampled potential: domain must end at 1");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1]))
                throw ParameterError("sampled potential: x must be strictly increasing");
        for (double q : qs)
            if (!std::isfinite(q)) throw ParameterError("sampled potential: non-finite value");
        Potential p(Kind::sampled, std::move(qs));
        p.nodes_ = std::move(xs);
        return p;
    }

    Kind kind() const noexcept { return kind_; }
    bool analytic() const noexcept { return kind_ != Kind::sampled; }
    double domain_end() const noexcept { return domain_end_; }

    /// Family parameters (for sampled potentials: the node values).
    std::span<const double> params() const noexcept { return params_; }
    /// Node abscissae of a sampled potential; empty for analytic families.
    std::span<const double> nodes() const noexcept { return nodes_; }

    /// Copy restricted to [0, ell].
    Potential with_domain_end(double ell) const {
        if (!(ell > 0.0 && ell <= 1.0)) throw DomainError("domain end must lie in (0, 1]");
        Potential p = *this;
        p.domain_end_ = ell;
        return p;
    }

    /// q + c, same family.
    Potential plus_constant(double c) const {
        Potential p = *this;
        switch (kind_) {
            case Kind::constant:
            case Kind::barrier_sin:
            case Kind::ramp:
            case Kind::poly:
                p.params_[0] += c;
                break;
            case Kind::sampled:
                for (double& q : p.params_) q += c;
                break;
        }
        return p;
    }

    /// Evaluates without the domain check. Callers guarantee x in [0, 1].
    double value(double x) const noexcept {
        switch (kind_) {
            case Kind::constant:
                return params_[0];
            case Kind::barrier_sin:
                return params_[0] + params_[1] * std::sin(std::numbers::pi * x);
            case Kind::ramp:
                return params_[0] + params_[1] * x;
            case Kind::poly: {
                double acc = 0.0;
                for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * x + *it;
                return acc;
            }
            case Kind::sampled: {
                auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
                if (it == nodes_.begin()) return params_.front();
                if (it == nodes_.end()) return params_.back();
                const auto i = static_cast<std::size_t>(it - nodes_.begin());
                const double x0 = nodes_[i - 1], x1 = nodes_[i];
                const double t = (x - x0) / (x1 - x0);
                return params_[i - 1] + t * (params_[i] - params_[i - 1]);
            }
        }
        return 0.0;
    }

    double operator()(double x) const {
        if (!(x >= 0.0 && x <= domain_end_))
            throw DomainError("x = " + format_real(x) + " outside [0, " + format_real(domain_end_) + "]");
        return value(x);
    }

    /// Interpolation kinks strictly inside (a, b); empty for analytic families.
    std::vector<double> kinks(double a, double b) const {
        std::vector<double> out;
        for (double x : nodes_)
            if (x > a && x < b) out.push_back(x);
        return out;
    }

    /// Mini-syntax descriptor, e.g. "barrier_sin:-5,4" or "sampled:17".
    std::string describe() const {
        auto join = [](std::span<const double> v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ',';
                s += format_real(v[i]);
            }
            return s;
        };
        switch (kind_) {
            case Kind::constant: return "constant:" + join(params_);
            case Kind::barrier_sin: return "barrier_sin:" + join(params_);
            case Kind::ramp: return "ramp:" + join(params_);
            case Kind::poly: return "poly:" + join(params_);
            case Kind::sampled: return "sampled:" + std::to_string(nodes_.size());
        }
        return {};
    }

private:
    Potential(Kind k, std::vector<double> params) : kind_(k), params_(std::move(params)) {
        for (double v : params_)
            if (!std::isfinite(v)) throw ParameterError("potential parameters must be finite");
    }

    Kind kind_;
    std::vector<double> params_;
    std::vector<double> nodes_;
    double domain_end_ = 1.0;
};

inline double eval(const Potential& p, double x) { return p(x); }

struct Extrema {
    double q_min;
    double q_max;
    double argmin;
    double argmax;
};

namespace detail {

// Golden-section search for a maximum of f on [lo, hi].
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iterations = 60) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && hi - lo > 1e-15; ++i) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Evaluation abscissae used for scanning [a, b]: a uniform grid for analytic families,
// the nodes (plus the end points) for sampled ones.
inline std::vector<double> scan_points(const Potential& p, double a, double b, std::size_t resolution) {
    std::vector<double> xs;
    if (p.analytic()) {
        xs.reserve(resolution + 1);
        for (std::size_t i = 0; i <= resolution; ++i)
            xs.push_back(i == resolution ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(resolution));
    } else {
        xs.push_back(a);
        for (double x : p.kinks(a, b)) xs.push_back(x);
        xs.push_back(b);
    }
    return xs;
}

// Refines a grid extremum at index i of xs with a golden-section step on the neighbouring
// cells. sign = +1 for a maximum, -1 for a minimum. Keeps the grid point unless strictly beaten.
inline std::pair<double, double> refine_extremum(const Potential& p, const std::vector<double>& xs,
                                                 std::size_t i, double sign) {
    double best_x = xs[i], best_v = p.value(xs[i]);
    if (!p.analytic() || xs.size() < 3) return {best_x, best_v};
    const double lo = xs[i == 0 ? 0 : i - 1];
    const double hi = xs[std::min(i + 1, xs.size() - 1)];
    auto x = golden_max([&](double t) { return sign * p.value(t); }, lo, hi).first;
    if (sign * p.value(x) > sign * best_v) {
        best_x = x;
        best_v = p.value(x);
    }
    return {best_x, best_v};
}

}  // namespace detail

/// Extrema of q over [a, b]: dense scan (analytic) or node scan (sampled), with a
/// golden-section refinement on analytic families. Ties resolve to the smallest x.
inline Extrema min_max(const Potential& p, double a, double b, std::size_t resolution = 2048) {
    if (!(a >= 0.0 && b <= p.domain_end() && a < b))
        throw DomainError("min_max: need 0 <= a < b <= domain end");
    const auto xs = detail::scan_points(p, a, b, resolution);
    std::size_t imin = 0, imax = 0;
    double vmin = p.value(xs[0]), vmax = vmin;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double v = p.value(xs[i]);
        if (v < vmin) vmin = v, imin = i;
        if (v > vmax) vmax = v, imax = i;
    }
    auto [xmin, qmin] = detail::refine_extremum(p, xs, imin, -1.0);
    auto [xmax, qmax] = detail::refine_extremum(p, xs, imax, +1.0);
    return {qmin, qmax, xmin, xmax};
}

inline Extrema min_max(const Potential& p) { return min_max(p, 0.0, p.domain_end()); }

struct ShapeReport {
    bool nonpositive = false;
    bool nonnegative = false;
    bool monotone_increasing = false;
    std::optional<double> single_well;     // trough x0
    std::optional<double> single_barrier;  // peak x0
    // Set when the detected x0 sits at an end point (purely monotone profile).
    bool well_at_endpoint = false;
    bool barrier_at_endpoint = false;
    double tolerance = 0.0;
};

/// Default classification tolerance: evaluation noise for analytic families, none for nodes.
inline double default_shape_tolerance(const Potential& p) { return p.analytic() ? 1e-9 : 0.0; }

namespace detail {

inline bool nondecreasing(std::span<const double> v, double tol) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] - v[i - 1] < -tol) return false;
    return true;
}

inline bool nonincreasing(std::span<const double> v, double tol) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] - v[i - 1] > tol) return false;
    return true;
}

}  // namespace detail

/// Weak monotonicity of q on [a, b] up to tol.
inline bool is_nondecreasing_on(const Potential& p, double a, double b, double tol,
                                std::size_t resolution = 2048) {
    if (!(a >= 0.0 && b <= p.domain_end() && a <= b)) throw DomainError("is_nondecreasing_on: bad interval");
    if (a == b) return true;
    const auto xs = detail::scan_points(p, a, b, resolution);
    std::vector<double> v(xs.size());
    std::transform(xs.begin(), xs.end(), v.begin(), [&](double x) { return p.value(x); });
    return detail::nondecreasing(v, tol);
}

/// Sign and shape predicates of q on [0, domain_end], decided on the scan grid.
inline ShapeReport classify(const Potential& p, double tol, std::size_t resolution = 2048) {
    if (!(tol >= 0.0)) throw ParameterError("classify: tolerance must be >= 0");
    const double ell = p.domain_end();
    const auto xs = detail::scan_points(p, 0.0, ell, resolution);
    std::vector<double> v(xs.size());
    std::transform(xs.begin(), xs.end(), v.begin(), [&](double x) { return p.value(x); });

    ShapeReport r;
    r.tolerance = tol;
    const auto imax = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const auto imin = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    r.nonpositive = v[imax] <= tol;
    r.nonnegative = v[imin] >= -tol;
    r.monotone_increasing = detail::nondecreasing(v, tol);

    const std::span<const double> all(v);
    if (detail::nondecreasing(all.first(imax + 1), tol) && detail::nonincreasing(all.subspan(imax), tol)) {
        const double x0 = detail::refine_extremum(p, xs, imax, +1.0).first;
        r.single_barrier = x0;
        r.barrier_at_endpoint = imax == 0 || imax + 1 == xs.size();
    }
    if (detail::nonincreasing(all.first(imin + 1), tol) && detail::nondecreasing(all.subspan(imin), tol)) {
        const double x0 = detail::refine_extremum(p, xs, imin, -1.0).first;
        r.single_well = x0;
        r.well_at_endpoint = imin == 0 || imin + 1 == xs.size();
    }
    return r;
}

inline ShapeReport classify(const Potential& p) { return classify(p, default_shape_tolerance(p)); }

/// Reads "x,q" rows (UTF-8, '#' starts a comment) into a sampled potential.
inline Potential load_samples(std::istream& in) {
    std::vector<double> xs, qs;
    std::size_t last_line = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        // U+2212 MINUS SIGN -> '-'
        for (std::size_t pos; (pos = line.find("\xE2\x88\x92")) != std::string::npos;) line.replace(pos, 3, "-");
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ParseError(lineno, "expected exactly two fields \"x,q\"");
        double x = 0.0, q = 0.0;
        if (!parse_real(std::string_view(line).substr(0, comma), x))
            throw ParseError(lineno, "malformed x value");
        if (!parse_real(std::string_view(line).substr(comma + 1), q))
            throw ParseError(lineno, "malformed q value");
        if (x < 0.0 || x > 1.0) throw ParseError(lineno, "x = " + format_real(x) + " outside [0, 1]");
        if (xs.empty()) {
            if (x != 0.0) throw ParseError(lineno, "domain must start at 0");
        } else if (x == xs.back()) {
            throw ParseError(lineno, "duplicate x = " + format_real(x));
        } else if (x < xs.back()) {
            throw ParseError(lineno, "rows not sorted by x");
        }
        xs.push_back(x);
        qs.push_back(q);
        last_line = lineno;
    }
    if (xs.size() < 2) throw ParseError(lineno, "need at least 2 samples");
    if (xs.back() != 1.0) throw ParseError(last_line, "domain must end at 1");
    return Potential::sampled(std::move(xs), std::move(qs));
}

}  // namespace slratio
