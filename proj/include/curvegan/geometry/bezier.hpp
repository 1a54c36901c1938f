#pragma once

#include "curvegan/geometry/curve.hpp"

#include <span>
#include <vector>

namespace curvegan::geom {

inline constexpr int kMaxDegree = 63;

// Denominators of the rational form below this value are treated as degenerate.
inline constexpr double kDegenerateDenominator = 1e-12;

// Control polygon and positive weights of one rational Bezier curve.
struct ControlNet {
    std::vector<Point> control;
    std::vector<double> weights;

    std::size_t degree() const { return control.empty() ? 0 : control.size() - 1; }
    void validate() const;
};

// Control net plus the m+1 parameter values at which the curve is sampled.
struct BezierParams {
    ControlNet net;
    std::vector<double> u;

    void validate() const;
};

/// log C(n, i) from a cached log-gamma table; valid for 0 <= i <= n <= 64.
double log_binomial(int n, int i);

/// Bernstein coefficients C(n,i) u^i (1-u)^(n-i) for i = 0..n.
/// Throws DomainError for u outside [0,1] or n outside [1, 63].
std::vector<double> bernstein_basis(int n, double u);

/// Unchecked variant writing n+1 coefficients into `out`; accepts n = 0.
void bernstein_into(int n, double u, std::span<double> out);

/// Evaluates the rational form at a single parameter value.
Point rational_bezier_point(std::span<const Point> control, std::span<const double> weights, double u);

/// Samples the rational curve at every parameter value in params.u.
Curve rational_bezier_sample(const BezierParams& params);

/// Repeated linear interpolation of the control polygon (unit weights, no binomials).
Point decasteljau_eval(std::span<const Point> control, double u);

} // namespace curvegan::geom
