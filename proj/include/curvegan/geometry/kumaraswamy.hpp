#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curvegan::geom {

// Convex combination of Kumaraswamy CDFs used to warp a uniform parameter grid.
struct KumaraswamyMixture {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;

    std::size_t components() const noexcept { return a.size(); }
    void validate() const;
};

/// [0, 1/m, ..., 1] with `count` = m+1 entries and both endpoints exact.
std::vector<double> uniform_grid(std::size_t count);

/// 1 - (1 - x^a)^b, evaluated through log1p/expm1.
double kumaraswamy_cdf(double x, double a, double b);

/// Partial derivatives of kumaraswamy_cdf with respect to x, a and b.
struct CdfPartials {
    double dx;
    double da;
    double db;
};
CdfPartials kumaraswamy_cdf_partials(double x, double a, double b);

/// Maps each uniform value through the mixture. Output is clamped to [0,1]
/// so rounding in sum(c) cannot push the last value past 1.
std::vector<double> kumaraswamy_transform(std::span<const double> u_prime, const KumaraswamyMixture& mix);

} // namespace curvegan::geom
