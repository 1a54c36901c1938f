#include "curvegan/geometry/kumaraswamy.hpp"

#include "curvegan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace curvegan::geom {

void KumaraswamyMixture::validate() const {
    if (a.empty()) throw DomainError("Kumaraswamy mixture needs at least one component");
    if (b.size() != a.size() || c.size() != a.size()) throw ShapeError("Kumaraswamy a, b, c lengths differ");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !(b[i] > 0.0)) throw DomainError("Kumaraswamy shape parameters must be positive");
        if (c[i] < 0.0) throw DomainError("Kumaraswamy mixture weights must be nonnegative");
    }
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("Kumaraswamy mixture weights must sum to 1");
}

std::vector<double> uniform_grid(std::size_t count) {
    if (count < 2) throw DomainError("uniform grid needs at least two points");
    std::vector<double> grid(count);
    const double m = static_cast<double>(count - 1);
    for (std::size_t j = 0; j < count; ++j) grid[j] = static_cast<double>(j) / m;
    grid.back() = 1.0;
    return grid;
}

double kumaraswamy_cdf(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double xa = std::pow(x, a);
    return -std::expm1(b * std::log1p(-xa));
}

CdfPartials kumaraswamy_cdf_partials(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return {0.0, 0.0, 0.0};
    const double lx = std::log(x);
    const double xa = std::exp(a * lx);
    const double l1 = std::log1p(-xa);           // log(1 - x^a)
    const double tail = std::exp(b * l1);        // (1 - x^a)^b
    const double tail_m1 = std::exp((b - 1.0) * l1);
    return {
        a * b * xa / x * tail_m1,
        b * tail_m1 * xa * lx,
        -tail * l1,
    };
}

std::vector<double> kumaraswamy_transform(std::span<const double> u_prime, const KumaraswamyMixture& mix) {
    mix.validate();
    std::vector<double> u(u_prime.size(), 0.0);
    for (std::size_t j = 0; j < u_prime.size(); ++j) {
        if (!(u_prime[j] >= 0.0 && u_prime[j] <= 1.0)) throw DomainError("uniform parameter outside [0,1]");
        if (u_prime[j] == 1.0) {
            u[j] = 1.0;  // sum(c) == 1 by invariant
            continue;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < mix.components(); ++i)
            acc += mix.c[i] * kumaraswamy_cdf(u_prime[j], mix.a[i], mix.b[i]);
        u[j] = std::clamp(acc, 0.0, 1.0);
    }
    return u;
}

} // namespace curvegan::geom
