#pragma once

// Central finite-difference oracle for graph gradients. Test-only.

#include "curvegan/autodiff/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace curvegan::testing {

struct GradCheckResult {
    bool ok = true;
    double worst_rel = 0.0;
    double worst_abs = 0.0;
    std::string worst_at;
};

// Compares analytic gradients of scalar `out` against central differences.
// An element passes when |analytic - numeric| <= abs_floor or the relative
// error is at most rel_tol.
inline GradCheckResult check_gradients(ad::Graph& g, ad::Var out, ad::Bindings bindings,
                                       const std::vector<std::string>& wrt, double h = 1e-5,
                                       double rel_tol = 1e-4, double abs_floor = 1e-6) {
    GradCheckResult result;
    const auto analytic = g.gradient(out, bindings, wrt);
    for (const auto& name : wrt) {
        auto& x = bindings.at(name);
        const auto& ga = analytic.at(name);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double orig = x[i];
            x[i] = orig + h;
            const double fp = g.evaluate(out, bindings).item();
            x[i] = orig - h;
            const double fm = g.evaluate(out, bindings).item();
            x[i] = orig;
            const double numeric = (fp - fm) / (2.0 * h);
            const double diff = std::abs(numeric - ga[i]);
            result.worst_abs = std::max(result.worst_abs, diff);
            if (diff <= abs_floor) continue;
            const double rel = diff / std::max(std::abs(numeric), std::abs(ga[i]));
            if (rel > result.worst_rel) {
                result.worst_rel = rel;
                result.worst_at = name + "[" + std::to_string(i) + "] analytic=" + std::to_string(ga[i]) +
                                  " numeric=" + std::to_string(numeric);
            }
            if (rel > rel_tol) result.ok = false;
        }
    }
    return result;
}

// Reduces any node to a scalar via a fixed random projection sum(y * R).
inline ad::Var random_projection(ad::Graph& g, ad::Var y, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ad::Tensor r(g.shape(y));
    for (auto& v : r.storage()) v = dist(rng);
    return g.sum(g.multiply(y, g.constant(std::move(r))));
}

inline ad::Tensor random_tensor(const ad::Shape& shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ad::Tensor t(shape);
    for (auto& v : t.storage()) v = dist(rng);
    return t;
}

// Random values with magnitude in [lo, hi] and random sign.
inline ad::Tensor away_from_zero(const ad::Shape& shape, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> mag(lo, hi);
    std::bernoulli_distribution sign(0.5);
    ad::Tensor t(shape);
    for (auto& v : t.storage()) v = sign(rng) ? mag(rng) : -mag(rng);
    return t;
}

} // namespace curvegan::testing
