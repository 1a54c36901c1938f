#include "curvegan/geometry/bezier.hpp"

#include "curvegan/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace curvegan::geom {
namespace {

constexpr int kTableSize = kMaxDegree + 2;

const std::array<double, kTableSize + 1>& log_factorials() {
    static const auto table = [] {
        std::array<double, kTableSize + 1> t{};
        for (int k = 0; k <= kTableSize; ++k) t[k] = std::lgamma(static_cast<double>(k) + 1.0);
        return t;
    }();
    return table;
}

void check_unit(double u, const char* what) {
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError(std::string(what) + ": parameter " + std::to_string(u) + " outside [0,1]");
}

} // namespace

void ControlNet::validate() const {
    if (control.size() < 2) throw DomainError("control net needs at least two control points");
    if (static_cast<int>(degree()) > kMaxDegree)
        throw DomainError("Bezier degree " + std::to_string(degree()) + " exceeds " + std::to_string(kMaxDegree));
    if (weights.size() != control.size())
        throw ShapeError("weights length " + std::to_string(weights.size()) + " != control point count " +
                         std::to_string(control.size()));
    for (double w : weights)
        if (!(w > 0.0)) throw DomainError("rational Bezier weights must be strictly positive");
}

void BezierParams::validate() const {
    net.validate();
    if (u.size() < 2) throw DomainError("need at least two parameter values");
    if (u.front() != 0.0 || u.back() != 1.0) throw DomainError("parameter values must start at 0 and end at 1");
    for (std::size_t j = 0; j < u.size(); ++j) {
        check_unit(u[j], "BezierParams");
        if (j > 0 && u[j] < u[j - 1]) throw DomainError("parameter values must be nondecreasing");
    }
}

double log_binomial(int n, int i) {
    const auto& lf = log_factorials();
    return lf[n] - lf[i] - lf[n - i];
}

void bernstein_into(int n, double u, std::span<double> out) {
    if (u <= 0.0) {
        std::fill(out.begin(), out.begin() + n + 1, 0.0);
        out[0] = 1.0;
        return;
    }
    if (u >= 1.0) {
        std::fill(out.begin(), out.begin() + n + 1, 0.0);
        out[n] = 1.0;
        return;
    }
    const double lu = std::log(u);
    const double lv = std::log1p(-u);
    for (int i = 0; i <= n; ++i) out[i] = std::exp(log_binomial(n, i) + i * lu + (n - i) * lv);
}

std::vector<double> bernstein_basis(int n, double u) {
    if (n < 1 || n > kMaxDegree) throw DomainError("Bernstein degree " + std::to_string(n) + " outside [1,63]");
    check_unit(u, "bernstein_basis");
    std::vector<double> out(n + 1);
    bernstein_into(n, u, out);
    return out;
}

Point rational_bezier_point(std::span<const Point> control, std::span<const double> weights, double u) {
    const int n = static_cast<int>(control.size()) - 1;
    std::array<double, kMaxDegree + 1> basis{};
    bernstein_into(n, u, basis);
    double nx = 0.0, ny = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double bw = basis[i] * weights[i];
        nx += bw * control[i].x;
        ny += bw * control[i].y;
        den += bw;
    }
    if (den < kDegenerateDenominator)
        throw DegenerateCurveError("rational Bezier denominator " + std::to_string(den) + " at u=" + std::to_string(u));
    return {nx / den, ny / den};
}

Curve rational_bezier_sample(const BezierParams& params) {
    params.validate();
    Curve curve;
    curve.points.reserve(params.u.size());
    for (double u : params.u) curve.points.push_back(rational_bezier_point(params.net.control, params.net.weights, u));
    return curve;
}

Point decasteljau_eval(std::span<const Point> control, double u) {
    if (control.empty()) throw DomainError("de Casteljau needs at least one control point");
    check_unit(u, "decasteljau_eval");
    std::vector<Point> work(control.begin(), control.end());
    for (std::size_t level = work.size() - 1; level > 0; --level)
        for (std::size_t i = 0; i < level; ++i) work[i] = (1.0 - u) * work[i] + u * work[i + 1];
    return work[0];
}

} // namespace curvegan::geom
