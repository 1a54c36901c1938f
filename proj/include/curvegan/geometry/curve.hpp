#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace curvegan::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// A design represented as an ordered sequence of 2-D points.
struct Curve {
    std::vector<Point> points;

    std::size_t size() const noexcept { return points.size(); }
    bool all_finite() const {
        for (const auto& p : points)
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
        return true;
    }
    friend bool operator==(const Curve&, const Curve&) = default;
};

// Fixed point count of every dataset sample and generated design.
inline constexpr std::size_t kCurvePoints = 64;

} // namespace curvegan::geom
