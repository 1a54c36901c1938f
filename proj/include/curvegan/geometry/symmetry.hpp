#pragma once

#include "curvegan/geometry/bezier.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace curvegan::geom {

enum class SymmetryMode { None, AxisX, AxisY, Rotational };

std::string to_string(SymmetryMode mode);
SymmetryMode symmetry_mode_from_string(const std::string& name);

// How the full curve is assembled from the generated prim.
struct SymmetrySpec {
    SymmetryMode mode = SymmetryMode::None;
    std::size_t parts = 1;
    double angle = 0.0;  // radians, rotational mode only

    static SymmetrySpec none() { return {}; }
    static SymmetrySpec axis_x() { return {SymmetryMode::AxisX, 2, 0.0}; }
    static SymmetrySpec axis_y() { return {SymmetryMode::AxisY, 2, 0.0}; }
    static SymmetrySpec rotational(std::size_t parts);

    void validate() const;
};

enum class Axis { X, Y };

// P' = Q P S and w' = Q w: reversed order, reflected across the axis.
ControlNet mirror_params(const ControlNet& net, Axis axis);

// P' = P R with points as rows, R = [[cos, -sin], [sin, cos]].
std::vector<Point> rotate_params(std::span<const Point> control, double angle);

/// Control net of part `k` of the assembled curve (k = 0 is the prim).
ControlNet part_control_net(const ControlNet& prim, const SymmetrySpec& spec, std::size_t k);

/// Splits `total` sample points over `parts`, earlier parts taking the remainder.
std::vector<std::size_t> split_points(std::size_t total, std::size_t parts);

/// Samples every part with its own parameter vector and concatenates them in
/// traversal order. When `expected_points` is set the total must match it.
Curve assemble_full_curve(const ControlNet& prim, const SymmetrySpec& spec,
                          std::span<const std::vector<double>> per_part_u,
                          std::optional<std::size_t> expected_points = kCurvePoints);

} // namespace curvegan::geom
