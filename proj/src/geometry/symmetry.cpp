#include "curvegan/geometry/symmetry.hpp"

#include "curvegan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace curvegan::geom {

std::string to_string(SymmetryMode mode) {
    switch (mode) {
    case SymmetryMode::None: return "none";
    case SymmetryMode::AxisX: return "axis-x";
    case SymmetryMode::AxisY: return "axis-y";
    case SymmetryMode::Rotational: return "rotational";
    }
    return "none";
}

SymmetryMode symmetry_mode_from_string(const std::string& name) {
    if (name == "none") return SymmetryMode::None;
    if (name == "axis-x") return SymmetryMode::AxisX;
    if (name == "axis-y") return SymmetryMode::AxisY;
    if (name == "rotational") return SymmetryMode::Rotational;
    throw DomainError("unknown symmetry mode '" + name + "'");
}

SymmetrySpec SymmetrySpec::rotational(std::size_t parts) {
    if (parts < 2) throw DomainError("rotational symmetry needs at least two parts");
    return {SymmetryMode::Rotational, parts, 2.0 * std::numbers::pi / static_cast<double>(parts)};
}

void SymmetrySpec::validate() const {
    switch (mode) {
    case SymmetryMode::None:
        if (parts != 1) throw DomainError("symmetry 'none' has exactly one part");
        break;
    case SymmetryMode::AxisX:
    case SymmetryMode::AxisY:
        if (parts != 2) throw DomainError("axis symmetry has exactly two parts");
        break;
    case SymmetryMode::Rotational:
        if (parts < 2) throw DomainError("rotational symmetry needs at least two parts");
        if (std::abs(static_cast<double>(parts) * angle - 2.0 * std::numbers::pi) > 1e-9)
            throw DomainError("rotational parts * angle must equal 2*pi");
        break;
    }
}

ControlNet mirror_params(const ControlNet& net, Axis axis) {
    ControlNet out;
    out.control.assign(net.control.rbegin(), net.control.rend());
    out.weights.assign(net.weights.rbegin(), net.weights.rend());
    for (auto& p : out.control) {
        if (axis == Axis::X)
            p.y = -p.y;
        else
            p.x = -p.x;
    }
    return out;
}

std::vector<Point> rotate_params(std::span<const Point> control, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    std::vector<Point> out;
    out.reserve(control.size());
    for (const auto& p : control) out.push_back({p.x * c + p.y * s, -p.x * s + p.y * c});
    return out;
}

ControlNet part_control_net(const ControlNet& prim, const SymmetrySpec& spec, std::size_t k) {
    if (k >= spec.parts) throw DomainError("part index out of range");
    if (k == 0) return prim;
    switch (spec.mode) {
    case SymmetryMode::AxisX: return mirror_params(prim, Axis::X);
    case SymmetryMode::AxisY: return mirror_params(prim, Axis::Y);
    case SymmetryMode::Rotational:
        return {rotate_params(prim.control, static_cast<double>(k) * spec.angle), prim.weights};
    case SymmetryMode::None: break;
    }
    throw DomainError("symmetry 'none' has no extra parts");
}

std::vector<std::size_t> split_points(std::size_t total, std::size_t parts) {
    if (parts == 0) throw DomainError("cannot split points over zero parts");
    std::vector<std::size_t> sizes(parts, total / parts);
    for (std::size_t k = 0; k < total % parts; ++k) ++sizes[k];
    return sizes;
}

Curve assemble_full_curve(const ControlNet& prim, const SymmetrySpec& spec,
                          std::span<const std::vector<double>> per_part_u, std::optional<std::size_t> expected_points) {
    spec.validate();
    prim.validate();
    if (per_part_u.size() != spec.parts)
        throw ShapeError("expected " + std::to_string(spec.parts) + " parameter vectors, got " +
                         std::to_string(per_part_u.size()));
    std::size_t total = 0;
    for (const auto& u : per_part_u) total += u.size();
    if (expected_points && total != *expected_points)
        throw ShapeError("assembled curve would have " + std::to_string(total) + " points, dataset uses " +
                         std::to_string(*expected_points));

    Curve full;
    full.points.reserve(total);
    for (std::size_t k = 0; k < spec.parts; ++k) {
        BezierParams part{part_control_net(prim, spec, k), per_part_u[k]};
        auto sampled = rational_bezier_sample(part);
        full.points.insert(full.points.end(), sampled.points.begin(), sampled.points.end());
    }
    return full;
}

} // namespace curvegan::geom
