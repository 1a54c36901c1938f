#pragma once

#include "curvegan/geometry/curve.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace curvegan::data {

struct SuperformulaParams {
    double s1 = 1.0;
    double s2 = 1.0;
    int m = 3;

    void validate() const;  // s1, s2 in [1, 10], m >= 1
};

/// r(theta) with n1 = s1 and n2 = n3 = s1 + s2.
double superformula_radius(const SuperformulaParams& p, double theta);

/// `num_points` evenly spaced theta in [0, 2 pi).
geom::Curve superformula_curve(const SuperformulaParams& p, std::size_t num_points = geom::kCurvePoints);

enum class Provenance { SyntheticSuperformula, SyntheticWaterline, FileLoaded };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct CurveDataset {
    std::string name;
    Provenance provenance = Provenance::FileLoaded;
    std::vector<geom::Curve> samples;
    nlohmann::json meta = nlohmann::json::object();  // generation parameters, normalisation

    /// Nonempty and every sample has `points` finite points.
    void validate(std::size_t points = geom::kCurvePoints) const;
};

struct Range {
    double lo = 1.0;
    double hi = 10.0;
};

/// s1, s2 drawn uniformly from the ranges; the parameters of each sample are
/// recorded in meta["params"].
CurveDataset generate_superformula_dataset(std::size_t count, Range s1, Range s2, int m, std::uint64_t seed);

struct WaterlineOptions {
    Range mid_length{0.2, 0.6};   // flat midsection, fraction of the length
    Range half_width{0.08, 0.2};
    Range tail_ratio{0.0, 0.6};   // transom half-width relative to the body
    double curvature_weight = 0.05;
};

/// Synthetic upper-half waterlines from the stern (x = 0) to the bow tip (1, 0).
CurveDataset generate_waterline_dataset(std::size_t count, std::uint64_t seed, const WaterlineOptions& opts = {});

// Default point-concentration weight used by the loaders and the CLI.
inline constexpr double kDefaultCurvatureWeight = 0.05;

/// Interpolating cubic spline through `points` (chord-length parameter;
/// periodic when the first and last points coincide, not-a-knot otherwise),
/// resampled to `target` points with density proportional to
/// 1 + curvature_weight * |curvature| along arc length. Endpoints are kept.
geom::Curve resample_curve(std::span<const geom::Point> points, std::size_t target = geom::kCurvePoints,
                           double curvature_weight = 0.0);

enum class PointFormat { Dat, Csv };

PointFormat point_format_from_string(const std::string& s);

/// Raw coordinates of one file. dat: "x y" per line, an optional header line
/// and '#' comments; csv: a header row then "x,y" rows.
std::vector<geom::Point> read_point_file(const std::filesystem::path& path, PointFormat format);

/// One file, or every matching file of a directory in name order. Each
/// sequence is chord-normalised (x spans [0,1]) and resampled to `target`.
CurveDataset load_point_sequences(const std::filesystem::path& path, PointFormat format,
                                  std::size_t target = geom::kCurvePoints,
                                  double curvature_weight = kDefaultCurvatureWeight);

/// `dir/manifest.json` plus `dir/samples/NNNN.dat` at full precision.
void save_dataset(const CurveDataset& ds, const std::filesystem::path& dir);
CurveDataset load_dataset(const std::filesystem::path& dir);

} // namespace curvegan::data
