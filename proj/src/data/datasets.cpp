#include "curvegan/data/datasets.hpp"

#include "curvegan/error.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace curvegan::data {

using geom::Curve;
using geom::Point;

void SuperformulaParams::validate() const {
    if (!(s1 >= 1.0 && s1 <= 10.0 && s2 >= 1.0 && s2 <= 10.0))
        throw DomainError("superformula s1 and s2 must lie in [1, 10]");
    if (m < 1) throw DomainError("superformula m must be positive");
}

double superformula_radius(const SuperformulaParams& p, double theta) {
    const double n1 = p.s1;
    const double n2 = p.s1 + p.s2;
    const double a = p.m * theta / 4.0;
    return std::pow(std::pow(std::abs(std::cos(a)), n2) + std::pow(std::abs(std::sin(a)), n2), -1.0 / n1);
}

Curve superformula_curve(const SuperformulaParams& p, std::size_t num_points) {
    p.validate();
    if (num_points == 0) throw DomainError("superformula needs at least one point");
    Curve c;
    c.points.reserve(num_points);
    for (std::size_t i = 0; i < num_points; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(num_points);
        const double r = superformula_radius(p, theta);
        c.points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return c;
}

std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::SyntheticSuperformula: return "synthetic-superformula";
    case Provenance::SyntheticWaterline: return "synthetic-waterline";
    case Provenance::FileLoaded: return "file-loaded";
    }
    return "file-loaded";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "synthetic-superformula") return Provenance::SyntheticSuperformula;
    if (s == "synthetic-waterline") return Provenance::SyntheticWaterline;
    if (s == "file-loaded") return Provenance::FileLoaded;
    throw DomainError("unknown dataset provenance '" + s + "'");
}

void CurveDataset::validate(std::size_t points) const {
    if (samples.empty()) throw DomainError("dataset '" + name + "' is empty");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].size() != points)
            throw ShapeError("sample " + std::to_string(i) + " of '" + name + "' has " +
                             std::to_string(samples[i].size()) + " points, expected " + std::to_string(points));
        if (!samples[i].all_finite()) throw DomainError("sample " + std::to_string(i) + " has non-finite points");
    }
}

CurveDataset generate_superformula_dataset(std::size_t count, Range s1, Range s2, int m, std::uint64_t seed) {
    if (count == 0) throw DomainError("dataset count must be at least 1");
    if (!(s1.lo <= s1.hi && s2.lo <= s2.hi)) throw DomainError("empty parameter range");
    SuperformulaParams{s1.lo, s2.lo, m}.validate();
    SuperformulaParams{s1.hi, s2.hi, m}.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d1(s1.lo, s1.hi), d2(s2.lo, s2.hi);
    CurveDataset ds;
    ds.name = "superformula-m" + std::to_string(m);
    ds.provenance = Provenance::SyntheticSuperformula;
    ds.meta = {{"m", m}, {"s1", {s1.lo, s1.hi}}, {"s2", {s2.lo, s2.hi}}, {"seed", seed}, {"params", nlohmann::json::array()}};
    for (std::size_t i = 0; i < count; ++i) {
        const double a = d1(rng);
        const double b = d2(rng);
        ds.samples.push_back(superformula_curve({a, b, m}));
        ds.meta["params"].push_back({a, b});
    }
    return ds;
}

CurveDataset generate_waterline_dataset(std::size_t count, std::uint64_t seed, const WaterlineOptions& opts) {
    if (count == 0) throw DomainError("dataset count must be at least 1");
    std::mt19937_64 rng(seed);
    const auto draw = [&](Range r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); };
    CurveDataset ds;
    ds.name = "waterline";
    ds.provenance = Provenance::SyntheticWaterline;
    ds.meta = {{"seed", seed}, {"curvature_weight", opts.curvature_weight}, {"params", nlohmann::json::array()}};
    constexpr int kArc = 80;
    for (std::size_t i = 0; i < count; ++i) {
        const double mid = draw(opts.mid_length);
        const double width = draw(opts.half_width);
        const double tail = width * draw(opts.tail_ratio);
        const double stern = (1.0 - mid) * 0.4;
        const double bow_start = stern + mid;
        std::vector<Point> pts;
        // Stern quarter-ellipse from the transom up to the full beam.
        for (int k = 0; k <= kArc; ++k) {
            const double phi = 0.5 * std::numbers::pi * k / kArc;
            pts.push_back({stern * (1.0 - std::cos(phi)), tail + (width - tail) * std::sin(phi)});
        }
        for (int k = 1; k < kArc; ++k) pts.push_back({stern + mid * k / kArc, width});
        // Bow quarter-ellipse down to the stem at (1, 0).
        for (int k = 0; k <= kArc; ++k) {
            const double phi = 0.5 * std::numbers::pi * k / kArc;
            pts.push_back({bow_start + (1.0 - bow_start) * std::sin(phi), width * std::cos(phi)});
        }
        pts.back() = {1.0, 0.0};
        auto curve = resample_curve(pts, geom::kCurvePoints, opts.curvature_weight);
        curve.points.back() = {1.0, 0.0};
        ds.samples.push_back(std::move(curve));
        ds.meta["params"].push_back({{"mid_length", mid}, {"half_width", width}, {"tail", tail}});
    }
    return ds;
}

namespace {

// Cubic interpolant of one coordinate over chord-length knots.
struct Spline1d {
    std::vector<double> t, y, m;  // knots, values, second derivatives

    double eval(std::size_t i, double x, int deriv) const {
        const double h = t[i + 1] - t[i];
        const double a = t[i + 1] - x, b = x - t[i];
        switch (deriv) {
        case 0:
            return m[i] * a * a * a / (6 * h) + m[i + 1] * b * b * b / (6 * h) + (y[i] / h - m[i] * h / 6) * a +
                   (y[i + 1] / h - m[i + 1] * h / 6) * b;
        case 1:
            return -m[i] * a * a / (2 * h) + m[i + 1] * b * b / (2 * h) - (y[i] / h - m[i] * h / 6) +
                   (y[i + 1] / h - m[i + 1] * h / 6);
        default: return (m[i] * a + m[i + 1] * b) / h;
        }
    }
};

// Solves for second derivatives. Periodic splines take y with y.front() == y.back().
std::vector<double> spline_moments(const std::vector<double>& t, const std::vector<double>& y, bool periodic) {
    const std::size_t n = t.size();
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t[i + 1] - t[i];
    const auto slope = [&](std::size_t i) { return (y[i + 1] - y[i]) / h[i]; };

    std::vector<Eigen::Triplet<double>> trip;
    if (periodic) {
        const std::size_t k = n - 1;  // unknowns M_0..M_{k-1}; M_k = M_0
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t prev = (i + k - 1) % k;
            const double hp = h[prev], hi = h[i];
            trip.emplace_back(i, prev, hp);
            trip.emplace_back(i, i, 2 * (hp + hi));
            trip.emplace_back(i, (i + 1) % k, hi);
            rhs[static_cast<Eigen::Index>(i)] = 6 * (slope(i) - slope(prev));
        }
        Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success) throw DegenerateCurveError("periodic spline system is singular");
        Eigen::VectorXd sol = lu.solve(rhs);
        std::vector<double> m(sol.data(), sol.data() + k);
        m.push_back(m.front());
        return m;
    }

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    // Not-a-knot: the third derivative is continuous at the second and
    // second-to-last knots.
    trip.emplace_back(0, 0, h[1]);
    trip.emplace_back(0, 1, -(h[0] + h[1]));
    trip.emplace_back(0, 2, h[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        trip.emplace_back(i, i - 1, h[i - 1]);
        trip.emplace_back(i, i, 2 * (h[i - 1] + h[i]));
        trip.emplace_back(i, i + 1, h[i]);
        rhs[static_cast<Eigen::Index>(i)] = 6 * (slope(i) - slope(i - 1));
    }
    trip.emplace_back(n - 1, n - 3, h[n - 2]);
    trip.emplace_back(n - 1, n - 2, -(h[n - 3] + h[n - 2]));
    trip.emplace_back(n - 1, n - 1, h[n - 3]);
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    if (lu.info() != Eigen::Success) throw DegenerateCurveError("spline system is singular");
    Eigen::VectorXd sol = lu.solve(rhs);
    return {sol.data(), sol.data() + n};
}

} // namespace

Curve resample_curve(std::span<const Point> points, std::size_t target, double curvature_weight) {
    if (points.size() < 4) throw DomainError("resampling needs at least 4 points, got " + std::to_string(points.size()));
    if (target < 2) throw DomainError("resampling target must be at least 2");
    if (!(curvature_weight >= 0.0)) throw DomainError("curvature weight must be nonnegative");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("non-finite input point");

    double length = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) length += geom::distance(points[i - 1], points[i]);
    if (!(length > 0.0)) throw DegenerateCurveError("input curve has zero length");
    const double tol = 1e-12 * length;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (geom::distance(points[i - 1], points[i]) <= tol)
            throw DegenerateCurveError("consecutive duplicate points at index " + std::to_string(i));

    const bool periodic = geom::distance(points.front(), points.back()) <= 1e-9 * length;
    std::vector<Point> pts(points.begin(), points.end());
    if (periodic) {
        pts.back() = pts.front();
        if (pts.size() < 4) throw DomainError("closed curve needs at least 3 distinct points");
    }

    const std::size_t n = pts.size();
    Spline1d sx, sy;
    sx.t.resize(n);
    sx.t[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) sx.t[i] = sx.t[i - 1] + geom::distance(pts[i - 1], pts[i]);
    sy.t = sx.t;
    for (const auto& p : pts) {
        sx.y.push_back(p.x);
        sy.y.push_back(p.y);
    }
    sx.m = spline_moments(sx.t, sx.y, periodic);
    sy.m = spline_moments(sy.t, sy.y, periodic);

    // Dense table of (parameter, cumulative integral of (1 + w |kappa|) ds).
    constexpr std::size_t kSub = 64;
    std::vector<double> table_t, table_w;
    const std::size_t rows = (n - 1) * kSub + 1;
    table_t.reserve(rows);
    table_w.reserve(rows);
    const auto density = [&](std::size_t seg, double x) {
        const double dx = sx.eval(seg, x, 1), dy = sy.eval(seg, x, 1);
        const double ddx = sx.eval(seg, x, 2), ddy = sy.eval(seg, x, 2);
        const double speed = std::hypot(dx, dy);
        const double kappa = speed > 0.0 ? (dx * ddy - dy * ddx) / (speed * speed * speed) : 0.0;
        return std::pair{speed, 1.0 + curvature_weight * std::abs(kappa)};
    };
    table_t.push_back(0.0);
    table_w.push_back(0.0);
    for (std::size_t seg = 0; seg + 1 < n; ++seg) {
        const double t0 = sx.t[seg], t1 = sx.t[seg + 1];
        auto [v_prev, rho_prev] = density(seg, t0);
        double x_prev = t0;
        for (std::size_t k = 1; k <= kSub; ++k) {
            const double x = t0 + (t1 - t0) * static_cast<double>(k) / kSub;
            const auto [v, rho] = density(seg, x);
            table_w.push_back(table_w.back() + 0.5 * (v_prev * rho_prev + v * rho) * (x - x_prev));
            table_t.push_back(x);
            v_prev = v;
            rho_prev = rho;
            x_prev = x;
        }
    }
    table_t.back() = sx.t.back();

    Curve out;
    out.points.reserve(target);
    const double total = table_w.back();
    for (std::size_t k = 0; k < target; ++k) {
        double t;
        if (k == 0) {
            t = 0.0;
        } else if (k + 1 == target) {
            t = sx.t.back();
        } else {
            const double w = total * static_cast<double>(k) / static_cast<double>(target - 1);
            const auto it = std::upper_bound(table_w.begin(), table_w.end(), w);
            const std::size_t j = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - table_w.begin(), 1,
                                                                                        static_cast<std::ptrdiff_t>(table_w.size() - 1)));
            const double span = table_w[j] - table_w[j - 1];
            const double f = span > 0.0 ? (w - table_w[j - 1]) / span : 0.0;
            t = table_t[j - 1] + f * (table_t[j] - table_t[j - 1]);
        }
        std::size_t seg = static_cast<std::size_t>(std::upper_bound(sx.t.begin(), sx.t.end(), t) - sx.t.begin());
        seg = std::clamp<std::size_t>(seg, 1, n - 1) - 1;
        out.points.push_back({sx.eval(seg, t, 0), sy.eval(seg, t, 0)});
    }
    out.points.front() = pts.front();
    out.points.back() = pts.back();
    return out;
}

PointFormat point_format_from_string(const std::string& s) {
    if (s == "dat") return PointFormat::Dat;
    if (s == "csv") return PointFormat::Csv;
    throw DomainError("unknown point file format '" + s + "' (expected dat or csv)");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool parse_double(std::string_view tok, double& out) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line, bool csv) {
    std::vector<std::string_view> toks;
    if (csv) {
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            toks.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            const std::size_t b = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            if (i > b) toks.push_back(line.substr(b, i - b));
        }
    }
    return toks;
}

} // namespace

std::vector<Point> read_point_file(const std::filesystem::path& path, PointFormat format) {
    std::ifstream f(path);
    if (!f) throw ParseError(path.string(), 0, "cannot open file");
    const bool csv = format == PointFormat::Csv;
    std::vector<Point> pts;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(f, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const bool first = !seen_content;
        seen_content = true;
        if (csv && first) continue;  // header row
        const auto toks = split(line, csv);
        double x = 0.0, y = 0.0;
        const bool ok = toks.size() == 2 && parse_double(toks[0], x) && parse_double(toks[1], y);
        if (ok) {
            pts.push_back({x, y});
            continue;
        }
        if (!csv && first) continue;  // optional name / header line
        if (toks.size() != 2)
            throw ParseError(path.string(), line_no, "expected 2 columns, found " + std::to_string(toks.size()));
        const auto bad = parse_double(toks[0], x) ? toks[1] : toks[0];
        throw ParseError(path.string(), line_no, "malformed number '" + std::string(bad) + "'");
    }
    return pts;
}

CurveDataset load_point_sequences(const std::filesystem::path& path, PointFormat format, std::size_t target,
                                  double curvature_weight) {
    std::vector<std::filesystem::path> files;
    const std::string ext = format == PointFormat::Dat ? ".dat" : ".csv";
    if (std::filesystem::is_directory(path)) {
        for (const auto& e : std::filesystem::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ext) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DomainError("no " + ext + " files in '" + path.string() + "'");
    } else {
        files.push_back(path);
    }

    CurveDataset ds;
    ds.name = path.stem().string();
    ds.provenance = Provenance::FileLoaded;
    ds.meta = {{"source", path.string()},
               {"format", ext.substr(1)},
               {"curvature_weight", curvature_weight},
               {"normalization", "chord: x translated and uniformly scaled to span [0,1]"},
               {"files", nlohmann::json::array()}};
    for (const auto& file : files) {
        auto pts = read_point_file(file, format);
        if (pts.size() < 4)
            throw DomainError("'" + file.string() + "' has " + std::to_string(pts.size()) +
                              " points; at least 4 are needed");
        double xmin = pts[0].x, xmax = pts[0].x;
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
        }
        const double chord = xmax - xmin;
        if (!(chord > 0.0)) throw DegenerateCurveError("'" + file.string() + "' has zero chord length");
        for (auto& p : pts) p = {(p.x - xmin) / chord, p.y / chord};
        try {
            ds.samples.push_back(resample_curve(pts, target, curvature_weight));
        } catch (const Error& e) {
            throw DomainError("'" + file.string() + "': " + e.what());
        }
        ds.meta["files"].push_back({{"file", file.filename().string()}, {"x_offset", xmin}, {"scale", 1.0 / chord}});
    }
    return ds;
}

void save_dataset(const CurveDataset& ds, const std::filesystem::path& dir) {
    ds.validate(ds.samples.empty() ? 0 : ds.samples.front().size());
    std::filesystem::create_directories(dir / "samples");
    nlohmann::json manifest{{"name", ds.name},
                            {"provenance", to_string(ds.provenance)},
                            {"count", ds.samples.size()},
                            {"points", ds.samples.front().size()},
                            {"meta", ds.meta},
                            {"samples", nlohmann::json::array()}};
    char buf[64];
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "samples/%05zu.dat", i);
        manifest["samples"].push_back(buf);
        std::ofstream f(dir / buf);
        if (!f) throw Error("cannot write '" + (dir / buf).string() + "'");
        for (const auto& p : ds.samples[i].points) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
            f << buf;
        }
    }
    std::ofstream m(dir / "manifest.json");
    if (!m) throw Error("cannot write manifest in '" + dir.string() + "'");
    m << manifest.dump(2) << '\n';
}

CurveDataset load_dataset(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream f(manifest_path);
    if (!f) throw ParseError(manifest_path.string(), 0, "cannot open dataset manifest");
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(manifest_path.string(), 0, e.what());
    }
    CurveDataset ds;
    try {
        ds.name = manifest.at("name").get<std::string>();
        ds.provenance = provenance_from_string(manifest.at("provenance").get<std::string>());
        ds.meta = manifest.value("meta", nlohmann::json::object());
        for (const auto& s : manifest.at("samples")) {
            Curve c;
            c.points = read_point_file(dir / s.get<std::string>(), PointFormat::Dat);
            ds.samples.push_back(std::move(c));
        }
        ds.validate(manifest.at("points").get<std::size_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(manifest_path.string(), 0, e.what());
    }
    return ds;
}

} // namespace curvegan::data
