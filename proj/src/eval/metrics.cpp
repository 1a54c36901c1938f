#include "curvegan/eval/metrics.hpp"

#include "curvegan/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace curvegan::eval {

using geom::Curve;

namespace {

std::vector<double> flatten(std::span<const Curve> curves, std::size_t& dim) {
    dim = curves.front().size() * 2;
    std::vector<double> out;
    out.reserve(curves.size() * dim);
    for (const auto& c : curves) {
        if (c.size() * 2 != dim) throw ShapeError("curves in a set must have equal point counts");
        for (const auto& p : c.points) {
            out.push_back(p.x);
            out.push_back(p.y);
        }
    }
    return out;
}

// Squared distances [test][generated].
std::vector<double> squared_distances(std::span<const Curve> generated, std::span<const Curve> test,
                                      std::size_t& dim) {
    if (generated.empty() || test.empty()) throw DomainError("KDE needs nonempty generated and test sets");
    std::size_t gdim = 0;
    const auto g = flatten(generated, gdim);
    const auto t = flatten(test, dim);
    if (gdim != dim) throw ShapeError("generated and test curves differ in point count");
    std::vector<double> d2(test.size() * generated.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double* ti = t.data() + i * dim;
        for (std::size_t j = 0; j < generated.size(); ++j) {
            const double* gj = g.data() + j * dim;
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = ti[k] - gj[k];
                s += diff * diff;
            }
            d2[i * generated.size() + j] = s;
        }
    }
    return d2;
}

std::vector<double> log_density_from_distances(const std::vector<double>& d2, std::size_t n_test, std::size_t n_gen,
                                               std::size_t dim, double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw DomainError("KDE bandwidth must be positive");
    const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
    const double norm = -0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi * bandwidth * bandwidth) -
                        std::log(static_cast<double>(n_gen));
    std::vector<double> out(n_test);
    for (std::size_t i = 0; i < n_test; ++i) {
        const double* row = d2.data() + i * n_gen;
        const double min_d2 = *std::min_element(row, row + n_gen);
        double s = 0.0;
        for (std::size_t j = 0; j < n_gen; ++j) s += std::exp(-(row[j] - min_d2) * inv);
        out[i] = -min_d2 * inv + std::log(s) + norm;
    }
    return out;
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double ma = mean_of(a), mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double curve_distance(const Curve& a, const Curve& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto d = a.points[k] - b.points[k];
        s += d.x * d.x + d.y * d.y;
    }
    return std::sqrt(s);
}

} // namespace

std::vector<double> kde_log_density(std::span<const Curve> generated, std::span<const Curve> test, double bandwidth) {
    if (!(bandwidth > 0.0)) throw DomainError("KDE bandwidth must be positive");
    std::size_t dim = 0;
    const auto d2 = squared_distances(generated, test, dim);
    return log_density_from_distances(d2, test.size(), generated.size(), dim, bandwidth);
}

double mll(std::span<const Curve> generated, std::span<const Curve> test, double bandwidth) {
    const auto lp = kde_log_density(generated, test, bandwidth);
    return mean_of(lp);
}

std::vector<double> default_bandwidth_grid() {
    std::vector<double> grid(10);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = std::pow(10.0, -2.0 + 2.0 * static_cast<double>(i) / 9.0);
    return grid;
}

double select_bandwidth(std::span<const Curve> generated, std::span<const Curve> held_out,
                        std::span<const double> grid) {
    if (grid.empty()) throw DomainError("bandwidth grid is empty");
    std::size_t dim = 0;
    const auto d2 = squared_distances(generated, held_out, dim);
    double best = grid.front();
    double best_ll = -std::numeric_limits<double>::infinity();
    for (double h : grid) {
        const auto lp = log_density_from_distances(d2, held_out.size(), generated.size(), dim, h);
        const double ll = mean_of(lp);
        if (ll > best_ll) {
            best_ll = ll;
            best = h;
        }
    }
    return best;
}

double vod(const Curve& x) {
    const std::size_t m = x.size();
    if (m < 2) throw DomainError("VOD needs at least 2 points");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const auto d = x.points[i + 1] - x.points[i];
        const double half = 0.5 * (d.x - d.y);
        s += half * half;  // population variance of {dx, dy}
    }
    return s / static_cast<double>(m - 1);
}

double mean_vod(std::span<const Curve> curves) {
    if (curves.empty()) throw DomainError("VOD of an empty set");
    double s = 0.0;
    for (const auto& c : curves) s += vod(c);
    return s / static_cast<double>(curves.size());
}

double rvod(std::span<const Curve> data, std::span<const Curve> generated) {
    const double num = mean_vod(data);
    const double den = mean_vod(generated);
    if (den < 1e-15) throw DegenerateCurveError("generated curves have zero variance of difference");
    return num / den;
}

CurveGenerator wrap_generator(const nn::GeneratorModel& model) {
    CurveGenerator gen;
    gen.latent_dim = model.config.latent_dim;
    gen.noise_dim = model.config.noise_dim;
    gen.generate = [&model](const std::vector<std::vector<double>>& latents,
                            const std::vector<std::vector<double>>& noises) {
        constexpr std::size_t kChunk = 256;
        const std::size_t d = model.config.latent_dim, nz = model.config.noise_dim;
        std::vector<Curve> out;
        out.reserve(latents.size());
        for (std::size_t start = 0; start < latents.size(); start += kChunk) {
            const std::size_t n = std::min(kChunk, latents.size() - start);
            ad::Tensor c({n, d}), z({n, nz});
            for (std::size_t i = 0; i < n; ++i) {
                std::copy(latents[start + i].begin(), latents[start + i].end(), c.storage().begin() + i * d);
                std::copy(noises[start + i].begin(), noises[start + i].end(), z.storage().begin() + i * nz);
            }
            for (auto& s : nn::generator_forward(model, c, z)) out.push_back(std::move(s.curve));
        }
        return out;
    };
    return gen;
}

std::vector<Curve> sample_curves(const CurveGenerator& gen, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> c(count, std::vector<double>(gen.latent_dim));
    std::vector<std::vector<double>> z(count, std::vector<double>(gen.noise_dim));
    for (std::size_t i = 0; i < count; ++i) {
        for (auto& v : c[i]) v = uniform(rng);
        for (auto& v : z[i]) v = normal(rng);
    }
    return gen(c, z);
}

std::vector<Curve> uniform_noise_curves(std::span<const Curve> reference, std::size_t count, std::uint64_t seed) {
    if (reference.empty()) throw DomainError("noise baseline needs reference curves");
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& c : reference)
        for (const auto& p : c.points) {
            x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
        }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
    std::vector<Curve> out(count);
    for (auto& c : out) {
        c.points.resize(reference.front().size());
        for (auto& p : c.points) {
            p.x = ux(rng);
            p.y = uy(rng);
        }
    }
    return out;
}

LscResult lsc_proxy(const CurveGenerator& gen, std::size_t n_lines, std::size_t points_per_line,
                    std::uint64_t seed) {
    if (n_lines < 10) throw DomainError("LSC proxy needs at least 10 lines");
    if (points_per_line < 3) throw DomainError("LSC proxy needs at least 3 points per line");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    LscResult res;
    double sum = 0.0;
    for (std::size_t line = 0; line < n_lines; ++line) {
        std::vector<double> a(gen.latent_dim), b(gen.latent_dim), z(gen.noise_dim);
        for (auto& v : a) v = uniform(rng);
        for (auto& v : b) v = uniform(rng);
        for (auto& v : z) v = normal(rng);

        std::vector<std::vector<double>> latents(points_per_line, std::vector<double>(gen.latent_dim));
        for (std::size_t k = 0; k < points_per_line; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(points_per_line - 1);
            for (std::size_t i = 0; i < gen.latent_dim; ++i) latents[k][i] = a[i] + t * (b[i] - a[i]);
        }
        const auto curves = gen(latents, std::vector<std::vector<double>>(points_per_line, z));

        std::vector<double> dl, dc;
        for (std::size_t i = 0; i < points_per_line; ++i)
            for (std::size_t j = i + 1; j < points_per_line; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < gen.latent_dim; ++k)
                    s += (latents[i][k] - latents[j][k]) * (latents[i][k] - latents[j][k]);
                dl.push_back(std::sqrt(s));
                dc.push_back(curve_distance(curves[i], curves[j]));
            }
        const double spread = sample_std(dc);
        const double scale = mean_of(dc);
        if (!(spread > 1e-12 * scale) || sample_std(dl) == 0.0) {
            ++res.lines_skipped;
            continue;
        }
        sum += std::min(1.0, std::abs(pearson(dl, dc)));
        ++res.lines_used;
    }
    if (res.lines_used == 0)
        throw DegenerateCurveError("LSC proxy: all " + std::to_string(n_lines) + " lines have constant curve distances");
    res.value = sum / static_cast<double>(res.lines_used);
    return res;
}

void EvalConfig::validate() const {
    if (runs < 1) throw DomainError("runs must be at least 1");
    if (samples < 2) throw DomainError("samples must be at least 2");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw DomainError("validation fraction must be in (0,1)");
    if (lsc_lines < 10) throw DomainError("LSC proxy needs at least 10 lines");
    if (lsc_points < 3) throw DomainError("LSC proxy needs at least 3 points per line");
}

void to_json(nlohmann::json& j, const EvalConfig& c) {
    j = nlohmann::json{{"runs", c.runs},
                       {"samples", c.samples},
                       {"seed", c.seed},
                       {"bandwidth", c.bandwidth},
                       {"validation_fraction", c.validation_fraction},
                       {"lsc_lines", c.lsc_lines},
                       {"lsc_points", c.lsc_points}};
}

void from_json(const nlohmann::json& j, EvalConfig& c) {
    c.runs = j.at("runs").get<std::size_t>();
    c.samples = j.at("samples").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.bandwidth = j.at("bandwidth").get<double>();
    c.validation_fraction = j.at("validation_fraction").get<double>();
    c.lsc_lines = j.at("lsc_lines").get<std::size_t>();
    c.lsc_points = j.at("lsc_points").get<std::size_t>();
}

MetricReport evaluate(const CurveGenerator& gen, std::span<const Curve> data, const EvalConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw DomainError("evaluation needs a nonempty dataset");

    // Fixed split: validation curves pick the bandwidth, the rest score MLL.
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 split_rng(cfg.seed);
    std::shuffle(order.begin(), order.end(), split_rng);
    std::vector<Curve> validation, test;
    const auto n_val = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(cfg.validation_fraction * static_cast<double>(data.size()))), 1,
        data.size());
    for (std::size_t i = 0; i < order.size(); ++i) (i < n_val ? validation : test).push_back(data[order[i]]);
    if (test.empty()) test = validation;

    const auto grid = default_bandwidth_grid();
    MetricReport rep;
    rep.runs = cfg.runs;
    rep.samples = cfg.samples;
    std::vector<double> mlls, rvods, lscs;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        const std::uint64_t seed = cfg.seed + r;
        rep.seeds.push_back(seed);
        const auto generated = sample_curves(gen, cfg.samples, seed);
        const double h = cfg.bandwidth > 0.0 ? cfg.bandwidth : select_bandwidth(generated, validation, grid);
        rep.bandwidths.push_back(h);
        mlls.push_back(mll(generated, test, h));
        rvods.push_back(rvod(data, generated));
        const auto l = lsc_proxy(gen, cfg.lsc_lines, cfg.lsc_points, seed);
        lscs.push_back(l.value);
        rep.lsc_skipped += l.lines_skipped;
    }
    rep.mll = mean_of(mlls), rep.mll_std = sample_std(mlls);
    rep.rvod = mean_of(rvods), rep.rvod_std = sample_std(rvods);
    rep.lsc = mean_of(lscs), rep.lsc_std = sample_std(lscs);
    return rep;
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

std::string to_key_value(const MetricReport& r) {
    std::ostringstream os;
    os << "MLL=" << num(r.mll) << "\nMLL_std=" << num(r.mll_std) << "\nRVOD=" << num(r.rvod)
       << "\nRVOD_std=" << num(r.rvod_std) << "\nLSC-proxy=" << num(r.lsc) << "\nLSC-proxy_std=" << num(r.lsc_std)
       << "\nruns=" << r.runs << "\nsamples=" << r.samples << "\nlsc_skipped_lines=" << r.lsc_skipped << "\nseeds=";
    for (std::size_t i = 0; i < r.seeds.size(); ++i) os << (i ? "," : "") << r.seeds[i];
    os << "\nbandwidths=";
    for (std::size_t i = 0; i < r.bandwidths.size(); ++i) os << (i ? "," : "") << num(r.bandwidths[i]);
    os << '\n';
    return os.str();
}

std::string table_header() { return "example,model,MLL,RVOD,LSC,train-minutes"; }

std::string table_row(const std::string& example, const std::string& model, const MetricReport& r,
                      double train_minutes) {
    return example + "," + model + "," + num(r.mll) + " ± " + num(r.mll_std) + "," + num(r.rvod) + " ± " +
           num(r.rvod_std) + "," + num(r.lsc) + " ± " + num(r.lsc_std) + "," + num(train_minutes);
}

} // namespace curvegan::eval
