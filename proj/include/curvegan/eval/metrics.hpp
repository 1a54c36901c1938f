#pragma once

#include "curvegan/geometry/curve.hpp"
#include "curvegan/nn/model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace curvegan::eval {

/// Log-density of each test curve under an isotropic Gaussian KDE fitted on
/// `generated`; curves are flattened to 2m-dimensional vectors.
std::vector<double> kde_log_density(std::span<const geom::Curve> generated, std::span<const geom::Curve> test,
                                    double bandwidth);

/// Mean of kde_log_density. Throws DomainError for bandwidth <= 0 or empty sets.
double mll(std::span<const geom::Curve> generated, std::span<const geom::Curve> test, double bandwidth);

/// 10 log-spaced bandwidths from 0.01 to 1.
std::vector<double> default_bandwidth_grid();

/// Grid entry maximising the mean log-density of `held_out`.
double select_bandwidth(std::span<const geom::Curve> generated, std::span<const geom::Curve> held_out,
                        std::span<const double> grid);

/// (1/(m-1)) sum_i Var(x_{i+1} - x_i), Var over the two coordinates of each
/// difference (population variance). Throws DomainError for m < 2.
double vod(const geom::Curve& x);
double mean_vod(std::span<const geom::Curve> curves);

/// mean VOD(data) / mean VOD(generated). Throws DegenerateCurveError when the
/// generated mean is below 1e-15.
double rvod(std::span<const geom::Curve> data, std::span<const geom::Curve> generated);

// Anything that maps (latent, noise) rows to curves, batched.
struct CurveGenerator {
    std::size_t latent_dim = 0;
    std::size_t noise_dim = 0;
    std::function<std::vector<geom::Curve>(const std::vector<std::vector<double>>& latents,
                                           const std::vector<std::vector<double>>& noises)>
        generate;

    std::vector<geom::Curve> operator()(const std::vector<std::vector<double>>& latents,
                                        const std::vector<std::vector<double>>& noises) const {
        return generate(latents, noises);
    }
};

CurveGenerator wrap_generator(const nn::GeneratorModel& model);

/// `count` samples with c ~ U[0,1]^d and z ~ N(0,1) drawn from `seed`.
std::vector<geom::Curve> sample_curves(const CurveGenerator& gen, std::size_t count, std::uint64_t seed);

/// Curves whose points are independent uniform draws over the bounding box of
/// `reference`. Used as the MLL floor.
std::vector<geom::Curve> uniform_noise_curves(std::span<const geom::Curve> reference, std::size_t count,
                                              std::uint64_t seed);

struct LscResult {
    double value = 0.0;            // mean |Pearson r| over used lines, in [0,1]
    std::size_t lines_used = 0;
    std::size_t lines_skipped = 0; // zero-variance curve distances
};

/// Latent-space consistency proxy. Each line joins two uniform points of the
/// latent box with one fixed noise vector; along `points_per_line` evenly
/// spaced positions the Pearson correlation between latent distances and
/// curve distances over all pairs is taken. Throws DomainError for
/// n_lines < 10 or points_per_line < 3, DegenerateCurveError when every line
/// is skipped.
LscResult lsc_proxy(const CurveGenerator& gen, std::size_t n_lines, std::size_t points_per_line,
                    std::uint64_t seed);

struct EvalConfig {
    std::size_t runs = 10;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    double bandwidth = 0.0;           // <= 0 selects from default_bandwidth_grid
    double validation_fraction = 0.2; // share of the data used to select the bandwidth
    std::size_t lsc_lines = 50;
    std::size_t lsc_points = 10;

    void validate() const;
};

void to_json(nlohmann::json& j, const EvalConfig& c);
void from_json(const nlohmann::json& j, EvalConfig& c);

struct MetricReport {
    double mll = 0.0, mll_std = 0.0;
    double rvod = 0.0, rvod_std = 0.0;
    double lsc = 0.0, lsc_std = 0.0;
    std::size_t runs = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> bandwidths;   // per run
    std::size_t lsc_skipped = 0;      // summed over runs
    std::size_t samples = 0;
};

/// Runs every metric `cfg.runs` times with seeds cfg.seed, cfg.seed+1, ...
/// and reports mean and sample standard deviation (0 for one run).
MetricReport evaluate(const CurveGenerator& gen, std::span<const geom::Curve> data, const EvalConfig& cfg);

/// key=value lines.
std::string to_key_value(const MetricReport& r);

std::string table_header();  // example,model,MLL,RVOD,LSC,train-minutes
std::string table_row(const std::string& example, const std::string& model, const MetricReport& r,
                      double train_minutes);

} // namespace curvegan::eval
