#pragma once

#include "curvegan/autodiff/graph.hpp"
#include "curvegan/geometry/bezier.hpp"
#include "curvegan/geometry/kumaraswamy.hpp"
#include "curvegan/geometry/symmetry.hpp"

#include <json.hpp>

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace curvegan::nn {

using ParameterSet = std::map<std::string, ad::Tensor>;
using Rng = std::mt19937_64;

enum class Constraint { Open, Closed, PinnedLast };

// Bezier emits curve parameters through the Bezier layer; DirectPoints emits
// the 64 points straight from the deconvolution stack (ablation baseline).
enum class OutputHead { Bezier, DirectPoints };

std::string to_string(Constraint c);
Constraint constraint_from_string(const std::string& s);
std::string to_string(OutputHead h);
OutputHead output_head_from_string(const std::string& s);

// Floor added to softplus weights so they stay positive after underflow.
inline constexpr double kWeightFloor = 1e-6;

struct GeneratorConfig {
    std::size_t latent_dim = 2;
    std::size_t noise_dim = 10;
    std::size_t degree = 31;                  // prim control points = degree + 1
    std::size_t kumaraswamy_components = 4;   // M + 1
    geom::SymmetrySpec symmetry;
    Constraint constraint = Constraint::Open;
    geom::Point pinned_point{1.0, 0.0};
    OutputHead head = OutputHead::Bezier;
    std::size_t curve_points = geom::kCurvePoints;
    std::size_t hidden = 128;
    std::size_t deconv_layers = 2;
    std::size_t deconv_channels = 32;         // channels after the first dense reshape
    std::size_t kernel = 5;
    double leaky_alpha = 0.2;

    std::size_t input_dim() const { return latent_dim + noise_dim; }
    std::size_t control_points() const { return degree + 1; }
    // Length of the deconvolution output: control points, or curve points for DirectPoints.
    std::size_t grid_length() const { return head == OutputHead::Bezier ? control_points() : curve_points; }
    std::size_t grid_channels() const { return head == OutputHead::Bezier ? 3 : 2; }
    void validate() const;
};

struct DiscriminatorConfig {
    std::size_t latent_dim = 2;
    std::size_t curve_points = geom::kCurvePoints;
    std::vector<std::size_t> conv_depths{16, 32, 64, 128};
    std::size_t kernel = 5;
    std::size_t stride = 2;
    std::size_t hidden = 128;
    double leaky_alpha = 0.2;
    double logvar_min = -7.0;
    double logvar_max = 2.0;

    std::size_t flattened_features() const;
    void validate() const;
};

void to_json(nlohmann::json& j, const GeneratorConfig& c);
void from_json(const nlohmann::json& j, GeneratorConfig& c);
void to_json(nlohmann::json& j, const DiscriminatorConfig& c);
void from_json(const nlohmann::json& j, DiscriminatorConfig& c);

std::map<std::string, ad::Shape> generator_parameter_shapes(const GeneratorConfig& cfg);
std::map<std::string, ad::Shape> discriminator_parameter_shapes(const DiscriminatorConfig& cfg);

/// Glorot-uniform weights and zero biases, drawn in name order from `rng`.
ParameterSet init_parameters(const std::map<std::string, ad::Shape>& shapes, Rng& rng);

struct GeneratorModel {
    GeneratorConfig config;
    ParameterSet params;

    static GeneratorModel create(const GeneratorConfig& cfg, Rng& rng);
};

struct DiscriminatorModel {
    DiscriminatorConfig config;
    ParameterSet params;

    static DiscriminatorModel create(const DiscriminatorConfig& cfg, Rng& rng);
};

// Handles of a generator instantiated inside a graph.
struct GeneratorNodes {
    ad::Var latent;        // input "<prefix>c" [N, latent_dim]
    ad::Var noise;         // input "<prefix>z" [N, noise_dim]
    ad::Var curve;         // [N, curve_points, 2]
    ad::Var control;       // prim control points after constraints [N, n+1, 2] (Bezier head)
    ad::Var weights;       // [N, n+1]
    ad::Var shape_a;       // [N, parts * K]
    ad::Var shape_b;       // [N, parts * K]
    ad::Var mixture;       // [N, parts * K], each part's K entries sum to 1
    ad::Var u;             // [N, curve_points], parts concatenated
    std::vector<std::size_t> part_points;
};

/// Adds the generator to `g`. Parameters become graph inputs named "g.*"; the
/// latent and noise inputs are "<io_prefix>c" and "<io_prefix>z".
GeneratorNodes build_generator(ad::Graph& g, const GeneratorConfig& cfg, std::size_t batch,
                               const std::string& io_prefix = "");

struct DiscriminatorNodes {
    ad::Var logits;    // [N]
    ad::Var q_mean;    // [N, latent_dim], in (0,1)
    ad::Var q_logvar;  // [N, latent_dim], in (logvar_min, logvar_max)
};

/// Adds the discriminator applied to `x` [N, curve_points, 2]. Parameters are
/// shared graph inputs named "d.*", so repeated calls reuse the same weights.
DiscriminatorNodes build_discriminator(ad::Graph& g, const DiscriminatorConfig& cfg, ad::Var x);

void bind_parameters(ad::Bindings& bindings, const ParameterSet& params);

// One generated design with the Bezier parameters that produced it.
struct GeneratorSample {
    geom::Curve curve;
    geom::ControlNet prim;                       // empty for DirectPoints
    std::vector<std::vector<double>> part_u;     // one vector per part
    std::vector<geom::KumaraswamyMixture> mixtures;
};

/// Batched forward pass. `latent` is [N, latent_dim], `noise` is [N, noise_dim].
std::vector<GeneratorSample> generator_forward(const GeneratorModel& model, const ad::Tensor& latent,
                                               const ad::Tensor& noise);

/// Single-sample convenience wrapper.
GeneratorSample generator_forward(const GeneratorModel& model, std::span<const double> latent,
                                  std::span<const double> noise);

struct DiscriminatorOutput {
    ad::Tensor logits;
    ad::Tensor q_mean;
    ad::Tensor q_logvar;
};

/// `curves` is [N, curve_points, 2].
DiscriminatorOutput discriminator_forward(const DiscriminatorModel& model, const ad::Tensor& curves);

/// C ~ U[0,1]^{batch x latent_dim}, Z ~ N(0,1)^{batch x noise_dim}.
std::pair<ad::Tensor, ad::Tensor> sample_latent(std::size_t batch, std::size_t latent_dim, std::size_t noise_dim,
                                                Rng& rng);

/// Deterministic noise vector expanded from a seed.
std::vector<double> noise_from_seed(std::uint64_t seed, std::size_t noise_dim);

ad::Tensor curves_to_tensor(std::span<const geom::Curve> curves);
std::vector<geom::Curve> tensor_to_curves(const ad::Tensor& t);

} // namespace curvegan::nn
