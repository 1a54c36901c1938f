#pragma once

#include "curvegan/autodiff/graph.hpp"

#include <array>
#include <span>

namespace curvegan::train {

// Graph builders. Every scalar returned is rank 0.

/// -mean log sigmoid(real) - mean log(1 - sigmoid(fake)), via softplus.
ad::Var discriminator_loss(ad::Graph& g, ad::Var real_logits, ad::Var fake_logits);
/// Non-saturating generator loss -mean log sigmoid(fake).
ad::Var generator_loss(ad::Graph& g, ad::Var fake_logits);
/// Mean over the batch of the factored Gaussian log-density of `c` under Q.
ad::Var mutual_info(ad::Graph& g, ad::Var q_mean, ad::Var q_logvar, ad::Var c);

// Added under the square root of adjacent distances so the gradient stays
// finite when two control points coincide.
inline constexpr double kDistanceEpsilon = 1e-12;

struct RegularizerVars {
    ad::Var r1, r2, r3, r4;
};

/// control [N, n+1, 2], weights [N, n+1], a and b [N, parts*K].
/// R1: mean adjacent control point distance; R2: batch mean of the largest one;
/// R3: sum |w| / (N n); R4: sum(|a-1| + |b-1|) / (N parts max(K-1, 1)).
RegularizerVars regularizers(ad::Graph& g, ad::Var control, ad::Var weights, ad::Var a, ad::Var b,
                             std::size_t components);

using Lambdas = std::array<double, 5>;

/// L_G - l0 L_I + l1 R1 + l2 R2 + l3 R3 + l4 R4.
ad::Var combined_objective(ad::Graph& g, ad::Var lg, ad::Var li, const RegularizerVars& r, const Lambdas& lambda);

// Numeric counterparts evaluated through the same graph code.

struct GanLosses {
    double d = 0.0;
    double g = 0.0;
};

GanLosses gan_losses(std::span<const double> real_logits, std::span<const double> fake_logits);
double mutual_info_lower_bound(const ad::Tensor& q_mean, const ad::Tensor& q_logvar, const ad::Tensor& c);

struct RegularizerValues {
    double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
};

RegularizerValues regularizer_values(const ad::Tensor& control, const ad::Tensor& weights, const ad::Tensor& a,
                                     const ad::Tensor& b, std::size_t components);

double combined_generator_objective(double lg, double li, const RegularizerValues& r, const Lambdas& lambda);

} // namespace curvegan::train
