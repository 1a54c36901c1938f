#include "curvegan/train/losses.hpp"

#include "curvegan/error.hpp"

#include <cmath>
#include <numbers>

namespace curvegan::train {

using ad::Graph;
using ad::Tensor;
using ad::Var;

Var discriminator_loss(Graph& g, Var real_logits, Var fake_logits) {
    return g.add(g.mean(g.softplus(g.negate(real_logits))), g.mean(g.softplus(fake_logits)));
}

Var generator_loss(Graph& g, Var fake_logits) { return g.mean(g.softplus(g.negate(fake_logits))); }

Var mutual_info(Graph& g, Var q_mean, Var q_logvar, Var c) {
    const auto& s = g.shape(c);
    if (s.size() != 2 || g.shape(q_mean) != s || g.shape(q_logvar) != s)
        throw ShapeError("mutual information terms need matching [N, d] shapes");
    // log N(c; mu, e^lv) = -0.5 log 2pi - 0.5 lv - 0.5 (c - mu)^2 e^-lv
    auto diff = g.subtract(c, q_mean);
    auto sq = g.multiply(g.multiply(diff, diff), g.exp(g.negate(q_logvar)));
    auto logp = g.add_scalar(g.scale(g.add(q_logvar, sq), -0.5), -0.5 * std::log(2.0 * std::numbers::pi));
    return g.mean(g.sum(logp, 1));
}

RegularizerVars regularizers(Graph& g, Var control, Var weights, Var a, Var b, std::size_t components) {
    const auto& ps = g.shape(control);
    if (ps.size() != 3 || ps[2] != 2 || ps[1] < 2) throw ShapeError("control points must be [N, n+1, 2] with n >= 1");
    const std::size_t N = ps[0], n = ps[1] - 1;
    if (g.shape(weights) != ad::Shape{N, n + 1}) throw ShapeError("weights must be [N, n+1]");
    const auto& as = g.shape(a);
    if (as.size() != 2 || as[0] != N || g.shape(b) != as || components == 0 || as[1] % components != 0)
        throw ShapeError("Kumaraswamy parameters must be [N, parts*K]");
    const std::size_t parts = as[1] / components;

    auto diff = g.subtract(g.slice(control, 1, 1, n + 1), g.slice(control, 1, 0, n));
    auto dist = g.power(g.add_scalar(g.sum(g.multiply(diff, diff), 2), kDistanceEpsilon), 0.5);  // [N, n]

    RegularizerVars r;
    r.r1 = g.mean(dist);
    r.r2 = g.mean(g.max(dist, 1));
    r.r3 = g.scale(g.sum(g.abs(weights)), 1.0 / static_cast<double>(N * n));
    const double denom = static_cast<double>(N * parts * std::max<std::size_t>(components - 1, 1));
    r.r4 = g.scale(g.add(g.sum(g.abs(g.add_scalar(a, -1.0))), g.sum(g.abs(g.add_scalar(b, -1.0)))), 1.0 / denom);
    return r;
}

Var combined_objective(Graph& g, Var lg, Var li, const RegularizerVars& r, const Lambdas& lambda) {
    auto total = g.subtract(lg, g.scale(li, lambda[0]));
    const Var terms[] = {r.r1, r.r2, r.r3, r.r4};
    for (std::size_t i = 0; i < 4; ++i) total = g.add(total, g.scale(terms[i], lambda[i + 1]));
    return total;
}

GanLosses gan_losses(std::span<const double> real_logits, std::span<const double> fake_logits) {
    if (real_logits.empty() || fake_logits.empty()) throw ShapeError("empty logit batch");
    Graph g;
    auto r = g.input("real", {real_logits.size()});
    auto f = g.input("fake", {fake_logits.size()});
    auto ld = discriminator_loss(g, r, f);
    auto lg = generator_loss(g, f);
    ad::Bindings b{{"real", Tensor({real_logits.size()}, {real_logits.begin(), real_logits.end()})},
                   {"fake", Tensor({fake_logits.size()}, {fake_logits.begin(), fake_logits.end()})}};
    const Var outs[] = {ld, lg};
    g.evaluate(outs, b);
    return {g.value(ld).item(), g.value(lg).item()};
}

double mutual_info_lower_bound(const Tensor& q_mean, const Tensor& q_logvar, const Tensor& c) {
    Graph g;
    auto li = mutual_info(g, g.input("m", q_mean.shape()), g.input("lv", q_logvar.shape()), g.input("c", c.shape()));
    return g.evaluate(li, {{"m", q_mean}, {"lv", q_logvar}, {"c", c}}).item();
}

RegularizerValues regularizer_values(const Tensor& control, const Tensor& weights, const Tensor& a, const Tensor& b,
                                     std::size_t components) {
    Graph g;
    const auto r = regularizers(g, g.input("P", control.shape()), g.input("w", weights.shape()),
                                g.input("a", a.shape()), g.input("b", b.shape()), components);
    const Var outs[] = {r.r1, r.r2, r.r3, r.r4};
    g.evaluate(outs, {{"P", control}, {"w", weights}, {"a", a}, {"b", b}});
    return {g.value(r.r1).item(), g.value(r.r2).item(), g.value(r.r3).item(), g.value(r.r4).item()};
}

double combined_generator_objective(double lg, double li, const RegularizerValues& r, const Lambdas& lambda) {
    return lg - lambda[0] * li + lambda[1] * r.r1 + lambda[2] * r.r2 + lambda[3] * r.r3 + lambda[4] * r.r4;
}

} // namespace curvegan::train
