#include "doctest.h"

#include "../support/gradcheck.hpp"
#include "../support/primitive_cases.hpp"

#include "curvegan/autodiff/graph.hpp"
#include "curvegan/error.hpp"

#include <cmath>
#include <random>

using namespace curvegan;
using namespace curvegan::ad;
using curvegan::testing::check_gradients;
using curvegan::testing::random_tensor;

namespace {

// Direct nested-loop cross-correlation with left padding k/2.
Tensor naive_conv1d(const Tensor& x, const Tensor& k, std::size_t stride) {
    const std::size_t B = x.dim(0), L = x.dim(1), Ci = x.dim(2);
    const std::size_t K = k.dim(0), Co = k.dim(2);
    const std::size_t Lo = (L + stride - 1) / stride;
    Tensor out({B, Lo, Co});
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t o = 0; o < Lo; ++o)
            for (std::size_t d = 0; d < Co; ++d) {
                double acc = 0.0;
                for (std::size_t j = 0; j < K; ++j) {
                    const long t = static_cast<long>(o * stride + j) - static_cast<long>(K / 2);
                    if (t < 0 || t >= static_cast<long>(L)) continue;
                    for (std::size_t c = 0; c < Ci; ++c) acc += x.at(b, static_cast<std::size_t>(t), c) * k.at(j, c, d);
                }
                out.at(b, o, d) = acc;
            }
    return out;
}

} // namespace

TEST_CASE("evaluate: closed-form examples") {
    Graph g;
    auto x = g.input("x", {});
    auto sq = g.multiply(x, x);
    CHECK(g.evaluate(sq, {{"x", Tensor::scalar(3.0)}}).item() == 9.0);

    Graph g2;
    auto a = g2.input("A", {3, 4});
    Tensor eye({3, 3});
    for (std::size_t i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
    auto prod = g2.matmul(g2.constant(eye), a);
    std::mt19937_64 rng(1);
    const auto A = random_tensor({3, 4}, rng);
    CHECK(g2.evaluate(prod, {{"A", A}}) == A);

    Graph g3;
    auto s = g3.softmax(g3.input("v", {3}));
    const auto& y = g3.evaluate(s, {{"v", Tensor::vector({0, 0, 0})}});
    for (double v : y.storage()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("gradient: closed-form examples") {
    Graph g;
    auto x = g.input("x", {});
    auto out = g.power(x, 2.0);
    const std::string wrt[] = {"x"};
    auto grads = g.gradient(out, {{"x", Tensor::scalar(3.0)}}, wrt);
    CHECK(grads.at("x").item() == doctest::Approx(6.0));

    Graph g2;
    auto v = g2.input("x", {2});
    auto s = g2.sum(g2.leaky_relu(v, 0.2));
    auto gl = g2.gradient(s, {{"x", Tensor::vector({-1.0, 2.0})}}, wrt);
    CHECK(gl.at("x")[0] == doctest::Approx(0.2));
    CHECK(gl.at("x")[1] == doctest::Approx(1.0));
}

TEST_CASE("gradient: random three-layer MLP matches finite differences") {
    std::mt19937_64 rng(7);
    Graph g;
    auto x = g.input("x", {4, 5});
    auto w1 = g.input("w1", {5, 8});
    auto b1 = g.input("b1", {8});
    auto w2 = g.input("w2", {8, 6});
    auto b2 = g.input("b2", {6});
    auto w3 = g.input("w3", {6, 1});
    auto h1 = g.tanh(g.add(g.matmul(x, w1), b1));
    auto h2 = g.softplus(g.add(g.matmul(h1, w2), b2));
    auto out = g.mean(g.sigmoid(g.matmul(h2, w3)));
    Bindings b{{"x", random_tensor({4, 5}, rng)},  {"w1", random_tensor({5, 8}, rng)},
               {"b1", random_tensor({8}, rng)},    {"w2", random_tensor({8, 6}, rng)},
               {"b2", random_tensor({6}, rng)},    {"w3", random_tensor({6, 1}, rng)}};
    auto res = check_gradients(g, out, b, {"x", "w1", "b1", "w2", "b2", "w3"});
    INFO(res.worst_at);
    CHECK(res.ok);
}

TEST_CASE("conv1d examples and naive oracle") {
    Graph g;
    auto x = g.input("x", {4, 1});
    auto k = g.input("k", {3, 1, 1});
    auto id = g.conv1d(x, k, 1);
    auto y = g.evaluate(id, {{"x", Tensor({4, 1}, {1, 2, 3, 4})}, {"k", Tensor({3, 1, 1}, {0, 1, 0})}});
    CHECK(y.storage() == std::vector<double>{1, 2, 3, 4});

    Graph g2;
    auto x2 = g2.input("x", {4, 1});
    auto k2 = g2.input("k", {3, 1, 1});
    auto s2 = g2.conv1d(x2, k2, 2);
    auto y2 = g2.evaluate(s2, {{"x", Tensor({4, 1}, {1, 1, 1, 1})}, {"k", Tensor({3, 1, 1}, {1, 1, 1})}});
    CHECK(y2.storage() == std::vector<double>{2, 3});

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t stride = 1 + trial % 3;
        Graph g3;
        auto xv = g3.input("x", {2, 9, 3});
        auto kv = g3.input("k", {5, 3, 4});
        auto out = g3.conv1d(xv, kv, stride);
        const auto X = random_tensor({2, 9, 3}, rng);
        const auto K = random_tensor({5, 3, 4}, rng);
        const auto& got = g3.evaluate(out, {{"x", X}, {"k", K}});
        const auto expect = naive_conv1d(X, K, stride);
        REQUIRE(got.shape() == expect.shape());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    }
}

TEST_CASE("conv_transpose1d is the adjoint of conv1d") {
    // <conv(x), y> == <x, convT(y)> for the same kernels.
    std::mt19937_64 rng(3);
    for (std::size_t stride : {1u, 2u}) {
        const std::size_t L = 8, Ci = 3, Co = 2;
        const auto X = random_tensor({1, L, Ci}, rng);
        const auto K = random_tensor({5, Ci, Co}, rng);
        const std::size_t Lo = (L + stride - 1) / stride;
        const auto Y = random_tensor({1, Lo, Co}, rng);
        Tensor Kt({5, Co, Ci});
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t c = 0; c < Ci; ++c)
                for (std::size_t d = 0; d < Co; ++d) Kt.at(j, d, c) = K.at(j, c, d);
        Graph g;
        auto conv = g.conv1d(g.constant(X), g.constant(K), stride);
        auto convt = g.conv_transpose1d(g.constant(Y), g.constant(Kt), stride);
        const auto a = g.evaluate(conv, {});
        const auto b = g.evaluate(convt, {});
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) lhs += a[i] * Y[i];
        for (std::size_t i = 0; i < b.size(); ++i) rhs += b[i] * X[i];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("every primitive matches central finite differences on 50 instances") {
    for (const auto& pc : curvegan::testing::primitive_cases()) {
        std::mt19937_64 rng(std::hash<std::string>{}(pc.name));
        for (int i = 0; i < 50; ++i) {
            auto c = pc.build(rng);
            auto res = check_gradients(c.graph, c.out, c.bindings, c.wrt);
            INFO(pc.name, " instance ", i, ": ", res.worst_at);
            REQUIRE(res.ok);
        }
    }
}

TEST_CASE("softmax rows are nonnegative and sum to one") {
    std::mt19937_64 rng(5);
    Graph g;
    auto s = g.softmax(g.input("x", {20, 7}));
    const auto& y = g.evaluate(s, {{"x", random_tensor({20, 7}, rng, -30.0, 30.0)}});
    for (std::size_t r = 0; r < 20; ++r) {
        double total = 0.0;
        for (std::size_t c = 0; c < 7; ++c) {
            CHECK(y.at(r, c) >= 0.0);
            total += y.at(r, c);
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("evaluate is deterministic") {
    std::mt19937_64 rng(9);
    Graph g;
    auto x = g.input("x", {3, 4});
    auto out = g.softmax(g.tanh(g.matmul(x, g.constant(random_tensor({4, 5}, rng)))));
    Bindings b{{"x", random_tensor({3, 4}, rng)}};
    const Tensor first = g.evaluate(out, b);
    const Tensor second = g.evaluate(out, b);
    CHECK(first == second);
}

TEST_CASE("error paths") {
    Graph g;
    auto a = g.input("a", {2, 3});
    auto b = g.input("b", {4, 2});
    CHECK_THROWS_AS(g.matmul(a, b), ShapeError);
    CHECK_THROWS_AS(g.add(a, b), ShapeError);

    auto s = g.sum(a);
    CHECK_THROWS_AS(g.evaluate(s, {}), UnboundInputError);
    try {
        g.evaluate(s, {{"a", Tensor({3, 2})}});
        FAIL("expected shape error");
    } catch (const ShapeError& e) {
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }

    const std::string bad[] = {"nope"};
    CHECK_THROWS_AS(g.gradient(s, {{"a", Tensor({2, 3})}}, bad), GradientError);
    const std::string wa[] = {"a"};
    CHECK_THROWS_AS(g.gradient(a, {{"a", Tensor({2, 3})}}, wa), GradientError);

    // Log and divide clamp their arguments at 1e-12.
    Graph g2;
    auto z = g2.input("z", {});
    auto l = g2.log(z);
    CHECK(g2.evaluate(l, {{"z", Tensor::scalar(0.0)}}).item() == doctest::Approx(std::log(1e-12)));
    auto d = g2.divide(g2.constant(Tensor::scalar(1.0)), z);
    CHECK(std::isfinite(g2.evaluate(d, {{"z", Tensor::scalar(0.0)}}).item()));
}
