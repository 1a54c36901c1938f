#pragma once

#include "curvegan/autodiff/tensor.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace curvegan::ad {

enum class OpKind : std::uint8_t {
    Input,
    Constant,
    MatMul,
    Add,
    Subtract,
    Multiply,
    Divide,
    Power,
    Exp,
    Log,
    Abs,
    Sum,
    Mean,
    Max,
    Concat,
    Reshape,
    Slice,
    Reverse,
    Sigmoid,
    Tanh,
    Softplus,
    Softmax,
    LeakyRelu,
    Conv1d,
    ConvTranspose1d,
    RationalBezier,
    Kumaraswamy,
};

std::string_view op_name(OpKind kind);

// Clamp applied to log arguments and divide denominators.
inline constexpr double kStabilityFloor = 1e-12;

// Handle to a node of a Graph. Only meaningful for the graph that created it.
struct Var {
    std::uint32_t id = UINT32_MAX;
    bool valid() const noexcept { return id != UINT32_MAX; }
    friend bool operator==(Var, Var) = default;
};

using Bindings = std::unordered_map<std::string, Tensor>;
using Gradients = std::map<std::string, Tensor>;

// Define-then-run computation graph over dense double tensors.
//
// Nodes are appended in topological order; shapes are fixed when a node is
// built. Named inputs are bound at evaluation time and must match their
// declared shape. Binary arithmetic broadcasts when one operand's shape is a
// suffix of the other's (a rank-0 tensor is a suffix of every shape).
class Graph {
public:
    Var input(std::string name, Shape shape);
    Var constant(Tensor value);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var subtract(Var a, Var b);
    Var multiply(Var a, Var b);
    Var divide(Var a, Var b);
    Var power(Var x, double exponent);
    Var exp(Var x);
    Var log(Var x);
    Var abs(Var x);
    Var sigmoid(Var x);
    Var tanh(Var x);
    Var softplus(Var x);
    Var leaky_relu(Var x, double alpha = 0.2);
    Var softmax(Var x);  // along the last axis

    Var sum(Var x);  // full reduction to rank 0
    Var sum(Var x, std::size_t axis);
    Var mean(Var x);
    Var mean(Var x, std::size_t axis);
    Var max(Var x);
    Var max(Var x, std::size_t axis);

    Var concat(std::span<const Var> parts, std::size_t axis);
    Var reshape(Var x, Shape shape);
    Var slice(Var x, std::size_t axis, std::size_t begin, std::size_t end);
    Var reverse(Var x, std::size_t axis);

    // x: [length, in] or [batch, length, in]; kernels: [k, in, out].
    // Zero padding of k/2 on the left; output length ceil(length / stride).
    Var conv1d(Var x, Var kernels, std::size_t stride);
    // Adjoint of conv1d: output length = length * stride.
    Var conv_transpose1d(Var x, Var kernels, std::size_t stride);

    // control: [n+1, 2] or [B, n+1, 2]; weights: [n+1] or [B, n+1];
    // u: [m+1] or [B, m+1]. Output [m+1, 2] or [B, m+1, 2].
    Var rational_bezier(Var control, Var weights, Var u);
    // u_prime: [m+1]; a, b, c: [K] or [B, K]. Output [m+1] or [B, m+1].
    Var kumaraswamy(Var u_prime, Var a, Var b, Var c);

    Var scale(Var x, double factor);
    Var add_scalar(Var x, double offset);
    Var negate(Var x) { return scale(x, -1.0); }

    void set_label(Var v, std::string label);
    std::string describe(Var v) const;
    const Shape& shape(Var v) const;
    OpKind kind(Var v) const;
    std::size_t size() const noexcept { return nodes_.size(); }
    bool has_input(const std::string& name) const { return inputs_.contains(name); }
    // Existing input with this name (shape must match), or a new one.
    Var shared_input(const std::string& name, const Shape& shape);

    // Forward pass over the ancestors of `out`; values stay cached for value().
    const Tensor& evaluate(Var out, const Bindings& bindings);
    void evaluate(std::span<const Var> outs, const Bindings& bindings);
    const Tensor& value(Var v) const;

    // d(out)/d(input) for every requested input name; `out` must be rank-0 or size 1.
    Gradients gradient(Var out, const Bindings& bindings, std::span<const std::string> wrt);

private:
    struct Node {
        OpKind op = OpKind::Input;
        std::vector<std::uint32_t> inputs;
        Shape shape;
        std::string label;
        double scalar = 0.0;
        std::size_t axis = 0;
        std::size_t stride = 1;
        std::size_t begin = 0;
        std::size_t end = 0;
        bool reduce_all = false;
        Tensor value;
        Tensor adjoint;
    };

    Var push(Node node);
    Var unary(OpKind op, Var x, double scalar = 0.0);
    Var binary(OpKind op, Var a, Var b);
    Var reduce(OpKind op, Var x, bool all, std::size_t axis);
    const Node& node(Var v) const;
    std::vector<std::uint32_t> ancestors(std::span<const Var> outs) const;
    void run_forward(const std::vector<std::uint32_t>& order, const Bindings& bindings);
    void forward_node(Node& n);
    void backward_node(Node& n, const std::vector<char>& needs);

    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::uint32_t> inputs_;
};

} // namespace curvegan::ad
