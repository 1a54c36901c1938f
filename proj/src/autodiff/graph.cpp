#include "curvegan/autodiff/graph.hpp"

#include "curvegan/error.hpp"
#include "curvegan/geometry/bezier.hpp"
#include "curvegan/geometry/kumaraswamy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace curvegan::ad {
namespace {

bool is_suffix(const Shape& small, const Shape& big) {
    if (small.size() > big.size()) return false;
    return std::equal(small.rbegin(), small.rend(), big.rbegin());
}

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double stable_softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double clamp_denominator(double b) {
    if (std::abs(b) >= kStabilityFloor) return b;
    return b < 0.0 ? -kStabilityFloor : kStabilityFloor;
}

// Splits a shape around `axis` into (outer, extent, inner) strides.
struct AxisSplit {
    std::size_t outer = 1;
    std::size_t extent = 1;
    std::size_t inner = 1;
};

AxisSplit split_axis(const Shape& shape, std::size_t axis) {
    AxisSplit s;
    for (std::size_t d = 0; d < axis; ++d) s.outer *= shape[d];
    s.extent = shape[axis];
    for (std::size_t d = axis + 1; d < shape.size(); ++d) s.inner *= shape[d];
    return s;
}

} // namespace

std::string_view op_name(OpKind kind) {
    switch (kind) {
    case OpKind::Input: return "input";
    case OpKind::Constant: return "constant";
    case OpKind::MatMul: return "matmul";
    case OpKind::Add: return "add";
    case OpKind::Subtract: return "subtract";
    case OpKind::Multiply: return "multiply";
    case OpKind::Divide: return "divide";
    case OpKind::Power: return "power";
    case OpKind::Exp: return "exp";
    case OpKind::Log: return "log";
    case OpKind::Abs: return "abs";
    case OpKind::Sum: return "sum";
    case OpKind::Mean: return "mean";
    case OpKind::Max: return "max";
    case OpKind::Concat: return "concat";
    case OpKind::Reshape: return "reshape";
    case OpKind::Slice: return "slice";
    case OpKind::Reverse: return "reverse";
    case OpKind::Sigmoid: return "sigmoid";
    case OpKind::Tanh: return "tanh";
    case OpKind::Softplus: return "softplus";
    case OpKind::Softmax: return "softmax";
    case OpKind::LeakyRelu: return "leaky_relu";
    case OpKind::Conv1d: return "conv1d";
    case OpKind::ConvTranspose1d: return "conv_transpose1d";
    case OpKind::RationalBezier: return "rational_bezier";
    case OpKind::Kumaraswamy: return "kumaraswamy";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Construction

Var Graph::push(Node node) {
    node.value = Tensor(node.shape);
    nodes_.push_back(std::move(node));
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Graph::Node& Graph::node(Var v) const {
    if (!v.valid() || v.id >= nodes_.size()) throw ShapeError("invalid graph handle");
    return nodes_[v.id];
}

void Graph::set_label(Var v, std::string label) {
    node(v);
    nodes_[v.id].label = std::move(label);
}

std::string Graph::describe(Var v) const {
    const auto& n = node(v);
    std::string s = "node #" + std::to_string(v.id) + " (" + std::string(op_name(n.op));
    if (!n.label.empty()) s += " '" + n.label + "'";
    return s + ")";
}

const Shape& Graph::shape(Var v) const { return node(v).shape; }
OpKind Graph::kind(Var v) const { return node(v).op; }

Var Graph::input(std::string name, Shape shape) {
    if (inputs_.contains(name)) throw ShapeError("duplicate graph input '" + name + "'");
    for (auto d : shape)
        if (d == 0) throw ShapeError("input '" + name + "' has a zero dimension");
    Node n;
    n.op = OpKind::Input;
    n.shape = std::move(shape);
    n.label = name;
    auto v = push(std::move(n));
    inputs_.emplace(std::move(name), v.id);
    return v;
}

Var Graph::shared_input(const std::string& name, const Shape& shape) {
    if (auto it = inputs_.find(name); it != inputs_.end()) {
        if (nodes_[it->second].shape != shape)
            throw ShapeError("input '" + name + "' redeclared with shape " + shape_string(shape) + ", was " +
                             shape_string(nodes_[it->second].shape));
        return Var{it->second};
    }
    return input(name, shape);
}

Var Graph::constant(Tensor value) {
    Node n;
    n.op = OpKind::Constant;
    n.shape = value.shape();
    auto v = push(std::move(n));
    nodes_[v.id].value = std::move(value);
    return v;
}

Var Graph::unary(OpKind op, Var x, double scalar) {
    Node n;
    n.op = op;
    n.inputs = {x.id};
    n.shape = node(x).shape;
    n.scalar = scalar;
    return push(std::move(n));
}

Var Graph::binary(OpKind op, Var a, Var b) {
    const auto& sa = node(a).shape;
    const auto& sb = node(b).shape;
    Shape out;
    if (is_suffix(sb, sa))
        out = sa;
    else if (is_suffix(sa, sb))
        out = sb;
    else
        throw ShapeError(std::string(op_name(op)) + ": incompatible shapes " + shape_string(sa) + " (" +
                         describe(a) + ") and " + shape_string(sb) + " (" + describe(b) + ")");
    Node n;
    n.op = op;
    n.inputs = {a.id, b.id};
    n.shape = std::move(out);
    return push(std::move(n));
}

Var Graph::matmul(Var a, Var b) {
    const auto& sa = node(a).shape;
    const auto& sb = node(b).shape;
    if (sa.size() != 2 || sb.size() != 2 || sa[1] != sb[0])
        throw ShapeError("matmul: incompatible shapes " + shape_string(sa) + " (" + describe(a) + ") and " +
                         shape_string(sb) + " (" + describe(b) + ")");
    Node n;
    n.op = OpKind::MatMul;
    n.inputs = {a.id, b.id};
    n.shape = {sa[0], sb[1]};
    return push(std::move(n));
}

Var Graph::add(Var a, Var b) { return binary(OpKind::Add, a, b); }
Var Graph::subtract(Var a, Var b) { return binary(OpKind::Subtract, a, b); }
Var Graph::multiply(Var a, Var b) { return binary(OpKind::Multiply, a, b); }
Var Graph::divide(Var a, Var b) { return binary(OpKind::Divide, a, b); }
Var Graph::power(Var x, double exponent) { return unary(OpKind::Power, x, exponent); }
Var Graph::exp(Var x) { return unary(OpKind::Exp, x); }
Var Graph::log(Var x) { return unary(OpKind::Log, x); }
Var Graph::abs(Var x) { return unary(OpKind::Abs, x); }
Var Graph::sigmoid(Var x) { return unary(OpKind::Sigmoid, x); }
Var Graph::tanh(Var x) { return unary(OpKind::Tanh, x); }
Var Graph::softplus(Var x) { return unary(OpKind::Softplus, x); }
Var Graph::leaky_relu(Var x, double alpha) { return unary(OpKind::LeakyRelu, x, alpha); }

Var Graph::softmax(Var x) {
    if (node(x).shape.empty()) throw ShapeError("softmax needs rank >= 1 (" + describe(x) + ")");
    return unary(OpKind::Softmax, x);
}

Var Graph::scale(Var x, double factor) { return multiply(x, constant(Tensor::scalar(factor))); }
Var Graph::add_scalar(Var x, double offset) { return add(x, constant(Tensor::scalar(offset))); }

Var Graph::reduce(OpKind op, Var x, bool all, std::size_t axis) {
    const auto& s = node(x).shape;
    Node n;
    n.op = op;
    n.inputs = {x.id};
    n.reduce_all = all;
    if (!all) {
        if (axis >= s.size())
            throw ShapeError(std::string(op_name(op)) + ": axis " + std::to_string(axis) + " out of range for " +
                             describe(x));
        n.axis = axis;
        n.shape = s;
        n.shape.erase(n.shape.begin() + static_cast<std::ptrdiff_t>(axis));
    }
    return push(std::move(n));
}

Var Graph::sum(Var x) { return reduce(OpKind::Sum, x, true, 0); }
Var Graph::sum(Var x, std::size_t axis) { return reduce(OpKind::Sum, x, false, axis); }
Var Graph::mean(Var x) { return reduce(OpKind::Mean, x, true, 0); }
Var Graph::mean(Var x, std::size_t axis) { return reduce(OpKind::Mean, x, false, axis); }
Var Graph::max(Var x) { return reduce(OpKind::Max, x, true, 0); }
Var Graph::max(Var x, std::size_t axis) { return reduce(OpKind::Max, x, false, axis); }

Var Graph::concat(std::span<const Var> parts, std::size_t axis) {
    if (parts.empty()) throw ShapeError("concat of zero tensors");
    Shape out = node(parts[0]).shape;
    if (axis >= out.size()) throw ShapeError("concat: axis out of range for " + describe(parts[0]));
    Node n;
    n.op = OpKind::Concat;
    n.axis = axis;
    n.inputs.push_back(parts[0].id);
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const auto& s = node(parts[k]).shape;
        bool ok = s.size() == out.size();
        for (std::size_t d = 0; ok && d < s.size(); ++d)
            if (d != axis && s[d] != out[d]) ok = false;
        if (!ok)
            throw ShapeError("concat: shape " + shape_string(s) + " of " + describe(parts[k]) +
                             " does not match " + shape_string(out));
        out[axis] += s[axis];
        n.inputs.push_back(parts[k].id);
    }
    n.shape = std::move(out);
    return push(std::move(n));
}

Var Graph::reshape(Var x, Shape shape) {
    if (shape_size(shape) != shape_size(node(x).shape))
        throw ShapeError("reshape: cannot view " + describe(x) + " of shape " + shape_string(node(x).shape) + " as " +
                         shape_string(shape));
    Node n;
    n.op = OpKind::Reshape;
    n.inputs = {x.id};
    n.shape = std::move(shape);
    return push(std::move(n));
}

Var Graph::slice(Var x, std::size_t axis, std::size_t begin, std::size_t end) {
    const auto& s = node(x).shape;
    if (axis >= s.size() || begin >= end || end > s[axis])
        throw ShapeError("slice: bad range [" + std::to_string(begin) + "," + std::to_string(end) + ") on axis " +
                         std::to_string(axis) + " of " + describe(x));
    Node n;
    n.op = OpKind::Slice;
    n.inputs = {x.id};
    n.axis = axis;
    n.begin = begin;
    n.end = end;
    n.shape = s;
    n.shape[axis] = end - begin;
    return push(std::move(n));
}

Var Graph::reverse(Var x, std::size_t axis) {
    if (axis >= node(x).shape.size()) throw ShapeError("reverse: axis out of range for " + describe(x));
    Node n;
    n.op = OpKind::Reverse;
    n.inputs = {x.id};
    n.axis = axis;
    n.shape = node(x).shape;
    return push(std::move(n));
}

Var Graph::conv1d(Var x, Var kernels, std::size_t stride) {
    const auto& sx = node(x).shape;
    const auto& sk = node(kernels).shape;
    if (stride == 0) throw ShapeError("conv1d: stride must be positive");
    if ((sx.size() != 2 && sx.size() != 3) || sk.size() != 3 || sk[1] != sx.back() || sk[0] % 2 == 0)
        throw ShapeError("conv1d: input " + shape_string(sx) + " (" + describe(x) + ") incompatible with kernels " +
                         shape_string(sk) + " (" + describe(kernels) + ")");
    const std::size_t length = sx[sx.size() - 2];
    if (length < sk[0]) throw ShapeError("conv1d: length shorter than kernel in " + describe(x));
    Node n;
    n.op = OpKind::Conv1d;
    n.inputs = {x.id, kernels.id};
    n.stride = stride;
    n.shape = sx;
    n.shape[sx.size() - 2] = (length + stride - 1) / stride;
    n.shape.back() = sk[2];
    return push(std::move(n));
}

Var Graph::conv_transpose1d(Var x, Var kernels, std::size_t stride) {
    const auto& sx = node(x).shape;
    const auto& sk = node(kernels).shape;
    if (stride == 0) throw ShapeError("conv_transpose1d: stride must be positive");
    if ((sx.size() != 2 && sx.size() != 3) || sk.size() != 3 || sk[1] != sx.back() || sk[0] % 2 == 0)
        throw ShapeError("conv_transpose1d: input " + shape_string(sx) + " (" + describe(x) +
                         ") incompatible with kernels " + shape_string(sk) + " (" + describe(kernels) + ")");
    Node n;
    n.op = OpKind::ConvTranspose1d;
    n.inputs = {x.id, kernels.id};
    n.stride = stride;
    n.shape = sx;
    n.shape[sx.size() - 2] *= stride;
    n.shape.back() = sk[2];
    return push(std::move(n));
}

Var Graph::rational_bezier(Var control, Var weights, Var u) {
    const auto& sp = node(control).shape;
    const auto& sw = node(weights).shape;
    const auto& su = node(u).shape;
    const bool batched = sp.size() == 3;
    bool ok = (sp.size() == 2 || batched) && sp.back() == 2 && sw.size() == sp.size() - 1 &&
              su.size() == sp.size() - 1 && sw.back() == sp[sp.size() - 2];
    if (ok && batched) ok = sw[0] == sp[0] && su[0] == sp[0];
    if (!ok)
        throw ShapeError("rational_bezier: control " + shape_string(sp) + ", weights " + shape_string(sw) + ", u " +
                         shape_string(su) + " are inconsistent (" + describe(control) + ")");
    const std::size_t ncp = sp[sp.size() - 2];
    if (ncp < 2 || ncp - 1 > static_cast<std::size_t>(geom::kMaxDegree))
        throw ShapeError("rational_bezier: degree out of range in " + describe(control));
    Node n;
    n.op = OpKind::RationalBezier;
    n.inputs = {control.id, weights.id, u.id};
    n.shape = batched ? Shape{sp[0], su[1], 2} : Shape{su[0], 2};
    return push(std::move(n));
}

Var Graph::kumaraswamy(Var u_prime, Var a, Var b, Var c) {
    const auto& s0 = node(u_prime).shape;
    const auto& sa = node(a).shape;
    if (s0.size() != 1 || (sa.size() != 1 && sa.size() != 2) || node(b).shape != sa || node(c).shape != sa)
        throw ShapeError("kumaraswamy: u' must be rank 1 and a, b, c share a rank-1 or rank-2 shape (" +
                         describe(a) + ")");
    Node n;
    n.op = OpKind::Kumaraswamy;
    n.inputs = {u_prime.id, a.id, b.id, c.id};
    n.shape = sa.size() == 2 ? Shape{sa[0], s0[0]} : Shape{s0[0]};
    return push(std::move(n));
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<std::uint32_t> Graph::ancestors(std::span<const Var> outs) const {
    std::vector<char> mark(nodes_.size(), 0);
    std::vector<std::uint32_t> stack;
    for (auto v : outs) {
        node(v);
        stack.push_back(v.id);
    }
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        if (mark[id]) continue;
        mark[id] = 1;
        for (auto in : nodes_[id].inputs) stack.push_back(in);
    }
    std::vector<std::uint32_t> order;
    for (std::uint32_t id = 0; id < nodes_.size(); ++id)
        if (mark[id]) order.push_back(id);
    return order;
}

void Graph::run_forward(const std::vector<std::uint32_t>& order, const Bindings& bindings) {
    for (auto id : order) {
        auto& n = nodes_[id];
        if (n.op == OpKind::Input) {
            auto it = bindings.find(n.label);
            if (it == bindings.end()) throw UnboundInputError("input '" + n.label + "' is not bound");
            if (it->second.shape() != n.shape)
                throw ShapeError("binding for " + describe(Var{id}) + " has shape " +
                                 shape_string(it->second.shape()) + ", expected " + shape_string(n.shape));
            std::copy(it->second.storage().begin(), it->second.storage().end(), n.value.storage().begin());
        } else if (n.op != OpKind::Constant) {
            forward_node(n);
        }
    }
}

const Tensor& Graph::evaluate(Var out, const Bindings& bindings) {
    const Var outs[] = {out};
    run_forward(ancestors(outs), bindings);
    return nodes_[out.id].value;
}

void Graph::evaluate(std::span<const Var> outs, const Bindings& bindings) { run_forward(ancestors(outs), bindings); }

const Tensor& Graph::value(Var v) const { return node(v).value; }

Gradients Graph::gradient(Var out, const Bindings& bindings, std::span<const std::string> wrt) {
    if (shape_size(node(out).shape) != 1)
        throw GradientError("gradient needs a scalar output, " + describe(out) + " has shape " +
                            shape_string(node(out).shape));
    std::unordered_set<std::uint32_t> targets;
    for (const auto& name : wrt) {
        auto it = inputs_.find(name);
        if (it == inputs_.end()) throw GradientError("'" + name + "' is not an input of the graph");
        targets.insert(it->second);
    }

    const Var outs[] = {out};
    const auto order = ancestors(outs);
    run_forward(order, bindings);

    std::vector<char> needs(nodes_.size(), 0);
    for (auto id : order) {
        auto& n = nodes_[id];
        bool need = n.op == OpKind::Input && targets.contains(id);
        for (auto in : n.inputs) need = need || needs[in];
        needs[id] = need;
        if (need) {
            if (n.adjoint.shape() != n.shape || n.adjoint.size() != n.value.size())
                n.adjoint = Tensor(n.shape);
            else
                n.adjoint.fill(0.0);
        }
    }

    Gradients grads;
    if (needs[out.id]) {
        nodes_[out.id].adjoint.fill(1.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto& n = nodes_[*it];
            if (needs[*it] && !n.inputs.empty()) backward_node(n, needs);
        }
    }
    for (const auto& name : wrt) {
        const auto id = inputs_.at(name);
        grads[name] = needs[id] ? nodes_[id].adjoint : Tensor(nodes_[id].shape);
    }
    return grads;
}

// ---------------------------------------------------------------------------
// Forward kernels

void Graph::forward_node(Node& n) {
    auto& out = n.value.storage();
    const auto in = [&](std::size_t k) -> const Tensor& { return nodes_[n.inputs[k]].value; };

    switch (n.op) {
    case OpKind::Input:
    case OpKind::Constant: return;

    case OpKind::MatMul: {
        const auto& a = in(0);
        const auto& b = in(1);
        const std::size_t M = a.dim(0), K = a.dim(1), N = b.dim(1);
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t k = 0; k < K; ++k) {
                const double av = a[i * K + k];
                const double* brow = &b.storage()[k * N];
                double* orow = &out[i * N];
                for (std::size_t j = 0; j < N; ++j) orow[j] += av * brow[j];
            }
        return;
    }

    case OpKind::Add:
    case OpKind::Subtract:
    case OpKind::Multiply:
    case OpKind::Divide: {
        const auto& a = in(0).storage();
        const auto& b = in(1).storage();
        const std::size_t na = a.size(), nb = b.size();
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double x = a[na == out.size() ? i : i % na];
            const double y = b[nb == out.size() ? i : i % nb];
            switch (n.op) {
            case OpKind::Add: out[i] = x + y; break;
            case OpKind::Subtract: out[i] = x - y; break;
            case OpKind::Multiply: out[i] = x * y; break;
            default: out[i] = x / clamp_denominator(y); break;
            }
        }
        return;
    }

    case OpKind::Power:
    case OpKind::Exp:
    case OpKind::Log:
    case OpKind::Abs:
    case OpKind::Sigmoid:
    case OpKind::Tanh:
    case OpKind::Softplus:
    case OpKind::LeakyRelu: {
        const auto& x = in(0).storage();
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double v = x[i];
            switch (n.op) {
            case OpKind::Power: out[i] = std::pow(v, n.scalar); break;
            case OpKind::Exp: out[i] = std::exp(v); break;
            case OpKind::Log: out[i] = std::log(std::max(v, kStabilityFloor)); break;
            case OpKind::Abs: out[i] = std::abs(v); break;
            case OpKind::Sigmoid: out[i] = stable_sigmoid(v); break;
            case OpKind::Tanh: out[i] = std::tanh(v); break;
            case OpKind::Softplus: out[i] = stable_softplus(v); break;
            default: out[i] = v > 0.0 ? v : n.scalar * v; break;
            }
        }
        return;
    }

    case OpKind::Softmax: {
        const auto& x = in(0).storage();
        const std::size_t cols = n.shape.back();
        for (std::size_t r = 0; r < out.size() / cols; ++r) {
            const double* xr = &x[r * cols];
            double* yr = &out[r * cols];
            const double mx = *std::max_element(xr, xr + cols);
            double total = 0.0;
            for (std::size_t c = 0; c < cols; ++c) total += (yr[c] = std::exp(xr[c] - mx));
            for (std::size_t c = 0; c < cols; ++c) yr[c] /= total;
        }
        return;
    }

    case OpKind::Sum:
    case OpKind::Mean:
    case OpKind::Max: {
        const auto& x = in(0);
        const auto& xs = x.storage();
        if (n.reduce_all) {
            double acc = n.op == OpKind::Max ? -std::numeric_limits<double>::infinity() : 0.0;
            for (double v : xs) acc = n.op == OpKind::Max ? std::max(acc, v) : acc + v;
            out[0] = n.op == OpKind::Mean ? acc / static_cast<double>(xs.size()) : acc;
            return;
        }
        const auto s = split_axis(x.shape(), n.axis);
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t i = 0; i < s.inner; ++i) {
                double acc = n.op == OpKind::Max ? -std::numeric_limits<double>::infinity() : 0.0;
                for (std::size_t l = 0; l < s.extent; ++l) {
                    const double v = xs[(o * s.extent + l) * s.inner + i];
                    acc = n.op == OpKind::Max ? std::max(acc, v) : acc + v;
                }
                out[o * s.inner + i] = n.op == OpKind::Mean ? acc / static_cast<double>(s.extent) : acc;
            }
        return;
    }

    case OpKind::Concat: {
        const auto s = split_axis(n.shape, n.axis);
        std::size_t offset = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) {
            const auto& x = in(k);
            const std::size_t ext = x.dim(n.axis);
            for (std::size_t o = 0; o < s.outer; ++o)
                std::copy_n(&x.storage()[o * ext * s.inner], ext * s.inner, &out[(o * s.extent + offset) * s.inner]);
            offset += ext;
        }
        return;
    }

    case OpKind::Reshape: {
        const auto& x = in(0).storage();
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }

    case OpKind::Slice: {
        const auto& x = in(0);
        const auto s = split_axis(x.shape(), n.axis);
        const std::size_t ext = n.end - n.begin;
        for (std::size_t o = 0; o < s.outer; ++o)
            std::copy_n(&x.storage()[(o * s.extent + n.begin) * s.inner], ext * s.inner, &out[o * ext * s.inner]);
        return;
    }

    case OpKind::Reverse: {
        const auto& x = in(0);
        const auto s = split_axis(x.shape(), n.axis);
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t l = 0; l < s.extent; ++l)
                std::copy_n(&x.storage()[(o * s.extent + l) * s.inner], s.inner,
                            &out[(o * s.extent + (s.extent - 1 - l)) * s.inner]);
        return;
    }

    case OpKind::Conv1d:
    case OpKind::ConvTranspose1d: {
        const auto& x = in(0);
        const auto& k = in(1);
        const std::size_t ksize = k.dim(0), ci = k.dim(1), co = k.dim(2);
        const std::size_t batch = x.rank() == 3 ? x.dim(0) : 1;
        const std::size_t lin = x.dim(x.rank() - 2);
        const std::size_t lout = n.shape[n.shape.size() - 2];
        const auto pad = static_cast<std::ptrdiff_t>(ksize / 2);
        const auto stride = static_cast<std::ptrdiff_t>(n.stride);
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t b = 0; b < batch; ++b) {
            const double* xb = &x.storage()[b * lin * ci];
            double* ob = &out[b * lout * co];
            if (n.op == OpKind::Conv1d) {
                for (std::size_t o = 0; o < lout; ++o)
                    for (std::size_t j = 0; j < ksize; ++j) {
                        const auto t = static_cast<std::ptrdiff_t>(o) * stride + static_cast<std::ptrdiff_t>(j) - pad;
                        if (t < 0 || t >= static_cast<std::ptrdiff_t>(lin)) continue;
                        for (std::size_t c = 0; c < ci; ++c) {
                            const double xv = xb[static_cast<std::size_t>(t) * ci + c];
                            const double* kr = &k.storage()[(j * ci + c) * co];
                            for (std::size_t d = 0; d < co; ++d) ob[o * co + d] += xv * kr[d];
                        }
                    }
            } else {
                for (std::size_t i = 0; i < lin; ++i)
                    for (std::size_t j = 0; j < ksize; ++j) {
                        const auto t = static_cast<std::ptrdiff_t>(i) * stride + static_cast<std::ptrdiff_t>(j) - pad;
                        if (t < 0 || t >= static_cast<std::ptrdiff_t>(lout)) continue;
                        for (std::size_t c = 0; c < ci; ++c) {
                            const double xv = xb[i * ci + c];
                            const double* kr = &k.storage()[(j * ci + c) * co];
                            for (std::size_t d = 0; d < co; ++d) ob[static_cast<std::size_t>(t) * co + d] += xv * kr[d];
                        }
                    }
            }
        }
        return;
    }

    case OpKind::RationalBezier: {
        const auto& P = in(0);
        const auto& w = in(1);
        const auto& u = in(2);
        const std::size_t ncp = w.shape().back();
        const std::size_t npts = u.shape().back();
        const std::size_t batch = u.size() / npts;
        const int degree = static_cast<int>(ncp) - 1;
        std::array<double, geom::kMaxDegree + 1> basis{};
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t j = 0; j < npts; ++j) {
                const double uj = u[b * npts + j];
                if (!(uj >= 0.0 && uj <= 1.0))
                    throw DomainError("rational_bezier: parameter " + std::to_string(uj) + " outside [0,1]");
                geom::bernstein_into(degree, uj, basis);
                double nx = 0.0, ny = 0.0, den = 0.0;
                for (std::size_t i = 0; i < ncp; ++i) {
                    const double bw = basis[i] * w[b * ncp + i];
                    nx += bw * P[(b * ncp + i) * 2];
                    ny += bw * P[(b * ncp + i) * 2 + 1];
                    den += bw;
                }
                if (den < geom::kDegenerateDenominator)
                    throw DegenerateCurveError("rational Bezier denominator " + std::to_string(den) +
                                               " below threshold at sample " + std::to_string(j));
                out[(b * npts + j) * 2] = nx / den;
                out[(b * npts + j) * 2 + 1] = ny / den;
            }
        return;
    }

    case OpKind::Kumaraswamy: {
        const auto& up = in(0);
        const auto& a = in(1);
        const auto& bb = in(2);
        const auto& c = in(3);
        const std::size_t comps = a.shape().back();
        const std::size_t npts = up.size();
        const std::size_t batch = a.size() / comps;
        for (std::size_t r = 0; r < batch; ++r)
            for (std::size_t j = 0; j < npts; ++j) {
                const double x = up[j];
                double acc;
                if (x <= 0.0)
                    acc = 0.0;
                else if (x >= 1.0)
                    acc = 1.0;
                else {
                    acc = 0.0;
                    for (std::size_t i = 0; i < comps; ++i)
                        acc += c[r * comps + i] * geom::kumaraswamy_cdf(x, a[r * comps + i], bb[r * comps + i]);
                    acc = std::clamp(acc, 0.0, 1.0);
                }
                out[r * npts + j] = acc;
            }
        return;
    }
    }
}

// ---------------------------------------------------------------------------
// Adjoint kernels

void Graph::backward_node(Node& n, const std::vector<char>& needs) {
    const auto& g = n.adjoint.storage();
    const auto& y = n.value.storage();
    const auto need = [&](std::size_t k) { return needs[n.inputs[k]] != 0; };
    const auto val = [&](std::size_t k) -> const Tensor& { return nodes_[n.inputs[k]].value; };
    const auto adj = [&](std::size_t k) -> std::vector<double>& { return nodes_[n.inputs[k]].adjoint.storage(); };

    switch (n.op) {
    case OpKind::Input:
    case OpKind::Constant: return;

    case OpKind::MatMul: {
        const auto& a = val(0);
        const auto& b = val(1);
        const std::size_t M = a.dim(0), K = a.dim(1), N = b.dim(1);
        if (need(0)) {
            auto& ga = adj(0);
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t k = 0; k < K; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < N; ++j) acc += g[i * N + j] * b[k * N + j];
                    ga[i * K + k] += acc;
                }
        }
        if (need(1)) {
            auto& gb = adj(1);
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t k = 0; k < K; ++k) {
                    const double av = a[i * K + k];
                    for (std::size_t j = 0; j < N; ++j) gb[k * N + j] += av * g[i * N + j];
                }
        }
        return;
    }

    case OpKind::Add:
    case OpKind::Subtract:
    case OpKind::Multiply:
    case OpKind::Divide: {
        const auto& a = val(0).storage();
        const auto& b = val(1).storage();
        const std::size_t na = a.size(), nb = b.size();
        const bool na_ = need(0), nb_ = need(1);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::size_t ia = i % na, ib = i % nb;
            double da = 0.0, db = 0.0;
            switch (n.op) {
            case OpKind::Add: da = 1.0; db = 1.0; break;
            case OpKind::Subtract: da = 1.0; db = -1.0; break;
            case OpKind::Multiply: da = b[ib]; db = a[ia]; break;
            default: {
                const double d = clamp_denominator(b[ib]);
                da = 1.0 / d;
                db = std::abs(b[ib]) >= kStabilityFloor ? -a[ia] / (d * d) : 0.0;
                break;
            }
            }
            if (na_) adj(0)[ia] += g[i] * da;
            if (nb_) adj(1)[ib] += g[i] * db;
        }
        return;
    }

    case OpKind::Power:
    case OpKind::Exp:
    case OpKind::Log:
    case OpKind::Abs:
    case OpKind::Sigmoid:
    case OpKind::Tanh:
    case OpKind::Softplus:
    case OpKind::LeakyRelu: {
        const auto& x = val(0).storage();
        auto& gx = adj(0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double v = x[i];
            double d;
            switch (n.op) {
            case OpKind::Power: d = n.scalar * std::pow(v, n.scalar - 1.0); break;
            case OpKind::Exp: d = y[i]; break;
            case OpKind::Log: d = v > kStabilityFloor ? 1.0 / v : 0.0; break;
            case OpKind::Abs: d = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); break;
            case OpKind::Sigmoid: d = y[i] * (1.0 - y[i]); break;
            case OpKind::Tanh: d = 1.0 - y[i] * y[i]; break;
            case OpKind::Softplus: d = stable_sigmoid(v); break;
            default: d = v > 0.0 ? 1.0 : n.scalar; break;
            }
            gx[i] += g[i] * d;
        }
        return;
    }

    case OpKind::Softmax: {
        auto& gx = adj(0);
        const std::size_t cols = n.shape.back();
        for (std::size_t r = 0; r < y.size() / cols; ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * y[r * cols + c];
            for (std::size_t c = 0; c < cols; ++c) gx[r * cols + c] += y[r * cols + c] * (g[r * cols + c] - dot);
        }
        return;
    }

    case OpKind::Sum:
    case OpKind::Mean:
    case OpKind::Max: {
        const auto& x = val(0);
        const auto& xs = x.storage();
        auto& gx = adj(0);
        if (n.reduce_all) {
            if (n.op == OpKind::Max) {
                const auto it = std::max_element(xs.begin(), xs.end());
                gx[static_cast<std::size_t>(it - xs.begin())] += g[0];
            } else {
                const double d = n.op == OpKind::Mean ? g[0] / static_cast<double>(xs.size()) : g[0];
                for (auto& v : gx) v += d;
            }
            return;
        }
        const auto s = split_axis(x.shape(), n.axis);
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t i = 0; i < s.inner; ++i) {
                const double go = g[o * s.inner + i];
                if (n.op == OpKind::Max) {
                    std::size_t best = 0;
                    for (std::size_t l = 1; l < s.extent; ++l)
                        if (xs[(o * s.extent + l) * s.inner + i] > xs[(o * s.extent + best) * s.inner + i]) best = l;
                    gx[(o * s.extent + best) * s.inner + i] += go;
                } else {
                    const double d = n.op == OpKind::Mean ? go / static_cast<double>(s.extent) : go;
                    for (std::size_t l = 0; l < s.extent; ++l) gx[(o * s.extent + l) * s.inner + i] += d;
                }
            }
        return;
    }

    case OpKind::Concat: {
        const auto s = split_axis(n.shape, n.axis);
        std::size_t offset = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) {
            const std::size_t ext = val(k).dim(n.axis);
            if (need(k)) {
                auto& gx = adj(k);
                for (std::size_t o = 0; o < s.outer; ++o)
                    for (std::size_t e = 0; e < ext * s.inner; ++e)
                        gx[o * ext * s.inner + e] += g[(o * s.extent + offset) * s.inner + e];
            }
            offset += ext;
        }
        return;
    }

    case OpKind::Reshape: {
        auto& gx = adj(0);
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
        return;
    }

    case OpKind::Slice: {
        const auto s = split_axis(val(0).shape(), n.axis);
        const std::size_t ext = n.end - n.begin;
        auto& gx = adj(0);
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t e = 0; e < ext * s.inner; ++e)
                gx[(o * s.extent + n.begin) * s.inner + e] += g[o * ext * s.inner + e];
        return;
    }

    case OpKind::Reverse: {
        const auto s = split_axis(val(0).shape(), n.axis);
        auto& gx = adj(0);
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t l = 0; l < s.extent; ++l)
                for (std::size_t i = 0; i < s.inner; ++i)
                    gx[(o * s.extent + l) * s.inner + i] += g[(o * s.extent + (s.extent - 1 - l)) * s.inner + i];
        return;
    }

    case OpKind::Conv1d:
    case OpKind::ConvTranspose1d: {
        const auto& x = val(0);
        const auto& k = val(1);
        const std::size_t ksize = k.dim(0), ci = k.dim(1), co = k.dim(2);
        const std::size_t batch = x.rank() == 3 ? x.dim(0) : 1;
        const std::size_t lin = x.dim(x.rank() - 2);
        const std::size_t lout = n.shape[n.shape.size() - 2];
        const auto pad = static_cast<std::ptrdiff_t>(ksize / 2);
        const auto stride = static_cast<std::ptrdiff_t>(n.stride);
        const bool want_x = need(0), want_k = need(1);
        std::vector<double>* gx = want_x ? &adj(0) : nullptr;
        std::vector<double>* gk = want_k ? &adj(1) : nullptr;
        const bool forward_conv = n.op == OpKind::Conv1d;
        const std::size_t outer_len = forward_conv ? lout : lin;
        const std::size_t other_len = forward_conv ? lin : lout;
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t p = 0; p < outer_len; ++p)
                for (std::size_t j = 0; j < ksize; ++j) {
                    const auto t = static_cast<std::ptrdiff_t>(p) * stride + static_cast<std::ptrdiff_t>(j) - pad;
                    if (t < 0 || t >= static_cast<std::ptrdiff_t>(other_len)) continue;
                    // conv: output row p reads input row t; transpose: input row p writes output row t.
                    const std::size_t xi = forward_conv ? static_cast<std::size_t>(t) : p;
                    const std::size_t gi = forward_conv ? p : static_cast<std::size_t>(t);
                    const double* grow = &g[(b * lout + gi) * co];
                    for (std::size_t c = 0; c < ci; ++c) {
                        const double* kr = &k.storage()[(j * ci + c) * co];
                        const std::size_t xidx = (b * lin + xi) * ci + c;
                        if (want_x) {
                            double acc = 0.0;
                            for (std::size_t d = 0; d < co; ++d) acc += grow[d] * kr[d];
                            (*gx)[xidx] += acc;
                        }
                        if (want_k) {
                            const double xv = x[xidx];
                            double* gkr = &(*gk)[(j * ci + c) * co];
                            for (std::size_t d = 0; d < co; ++d) gkr[d] += xv * grow[d];
                        }
                    }
                }
        }
        return;
    }

    case OpKind::RationalBezier: {
        const auto& P = val(0);
        const auto& w = val(1);
        const auto& u = val(2);
        const std::size_t ncp = w.shape().back();
        const std::size_t npts = u.shape().back();
        const std::size_t batch = u.size() / npts;
        const int degree = static_cast<int>(ncp) - 1;
        const bool want_p = need(0), want_w = need(1), want_u = need(2);
        std::array<double, geom::kMaxDegree + 1> basis{};
        std::array<double, geom::kMaxDegree + 1> lower{};
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t j = 0; j < npts; ++j) {
                const double uj = u[b * npts + j];
                geom::bernstein_into(degree, uj, basis);
                double den = 0.0;
                for (std::size_t i = 0; i < ncp; ++i) den += basis[i] * w[b * ncp + i];
                const double X = y[(b * npts + j) * 2];
                const double Y = y[(b * npts + j) * 2 + 1];
                const double gxv = g[(b * npts + j) * 2];
                const double gyv = g[(b * npts + j) * 2 + 1];
                for (std::size_t i = 0; i < ncp; ++i) {
                    const double bw = basis[i] * w[b * ncp + i] / den;
                    if (want_p) {
                        adj(0)[(b * ncp + i) * 2] += gxv * bw;
                        adj(0)[(b * ncp + i) * 2 + 1] += gyv * bw;
                    }
                    if (want_w) {
                        const double px = P[(b * ncp + i) * 2] - X;
                        const double py = P[(b * ncp + i) * 2 + 1] - Y;
                        adj(1)[b * ncp + i] += basis[i] / den * (gxv * px + gyv * py);
                    }
                }
                if (want_u) {
                    // dB_i/du = n (B^{n-1}_{i-1} - B^{n-1}_i)
                    geom::bernstein_into(degree - 1, uj, lower);
                    double dnx = 0.0, dny = 0.0, dden = 0.0;
                    for (int i = 0; i <= degree; ++i) {
                        const double left = i > 0 ? lower[i - 1] : 0.0;
                        const double right = i < degree ? lower[i] : 0.0;
                        const double db = degree * (left - right) * w[b * ncp + i];
                        dnx += db * P[(b * ncp + i) * 2];
                        dny += db * P[(b * ncp + i) * 2 + 1];
                        dden += db;
                    }
                    const double dX = (dnx - X * dden) / den;
                    const double dY = (dny - Y * dden) / den;
                    adj(2)[b * npts + j] += gxv * dX + gyv * dY;
                }
            }
        return;
    }

    case OpKind::Kumaraswamy: {
        const auto& up = val(0);
        const auto& a = val(1);
        const auto& bb = val(2);
        const auto& c = val(3);
        const std::size_t comps = a.shape().back();
        const std::size_t npts = up.size();
        const std::size_t batch = a.size() / comps;
        for (std::size_t r = 0; r < batch; ++r)
            for (std::size_t j = 0; j < npts; ++j) {
                const double x = up[j];
                if (x <= 0.0 || x >= 1.0) continue;
                const double go = g[r * npts + j];
                for (std::size_t i = 0; i < comps; ++i) {
                    const std::size_t idx = r * comps + i;
                    const auto d = geom::kumaraswamy_cdf_partials(x, a[idx], bb[idx]);
                    if (need(0)) adj(0)[j] += go * c[idx] * d.dx;
                    if (need(1)) adj(1)[idx] += go * c[idx] * d.da;
                    if (need(2)) adj(2)[idx] += go * c[idx] * d.db;
                    if (need(3)) adj(3)[idx] += go * geom::kumaraswamy_cdf(x, a[idx], bb[idx]);
                }
            }
        return;
    }
    }
}

} // namespace curvegan::ad
