#include "curvegan/nn/model.hpp"

#include "curvegan/error.hpp"

#include <cmath>
#include <numbers>

namespace curvegan::nn {
namespace {

using ad::Graph;
using ad::Shape;
using ad::Tensor;
using ad::Var;

std::size_t deconv_out_channels(const GeneratorConfig& cfg, std::size_t layer) {
    if (layer + 1 == cfg.deconv_layers) return cfg.grid_channels();
    return std::max<std::size_t>(1, cfg.deconv_channels >> (layer + 1));
}

std::size_t deconv_in_channels(const GeneratorConfig& cfg, std::size_t layer) {
    return layer == 0 ? cfg.deconv_channels : deconv_out_channels(cfg, layer - 1);
}

Tensor rotation_matrix(double angle) {
    return Tensor::matrix(2, 2, {std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle)});
}

Var dense(Graph& g, Var x, const std::string& name, const std::map<std::string, Shape>& shapes) {
    auto w = g.shared_input(name + ".w", shapes.at(name + ".w"));
    auto b = g.shared_input(name + ".b", shapes.at(name + ".b"));
    return g.add(g.matmul(x, w), b);
}

} // namespace

std::string to_string(Constraint c) {
    switch (c) {
    case Constraint::Open: return "open";
    case Constraint::Closed: return "closed";
    case Constraint::PinnedLast: return "pinned-last";
    }
    return "open";
}

Constraint constraint_from_string(const std::string& s) {
    if (s == "open") return Constraint::Open;
    if (s == "closed") return Constraint::Closed;
    if (s == "pinned-last") return Constraint::PinnedLast;
    throw DomainError("unknown constraint '" + s + "'");
}

std::string to_string(OutputHead h) { return h == OutputHead::Bezier ? "bezier" : "direct"; }

OutputHead output_head_from_string(const std::string& s) {
    if (s == "bezier") return OutputHead::Bezier;
    if (s == "direct") return OutputHead::DirectPoints;
    throw DomainError("unknown generator head '" + s + "'");
}

void GeneratorConfig::validate() const {
    if (latent_dim == 0 || noise_dim == 0) throw DomainError("latent and noise dimensions must be positive");
    if (degree < 1 || degree > static_cast<std::size_t>(geom::kMaxDegree))
        throw DomainError("Bezier degree must be in [1, 63]");
    if (kumaraswamy_components == 0) throw DomainError("need at least one Kumaraswamy component");
    if (hidden == 0 || deconv_channels == 0) throw DomainError("layer widths must be positive");
    if (kernel % 2 == 0) throw DomainError("deconvolution kernel size must be odd");
    symmetry.validate();
    if (constraint != Constraint::Open && symmetry.mode != geom::SymmetryMode::None)
        throw DomainError("closed/pinned constraints apply only without symmetry");
    if (curve_points < 2 * symmetry.parts) throw DomainError("too few curve points for the symmetry parts");
    const std::size_t up = std::size_t{1} << deconv_layers;
    if (grid_length() % up != 0)
        throw DomainError("generator grid length " + std::to_string(grid_length()) + " is not divisible by 2^" +
                          std::to_string(deconv_layers));
}

std::size_t DiscriminatorConfig::flattened_features() const {
    std::size_t length = curve_points;
    for (std::size_t i = 0; i < conv_depths.size(); ++i) length = (length + stride - 1) / stride;
    return length * (conv_depths.empty() ? 2 : conv_depths.back());
}

void DiscriminatorConfig::validate() const {
    if (latent_dim == 0) throw DomainError("discriminator latent dimension must be positive");
    if (kernel % 2 == 0 || stride == 0) throw DomainError("discriminator kernel must be odd and stride positive");
    if (hidden == 0) throw DomainError("discriminator hidden width must be positive");
    if (!(logvar_min < logvar_max)) throw DomainError("log-variance bounds are inverted");
    std::size_t length = curve_points;
    for (auto depth : conv_depths) {
        if (depth == 0) throw DomainError("convolution depths must be positive");
        if (length < kernel) throw DomainError("too many convolution layers for the curve length");
        length = (length + stride - 1) / stride;
    }
}

void to_json(nlohmann::json& j, const GeneratorConfig& c) {
    j = nlohmann::json{{"latent_dim", c.latent_dim},
                       {"noise_dim", c.noise_dim},
                       {"degree", c.degree},
                       {"kumaraswamy_components", c.kumaraswamy_components},
                       {"symmetry", geom::to_string(c.symmetry.mode)},
                       {"symmetry_parts", c.symmetry.parts},
                       {"symmetry_angle", c.symmetry.angle},
                       {"constraint", to_string(c.constraint)},
                       {"pinned_point", {c.pinned_point.x, c.pinned_point.y}},
                       {"head", to_string(c.head)},
                       {"curve_points", c.curve_points},
                       {"hidden", c.hidden},
                       {"deconv_layers", c.deconv_layers},
                       {"deconv_channels", c.deconv_channels},
                       {"kernel", c.kernel},
                       {"leaky_alpha", c.leaky_alpha}};
}

void from_json(const nlohmann::json& j, GeneratorConfig& c) {
    c.latent_dim = j.at("latent_dim").get<std::size_t>();
    c.noise_dim = j.at("noise_dim").get<std::size_t>();
    c.degree = j.at("degree").get<std::size_t>();
    c.kumaraswamy_components = j.at("kumaraswamy_components").get<std::size_t>();
    c.symmetry.mode = geom::symmetry_mode_from_string(j.at("symmetry").get<std::string>());
    c.symmetry.parts = j.at("symmetry_parts").get<std::size_t>();
    c.symmetry.angle = j.at("symmetry_angle").get<double>();
    c.constraint = constraint_from_string(j.at("constraint").get<std::string>());
    c.pinned_point = {j.at("pinned_point").at(0).get<double>(), j.at("pinned_point").at(1).get<double>()};
    c.head = output_head_from_string(j.at("head").get<std::string>());
    c.curve_points = j.at("curve_points").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.deconv_layers = j.at("deconv_layers").get<std::size_t>();
    c.deconv_channels = j.at("deconv_channels").get<std::size_t>();
    c.kernel = j.at("kernel").get<std::size_t>();
    c.leaky_alpha = j.at("leaky_alpha").get<double>();
}

void to_json(nlohmann::json& j, const DiscriminatorConfig& c) {
    j = nlohmann::json{{"latent_dim", c.latent_dim}, {"curve_points", c.curve_points},
                       {"conv_depths", c.conv_depths}, {"kernel", c.kernel},
                       {"stride", c.stride},         {"hidden", c.hidden},
                       {"leaky_alpha", c.leaky_alpha}, {"logvar_min", c.logvar_min},
                       {"logvar_max", c.logvar_max}};
}

void from_json(const nlohmann::json& j, DiscriminatorConfig& c) {
    c.latent_dim = j.at("latent_dim").get<std::size_t>();
    c.curve_points = j.at("curve_points").get<std::size_t>();
    c.conv_depths = j.at("conv_depths").get<std::vector<std::size_t>>();
    c.kernel = j.at("kernel").get<std::size_t>();
    c.stride = j.at("stride").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.leaky_alpha = j.at("leaky_alpha").get<double>();
    c.logvar_min = j.at("logvar_min").get<double>();
    c.logvar_max = j.at("logvar_max").get<double>();
}

std::map<std::string, Shape> generator_parameter_shapes(const GeneratorConfig& cfg) {
    cfg.validate();
    std::map<std::string, Shape> s;
    const std::size_t in = cfg.input_dim();
    const std::size_t base_len = cfg.grid_length() >> cfg.deconv_layers;
    const std::size_t base_ch = cfg.deconv_layers > 0 ? cfg.deconv_channels : cfg.grid_channels();
    s["g.fc1.w"] = {in, cfg.hidden};
    s["g.fc1.b"] = {cfg.hidden};
    s["g.fc2.w"] = {cfg.hidden, base_len * base_ch};
    s["g.fc2.b"] = {base_len * base_ch};
    for (std::size_t i = 0; i < cfg.deconv_layers; ++i) {
        const auto name = "g.deconv" + std::to_string(i);
        s[name + ".k"] = {cfg.kernel, deconv_in_channels(cfg, i), deconv_out_channels(cfg, i)};
        s[name + ".b"] = {deconv_out_channels(cfg, i)};
    }
    if (cfg.head == OutputHead::Bezier) {
        const std::size_t mix = cfg.symmetry.parts * cfg.kumaraswamy_components;
        s["g.ufc.w"] = {in, cfg.hidden};
        s["g.ufc.b"] = {cfg.hidden};
        for (const char* head : {"g.a", "g.b", "g.c"}) {
            s[std::string(head) + ".w"] = {cfg.hidden, mix};
            s[std::string(head) + ".b"] = {mix};
        }
    }
    return s;
}

std::map<std::string, Shape> discriminator_parameter_shapes(const DiscriminatorConfig& cfg) {
    cfg.validate();
    std::map<std::string, Shape> s;
    std::size_t channels = 2;
    for (std::size_t i = 0; i < cfg.conv_depths.size(); ++i) {
        const auto name = "d.conv" + std::to_string(i);
        s[name + ".k"] = {cfg.kernel, channels, cfg.conv_depths[i]};
        s[name + ".b"] = {cfg.conv_depths[i]};
        channels = cfg.conv_depths[i];
    }
    s["d.fc.w"] = {cfg.flattened_features(), cfg.hidden};
    s["d.fc.b"] = {cfg.hidden};
    s["d.src.w"] = {cfg.hidden, 1};
    s["d.src.b"] = {1};
    s["d.q.w"] = {cfg.hidden, 2 * cfg.latent_dim};
    s["d.q.b"] = {2 * cfg.latent_dim};
    return s;
}

ParameterSet init_parameters(const std::map<std::string, Shape>& shapes, Rng& rng) {
    ParameterSet params;
    for (const auto& [name, shape] : shapes) {
        Tensor t(shape);
        if (!name.ends_with(".b")) {
            double fan_in, fan_out;
            if (shape.size() == 3) {
                fan_in = static_cast<double>(shape[0] * shape[1]);
                fan_out = static_cast<double>(shape[0] * shape[2]);
            } else {
                fan_in = static_cast<double>(shape[0]);
                fan_out = static_cast<double>(shape[1]);
            }
            const double limit = std::sqrt(6.0 / (fan_in + fan_out));
            std::uniform_real_distribution<double> dist(-limit, limit);
            for (auto& v : t.storage()) v = dist(rng);
        }
        params.emplace(name, std::move(t));
    }
    return params;
}

GeneratorModel GeneratorModel::create(const GeneratorConfig& cfg, Rng& rng) {
    return {cfg, init_parameters(generator_parameter_shapes(cfg), rng)};
}

DiscriminatorModel DiscriminatorModel::create(const DiscriminatorConfig& cfg, Rng& rng) {
    return {cfg, init_parameters(discriminator_parameter_shapes(cfg), rng)};
}

GeneratorNodes build_generator(Graph& g, const GeneratorConfig& cfg, std::size_t batch, const std::string& io_prefix) {
    const auto shapes = generator_parameter_shapes(cfg);
    const auto param = [&](const std::string& name) { return g.shared_input(name, shapes.at(name)); };
    const double alpha = cfg.leaky_alpha;

    GeneratorNodes out;
    out.latent = g.input(io_prefix + "c", {batch, cfg.latent_dim});
    out.noise = g.input(io_prefix + "z", {batch, cfg.noise_dim});
    const Var inputs[] = {out.latent, out.noise};
    const Var x = g.concat(inputs, 1);

    // Control point / weight path: dense -> dense -> 1-D deconvolutions.
    auto h = g.leaky_relu(dense(g, x, "g.fc1", shapes), alpha);
    auto grid = dense(g, h, "g.fc2", shapes);
    const std::size_t base_len = cfg.grid_length() >> cfg.deconv_layers;
    if (cfg.deconv_layers > 0) {
        grid = g.reshape(g.leaky_relu(grid, alpha), {batch, base_len, cfg.deconv_channels});
        for (std::size_t i = 0; i < cfg.deconv_layers; ++i) {
            const auto name = "g.deconv" + std::to_string(i);
            grid = g.add(g.conv_transpose1d(grid, param(name + ".k"), 2), param(name + ".b"));
            if (i + 1 < cfg.deconv_layers) grid = g.leaky_relu(grid, alpha);
        }
    } else {
        grid = g.reshape(grid, {batch, cfg.grid_length(), cfg.grid_channels()});
    }

    if (cfg.head == OutputHead::DirectPoints) {
        out.curve = grid;
        out.part_points = {cfg.curve_points};
        return out;
    }

    const std::size_t n = cfg.degree;
    const std::size_t ncp = cfg.control_points();
    auto xy = g.slice(grid, 2, 0, 2);
    out.weights = g.add_scalar(g.softplus(g.reshape(g.slice(grid, 2, 2, 3), {batch, ncp})), kWeightFloor);

    // Constraints act on the prim's last control point.
    auto head = g.slice(xy, 1, 0, n);
    Var last;
    switch (cfg.symmetry.mode) {
    case geom::SymmetryMode::AxisX:
        last = g.multiply(g.slice(xy, 1, n, ncp), g.constant(Tensor::vector({1.0, 0.0})));
        break;
    case geom::SymmetryMode::AxisY:
        last = g.multiply(g.slice(xy, 1, n, ncp), g.constant(Tensor::vector({0.0, 1.0})));
        break;
    case geom::SymmetryMode::Rotational: {
        auto first = g.reshape(g.slice(xy, 1, 0, 1), {batch, 2});
        last = g.reshape(g.matmul(first, g.constant(rotation_matrix(cfg.symmetry.angle))), {batch, 1, 2});
        break;
    }
    case geom::SymmetryMode::None:
        if (cfg.constraint == Constraint::Closed) {
            last = g.slice(xy, 1, 0, 1);
        } else if (cfg.constraint == Constraint::PinnedLast) {
            Tensor pin({batch, 1, 2});
            for (std::size_t b = 0; b < batch; ++b) {
                pin.at(b, 0, 0) = cfg.pinned_point.x;
                pin.at(b, 0, 1) = cfg.pinned_point.y;
            }
            last = g.constant(std::move(pin));
        }
        break;
    }
    if (last.valid()) {
        const Var pieces[] = {head, last};
        out.control = g.concat(pieces, 1);
    } else {
        out.control = xy;
    }

    // Parameter-variable path: dense -> (a, b, c) per part -> Kumaraswamy mixture.
    const std::size_t K = cfg.kumaraswamy_components;
    auto hu = g.leaky_relu(dense(g, x, "g.ufc", shapes), alpha);
    const double shift = 1.0 - std::log(2.0);  // a = b = 1 at zero pre-activation
    out.shape_a = g.add_scalar(g.softplus(dense(g, hu, "g.a", shapes)), shift);
    out.shape_b = g.add_scalar(g.softplus(dense(g, hu, "g.b", shapes)), shift);
    auto c_raw = dense(g, hu, "g.c", shapes);

    out.part_points = geom::split_points(cfg.curve_points, cfg.symmetry.parts);
    std::vector<Var> part_curves, part_u, part_mix;
    for (std::size_t k = 0; k < cfg.symmetry.parts; ++k) {
        Var pk = out.control;
        Var wk = out.weights;
        if (k > 0) {
            switch (cfg.symmetry.mode) {
            case geom::SymmetryMode::AxisX:
                pk = g.multiply(g.reverse(out.control, 1), g.constant(Tensor::vector({1.0, -1.0})));
                wk = g.reverse(out.weights, 1);
                break;
            case geom::SymmetryMode::AxisY:
                pk = g.multiply(g.reverse(out.control, 1), g.constant(Tensor::vector({-1.0, 1.0})));
                wk = g.reverse(out.weights, 1);
                break;
            case geom::SymmetryMode::Rotational: {
                auto flat = g.reshape(out.control, {batch * ncp, 2});
                auto rot = g.constant(rotation_matrix(static_cast<double>(k) * cfg.symmetry.angle));
                pk = g.reshape(g.matmul(flat, rot), {batch, ncp, 2});
                break;
            }
            case geom::SymmetryMode::None: break;
            }
        }
        auto ak = g.slice(out.shape_a, 1, k * K, (k + 1) * K);
        auto bk = g.slice(out.shape_b, 1, k * K, (k + 1) * K);
        auto ck = g.softmax(g.slice(c_raw, 1, k * K, (k + 1) * K));
        auto grid_u = g.constant(Tensor({out.part_points[k]}, geom::uniform_grid(out.part_points[k])));
        auto uk = g.kumaraswamy(grid_u, ak, bk, ck);
        part_u.push_back(uk);
        part_mix.push_back(ck);
        part_curves.push_back(g.rational_bezier(pk, wk, uk));
    }
    out.curve = part_curves.size() == 1 ? part_curves[0] : g.concat(part_curves, 1);
    out.u = part_u.size() == 1 ? part_u[0] : g.concat(part_u, 1);
    out.mixture = part_mix.size() == 1 ? part_mix[0] : g.concat(part_mix, 1);
    return out;
}

DiscriminatorNodes build_discriminator(Graph& g, const DiscriminatorConfig& cfg, Var x) {
    const auto shapes = discriminator_parameter_shapes(cfg);
    const auto param = [&](const std::string& name) { return g.shared_input(name, shapes.at(name)); };
    const auto& xs = g.shape(x);
    if (xs.size() != 3 || xs[1] != cfg.curve_points || xs[2] != 2)
        throw ShapeError("discriminator expects [N, " + std::to_string(cfg.curve_points) + ", 2], got " +
                         ad::shape_string(xs) + " (" + g.describe(x) + ")");
    const std::size_t batch = xs[0];
    const double alpha = cfg.leaky_alpha;

    Var h = x;
    for (std::size_t i = 0; i < cfg.conv_depths.size(); ++i) {
        const auto name = "d.conv" + std::to_string(i);
        h = g.leaky_relu(g.add(g.conv1d(h, param(name + ".k"), cfg.stride), param(name + ".b")), alpha);
    }
    h = g.reshape(h, {batch, cfg.flattened_features()});
    auto f = g.leaky_relu(dense(g, h, "d.fc", shapes), alpha);

    DiscriminatorNodes out;
    out.logits = g.reshape(dense(g, f, "d.src", shapes), {batch});
    auto q = dense(g, f, "d.q", shapes);
    const std::size_t d = cfg.latent_dim;
    out.q_mean = g.sigmoid(g.slice(q, 1, 0, d));
    out.q_logvar =
        g.add_scalar(g.scale(g.sigmoid(g.slice(q, 1, d, 2 * d)), cfg.logvar_max - cfg.logvar_min), cfg.logvar_min);
    return out;
}

void bind_parameters(ad::Bindings& bindings, const ParameterSet& params) {
    for (const auto& [name, t] : params) bindings[name] = t;
}

std::vector<GeneratorSample> generator_forward(const GeneratorModel& model, const Tensor& latent,
                                               const Tensor& noise) {
    const auto& cfg = model.config;
    if (latent.rank() != 2 || latent.dim(1) != cfg.latent_dim)
        throw ShapeError("latent batch must be [N, " + std::to_string(cfg.latent_dim) + "], got " +
                         ad::shape_string(latent.shape()));
    const std::size_t batch = latent.dim(0);
    if (noise.rank() != 2 || noise.dim(0) != batch || noise.dim(1) != cfg.noise_dim)
        throw ShapeError("noise batch must be [" + std::to_string(batch) + ", " + std::to_string(cfg.noise_dim) +
                         "], got " + ad::shape_string(noise.shape()));
    for (double v : latent.storage())
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("latent code outside [0,1]");
    if (!noise.all_finite()) throw DomainError("noise must be finite");

    Graph g;
    const auto nodes = build_generator(g, cfg, batch);
    ad::Bindings bindings;
    bind_parameters(bindings, model.params);
    bindings["c"] = latent;
    bindings["z"] = noise;

    std::vector<Var> outs{nodes.curve};
    const bool bezier = cfg.head == OutputHead::Bezier;
    if (bezier) outs.insert(outs.end(), {nodes.control, nodes.weights, nodes.shape_a, nodes.shape_b, nodes.mixture, nodes.u});
    g.evaluate(outs, bindings);

    const auto curves = tensor_to_curves(g.value(nodes.curve));
    std::vector<GeneratorSample> samples(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        auto& s = samples[b];
        s.curve = curves[b];
        if (!bezier) continue;
        const std::size_t ncp = cfg.control_points();
        const auto& P = g.value(nodes.control);
        const auto& w = g.value(nodes.weights);
        for (std::size_t i = 0; i < ncp; ++i) {
            s.prim.control.push_back({P.at(b, i, 0), P.at(b, i, 1)});
            s.prim.weights.push_back(w.at(b, i));
        }
        const auto& u = g.value(nodes.u);
        const auto& A = g.value(nodes.shape_a);
        const auto& B = g.value(nodes.shape_b);
        const auto& C = g.value(nodes.mixture);
        const std::size_t K = cfg.kumaraswamy_components;
        std::size_t offset = 0;
        for (std::size_t k = 0; k < nodes.part_points.size(); ++k) {
            std::vector<double> uk(nodes.part_points[k]);
            for (std::size_t j = 0; j < uk.size(); ++j) uk[j] = u.at(b, offset + j);
            offset += uk.size();
            s.part_u.push_back(std::move(uk));
            geom::KumaraswamyMixture mix;
            for (std::size_t i = 0; i < K; ++i) {
                mix.a.push_back(A.at(b, k * K + i));
                mix.b.push_back(B.at(b, k * K + i));
                mix.c.push_back(C.at(b, k * K + i));
            }
            s.mixtures.push_back(std::move(mix));
        }
    }
    return samples;
}

GeneratorSample generator_forward(const GeneratorModel& model, std::span<const double> latent,
                                  std::span<const double> noise) {
    Tensor c({1, latent.size()}, std::vector<double>(latent.begin(), latent.end()));
    Tensor z({1, noise.size()}, std::vector<double>(noise.begin(), noise.end()));
    return std::move(generator_forward(model, c, z).front());
}

DiscriminatorOutput discriminator_forward(const DiscriminatorModel& model, const Tensor& curves) {
    const auto& cfg = model.config;
    if (curves.rank() != 3 || curves.dim(1) != cfg.curve_points || curves.dim(2) != 2)
        throw ShapeError("discriminator expects [N, " + std::to_string(cfg.curve_points) + ", 2], got " +
                         ad::shape_string(curves.shape()));
    Graph g;
    auto x = g.input("x", curves.shape());
    const auto nodes = build_discriminator(g, cfg, x);
    ad::Bindings bindings;
    bind_parameters(bindings, model.params);
    bindings["x"] = curves;
    const Var outs[] = {nodes.logits, nodes.q_mean, nodes.q_logvar};
    g.evaluate(outs, bindings);
    return {g.value(nodes.logits), g.value(nodes.q_mean), g.value(nodes.q_logvar)};
}

std::pair<Tensor, Tensor> sample_latent(std::size_t batch, std::size_t latent_dim, std::size_t noise_dim, Rng& rng) {
    Tensor c({batch, latent_dim});
    Tensor z({batch, noise_dim});
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : c.storage()) v = uniform(rng);
    for (auto& v : z.storage()) v = normal(rng);
    return {std::move(c), std::move(z)};
}

std::vector<double> noise_from_seed(std::uint64_t seed, std::size_t noise_dim) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(noise_dim);
    for (auto& v : z) v = normal(rng);
    return z;
}

Tensor curves_to_tensor(std::span<const geom::Curve> curves) {
    if (curves.empty()) throw ShapeError("no curves to pack");
    const std::size_t m = curves.front().size();
    Tensor t({curves.size(), m, 2});
    for (std::size_t b = 0; b < curves.size(); ++b) {
        if (curves[b].size() != m) throw ShapeError("curves have different point counts");
        for (std::size_t j = 0; j < m; ++j) {
            t.at(b, j, 0) = curves[b].points[j].x;
            t.at(b, j, 1) = curves[b].points[j].y;
        }
    }
    return t;
}

std::vector<geom::Curve> tensor_to_curves(const Tensor& t) {
    if (t.rank() != 3 || t.dim(2) != 2) throw ShapeError("expected [N, m, 2] curve tensor");
    std::vector<geom::Curve> curves(t.dim(0));
    for (std::size_t b = 0; b < t.dim(0); ++b) {
        curves[b].points.resize(t.dim(1));
        for (std::size_t j = 0; j < t.dim(1); ++j) curves[b].points[j] = {t.at(b, j, 0), t.at(b, j, 1)};
    }
    return curves;
}

} // namespace curvegan::nn
