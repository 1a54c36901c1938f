#include "curvegan/train/trainer.hpp"

#include "curvegan/error.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace curvegan::train {

using ad::Graph;
using ad::Tensor;
using ad::Var;

void TrainConfig::validate() const {
    if (!(lr_d >= 0.0 && lr_g >= 0.0)) throw DomainError("learning rates must be nonnegative");
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw DomainError("Adam betas must be in [0,1)");
    if (!(epsilon > 0.0)) throw DomainError("Adam epsilon must be positive");
    for (double l : lambda)
        if (!(l >= 0.0)) throw DomainError("regularizer weights must be nonnegative");
    if (batch < 2) throw DomainError("batch size must be at least 2");
    if (eval_every == 0) throw DomainError("eval-every must be positive");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
    j = nlohmann::json{{"lr_d", c.lr_d},   {"lr_g", c.lr_g},   {"beta1", c.beta1},
                       {"beta2", c.beta2}, {"epsilon", c.epsilon}, {"batch", c.batch},
                       {"steps", c.steps}, {"lambda", c.lambda}, {"seed", c.seed},
                       {"eval_every", c.eval_every}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
    c.lr_d = j.at("lr_d").get<double>();
    c.lr_g = j.at("lr_g").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.batch = j.at("batch").get<std::size_t>();
    c.steps = j.at("steps").get<std::uint64_t>();
    c.lambda = j.at("lambda").get<Lambdas>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.eval_every = j.at("eval_every").get<std::uint64_t>();
}

AdamState AdamState::zeros_like(const nn::ParameterSet& params) {
    AdamState s;
    for (const auto& [name, t] : params) {
        s.m.emplace(name, Tensor(t.shape()));
        s.v.emplace(name, Tensor(t.shape()));
    }
    return s;
}

void adam_step(nn::ParameterSet& params, const ad::Gradients& grads, AdamState& state, double lr, double beta1,
               double beta2, double epsilon) {
    state.t += 1;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    for (const auto& [name, g] : grads) {
        auto it = params.find(name);
        if (it == params.end()) continue;
        auto& p = it->second.storage();
        auto& m = state.m.at(name).storage();
        auto& v = state.v.at(name).storage();
        const auto& gv = g.storage();
        if (gv.size() != p.size() || m.size() != p.size())
            throw ShapeError("gradient for '" + name + "' does not match its parameter");
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * gv[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * gv[i] * gv[i];
            p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon);
        }
    }
}

void TrainHistory::write_csv(std::ostream& os, bool with_seconds) const {
    os << "step,L_D,L_G,L_I,R1,R2,R3,R4";
    if (with_seconds) os << ",seconds";
    os << '\n';
    const auto flags = os.flags();
    const auto precision = os.precision();
    os << std::setprecision(17);
    for (const auto& r : records) {
        os << r.step << ',' << r.loss_d << ',' << r.loss_g << ',' << r.loss_i << ',' << r.reg.r1 << ',' << r.reg.r2
           << ',' << r.reg.r3 << ',' << r.reg.r4;
        if (with_seconds) os << ',' << std::setprecision(6) << r.seconds << std::setprecision(17);
        os << '\n';
    }
    os.flags(flags);
    os.precision(precision);
}

std::string TrainHistory::csv(bool with_seconds) const {
    std::ostringstream os;
    write_csv(os, with_seconds);
    return os.str();
}

TrainState init_training(const nn::GeneratorConfig& gen_cfg, const nn::DiscriminatorConfig& disc_cfg,
                         const TrainConfig& train_cfg) {
    train_cfg.validate();
    if (gen_cfg.latent_dim != disc_cfg.latent_dim) throw DomainError("generator and Q head latent sizes differ");
    if (gen_cfg.curve_points != disc_cfg.curve_points) throw DomainError("generator and discriminator curve sizes differ");
    TrainState s;
    s.config = train_cfg;
    s.rng.seed(train_cfg.seed);
    s.gen = nn::GeneratorModel::create(gen_cfg, s.rng);
    s.disc = nn::DiscriminatorModel::create(disc_cfg, s.rng);
    s.adam_g = AdamState::zeros_like(s.gen.params);
    s.adam_d = AdamState::zeros_like(s.disc.params);
    return s;
}

struct Trainer::Graphs {
    Graph sampler;
    nn::GeneratorNodes sampler_nodes;

    Graph d;
    Var d_objective, d_loss, d_info;

    Graph g;
    Var g_objective, g_loss, g_info;
    RegularizerVars g_reg;
    bool has_reg = false;

    std::vector<std::string> d_names, g_names;
};

Trainer::Trainer(TrainState& state, Tensor data) : state_(state), data_(std::move(data)) {
    const auto& gcfg = state_.gen.config;
    const auto& dcfg = state_.disc.config;
    const auto& tcfg = state_.config;
    tcfg.validate();
    if (data_.rank() != 3 || data_.dim(1) != dcfg.curve_points || data_.dim(2) != 2)
        throw ShapeError("training data must be [S, " + std::to_string(dcfg.curve_points) + ", 2], got " +
                         ad::shape_string(data_.shape()));
    const std::size_t N = tcfg.batch;
    graphs_ = std::make_unique<Graphs>();
    auto& gr = *graphs_;

    gr.sampler_nodes = nn::build_generator(gr.sampler, gcfg, N);

    auto real = gr.d.input("x_real", {N, dcfg.curve_points, 2});
    auto fake = gr.d.input("x_fake", {N, dcfg.curve_points, 2});
    auto c = gr.d.input("c", {N, dcfg.latent_dim});
    const auto on_real = nn::build_discriminator(gr.d, dcfg, real);
    const auto on_fake = nn::build_discriminator(gr.d, dcfg, fake);
    gr.d_loss = discriminator_loss(gr.d, on_real.logits, on_fake.logits);
    gr.d_info = mutual_info(gr.d, on_fake.q_mean, on_fake.q_logvar, c);
    gr.d_objective = gr.d.subtract(gr.d_loss, gr.d.scale(gr.d_info, tcfg.lambda[0]));

    const auto gen = nn::build_generator(gr.g, gcfg, N);
    const auto judged = nn::build_discriminator(gr.g, dcfg, gen.curve);
    gr.g_loss = generator_loss(gr.g, judged.logits);
    gr.g_info = mutual_info(gr.g, judged.q_mean, judged.q_logvar, gen.latent);
    if (gcfg.head == nn::OutputHead::Bezier) {
        gr.has_reg = true;
        gr.g_reg = regularizers(gr.g, gen.control, gen.weights, gen.shape_a, gen.shape_b, gcfg.kumaraswamy_components);
        gr.g_objective = combined_objective(gr.g, gr.g_loss, gr.g_info, gr.g_reg, tcfg.lambda);
    } else {
        gr.g_objective = gr.g.subtract(gr.g_loss, gr.g.scale(gr.g_info, tcfg.lambda[0]));
    }

    for (const auto& [name, t] : state_.disc.params) gr.d_names.push_back(name);
    for (const auto& [name, t] : state_.gen.params) gr.g_names.push_back(name);
}

Trainer::~Trainer() = default;

HistoryRecord Trainer::iterate() {
    const auto start = std::chrono::steady_clock::now();
    auto& gr = *graphs_;
    auto& st = state_;
    const auto& tcfg = st.config;
    const std::size_t N = tcfg.batch;
    const std::size_t S = data_.dim(0);
    const std::size_t stride = data_.size() / S;
    const auto check = [&](double v, const char* what) {
        if (!std::isfinite(v)) throw TrainingError(st.step, std::string("non-finite ") + what);
    };

    HistoryRecord rec;
    rec.step = st.step;

    // Discriminator step.
    Tensor real({N, data_.dim(1), 2});
    {
        std::uniform_int_distribution<std::size_t> pick(0, S - 1);
        for (std::size_t i = 0; i < N; ++i) {
            const std::size_t j = pick(st.rng);
            std::copy_n(data_.storage().begin() + j * stride, stride, real.storage().begin() + i * stride);
        }
    }
    auto [c, z] = nn::sample_latent(N, st.gen.config.latent_dim, st.gen.config.noise_dim, st.rng);
    ad::Bindings sb;
    nn::bind_parameters(sb, st.gen.params);
    sb["c"] = c;
    sb["z"] = z;
    const Tensor fake = gr.sampler.evaluate(gr.sampler_nodes.curve, sb);

    ad::Bindings db;
    nn::bind_parameters(db, st.disc.params);
    db["x_real"] = std::move(real);
    db["x_fake"] = fake;
    db["c"] = std::move(c);
    const auto d_grads = gr.d.gradient(gr.d_objective, db, gr.d_names);
    rec.loss_d = gr.d.value(gr.d_loss).item();
    check(rec.loss_d, "discriminator loss");
    check(gr.d.value(gr.d_info).item(), "mutual information term");
    adam_step(st.disc.params, d_grads, st.adam_d, tcfg.lr_d, tcfg.beta1, tcfg.beta2, tcfg.epsilon);

    // Generator step with a fresh latent batch.
    auto [c2, z2] = nn::sample_latent(N, st.gen.config.latent_dim, st.gen.config.noise_dim, st.rng);
    ad::Bindings gb;
    nn::bind_parameters(gb, st.gen.params);
    nn::bind_parameters(gb, st.disc.params);
    gb["c"] = std::move(c2);
    gb["z"] = std::move(z2);
    const auto g_grads = gr.g.gradient(gr.g_objective, gb, gr.g_names);
    rec.loss_g = gr.g.value(gr.g_loss).item();
    rec.loss_i = gr.g.value(gr.g_info).item();
    if (gr.has_reg)
        rec.reg = {gr.g.value(gr.g_reg.r1).item(), gr.g.value(gr.g_reg.r2).item(), gr.g.value(gr.g_reg.r3).item(),
                   gr.g.value(gr.g_reg.r4).item()};
    check(rec.loss_g, "generator loss");
    check(rec.loss_i, "mutual information term");
    check(gr.g.value(gr.g_objective).item(), "generator objective");
    adam_step(st.gen.params, g_grads, st.adam_g, tcfg.lr_g, tcfg.beta1, tcfg.beta2, tcfg.epsilon);

    st.step += 1;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

TrainHistory train(std::span<const geom::Curve> data, TrainState& state, std::uint64_t steps,
                   const TrainHooks& hooks) {
    TrainHistory history;
    if (steps == 0) return history;
    if (data.empty()) throw DomainError("training dataset is empty");
    Trainer trainer(state, nn::curves_to_tensor(data));
    double elapsed = 0.0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        auto rec = trainer.iterate();
        elapsed += rec.seconds;
        rec.seconds = elapsed;
        if ((rec.step + 1) % state.config.eval_every == 0) {
            history.records.push_back(rec);
            if (hooks.on_record) hooks.on_record(rec);
        }
        if (hooks.checkpoint_every > 0 && state.step % hooks.checkpoint_every == 0 && hooks.on_checkpoint)
            hooks.on_checkpoint(state);
    }
    return history;
}

} // namespace curvegan::train
