#pragma once

#include "curvegan/nn/model.hpp"
#include "curvegan/train/losses.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>

namespace curvegan::train {

struct TrainConfig {
    double lr_d = 0.00005;
    double lr_g = 0.0002;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t batch = 32;
    std::uint64_t steps = 5000;
    Lambdas lambda{1.0, 0.03, 0.03, 1.0, 0.1};
    std::uint64_t seed = 0;
    std::uint64_t eval_every = 100;

    void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

struct AdamState {
    nn::ParameterSet m;
    nn::ParameterSet v;
    std::uint64_t t = 0;

    static AdamState zeros_like(const nn::ParameterSet& params);
};

/// Bias-corrected Adam. Parameters without a gradient entry are left alone.
void adam_step(nn::ParameterSet& params, const ad::Gradients& grads, AdamState& state, double lr, double beta1,
               double beta2, double epsilon = 1e-8);

struct HistoryRecord {
    std::uint64_t step = 0;
    double loss_d = 0.0;
    double loss_g = 0.0;
    double loss_i = 0.0;
    RegularizerValues reg;
    double seconds = 0.0;
};

struct TrainHistory {
    std::vector<HistoryRecord> records;

    /// CSV with header step,L_D,L_G,L_I,R1,R2,R3,R4,seconds. Without seconds
    /// the output depends only on the configuration and seed.
    void write_csv(std::ostream& os, bool with_seconds = true) const;
    std::string csv(bool with_seconds = true) const;
};

// Everything needed to continue a run bit-exactly.
struct TrainState {
    TrainConfig config;
    nn::GeneratorModel gen;
    nn::DiscriminatorModel disc;
    AdamState adam_g;
    AdamState adam_d;
    nn::Rng rng;
    std::uint64_t step = 0;
};

/// Models initialised from `train_cfg.seed`; the same engine then drives training.
TrainState init_training(const nn::GeneratorConfig& gen_cfg, const nn::DiscriminatorConfig& disc_cfg,
                         const TrainConfig& train_cfg);

// Alternating 1:1 discriminator / generator updates over a fixed dataset.
class Trainer {
public:
    /// `data` is [S, curve_points, 2].
    Trainer(TrainState& state, ad::Tensor data);
    ~Trainer();
    Trainer(const Trainer&) = delete;
    Trainer& operator=(const Trainer&) = delete;

    /// One discriminator step then one generator step. Throws TrainingError
    /// when any loss is not finite.
    HistoryRecord iterate();

private:
    struct Graphs;
    TrainState& state_;
    ad::Tensor data_;
    std::unique_ptr<Graphs> graphs_;
};

struct TrainHooks {
    std::function<void(const HistoryRecord&)> on_record;
    std::uint64_t checkpoint_every = 0;
    std::function<void(const TrainState&)> on_checkpoint;
};

/// Runs `steps` iterations from the current state. A history record is kept
/// whenever (step + 1) is a multiple of eval_every.
TrainHistory train(std::span<const geom::Curve> data, TrainState& state, std::uint64_t steps,
                   const TrainHooks& hooks = {});

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const TrainState& state, const std::filesystem::path& path);
TrainState load_checkpoint(const std::filesystem::path& path);

} // namespace curvegan::train
