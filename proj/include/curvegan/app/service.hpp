#pragma once

#include "curvegan/nn/model.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace curvegan::app {

struct ClampedLatent {
    std::vector<double> values;
    bool clamped = false;
};

/// Values outside [0,1] are moved to the nearest bound.
ClampedLatent clamp_latent(std::span<const double> latent);

inline constexpr std::uint64_t kDefaultNoiseSeed = 0;

struct GenerateRequest {
    std::vector<double> latent;
    std::optional<std::uint64_t> noise_seed;
    std::optional<std::vector<double>> noise;  // overrides noise_seed
    bool include_control_points = true;
};

/// Parses {"latent": [...], "noise-seed": n | "noise": [...], "include-control-points": b}.
/// Throws DomainError on malformed bodies or dimension mismatches.
GenerateRequest parse_generate_request(const std::string& body, std::size_t latent_dim, std::size_t noise_dim);

/// Explicit noise, else the seed expansion (kDefaultNoiseSeed when absent).
std::vector<double> resolve_noise(const GenerateRequest& req, std::size_t noise_dim);

struct Design {
    nn::GeneratorSample sample;
    std::vector<double> latent;  // after clamping
    bool clamped = false;
};

/// The one path from (latent, noise) to a curve used by both the CLI and the service.
Design generate_design(const nn::GeneratorModel& model, std::span<const double> latent, std::span<const double> noise);

/// "x y" per line, six decimals.
std::string format_dat(const geom::Curve& curve);

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// Request handling against an immutable model snapshot that can be swapped.
class InferenceService {
public:
    void set_model(nn::GeneratorModel model);
    void load_checkpoint(const std::filesystem::path& path);
    std::shared_ptr<const nn::GeneratorModel> snapshot() const;

    HttpReply health() const;
    HttpReply model_info() const;
    HttpReply generate(const std::string& body) const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const nn::GeneratorModel> model_;
};

// HTTP/1.1 front end for an InferenceService.
class HttpServer {
public:
    explicit HttpServer(InferenceService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds `port` (0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind.
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace curvegan::app
