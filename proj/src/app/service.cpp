#include "curvegan/app/service.hpp"

#include "curvegan/error.hpp"
#include "curvegan/train/trainer.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace curvegan::app {

using nlohmann::json;

ClampedLatent clamp_latent(std::span<const double> latent) {
    ClampedLatent out;
    out.values.reserve(latent.size());
    for (double v : latent) {
        const double c = std::clamp(v, 0.0, 1.0);
        out.clamped = out.clamped || c != v;
        out.values.push_back(c);
    }
    return out;
}

namespace {

std::vector<double> number_array(const json& j, const char* key, std::size_t expected) {
    if (!j.is_array()) throw DomainError(std::string("'") + key + "' must be an array of numbers");
    if (j.size() != expected)
        throw DomainError(std::string("'") + key + "' has length " + std::to_string(j.size()) + ", expected " +
                          std::to_string(expected));
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw DomainError(std::string("'") + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json points_json(std::span<const geom::Point> pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back({p.x, p.y});
    return a;
}

HttpReply error_reply(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
}

} // namespace

GenerateRequest parse_generate_request(const std::string& body, std::size_t latent_dim, std::size_t noise_dim) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed JSON body: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("request body must be a JSON object");
    if (!j.contains("latent")) throw DomainError("missing 'latent'");
    GenerateRequest req;
    req.latent = number_array(j["latent"], "latent", latent_dim);
    if (j.contains("noise")) req.noise = number_array(j["noise"], "noise", noise_dim);
    if (j.contains("noise-seed")) {
        const auto& s = j["noise-seed"];
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
            throw DomainError("'noise-seed' must be a nonnegative integer");
        req.noise_seed = s.get<std::uint64_t>();
    }
    if (j.contains("include-control-points")) {
        if (!j["include-control-points"].is_boolean()) throw DomainError("'include-control-points' must be a boolean");
        req.include_control_points = j["include-control-points"].get<bool>();
    }
    return req;
}

std::vector<double> resolve_noise(const GenerateRequest& req, std::size_t noise_dim) {
    if (req.noise) return *req.noise;
    return nn::noise_from_seed(req.noise_seed.value_or(kDefaultNoiseSeed), noise_dim);
}

Design generate_design(const nn::GeneratorModel& model, std::span<const double> latent, std::span<const double> noise) {
    auto c = clamp_latent(latent);
    Design d;
    d.sample = nn::generator_forward(model, c.values, noise);
    d.latent = std::move(c.values);
    d.clamped = c.clamped;
    return d;
}

std::string format_dat(const geom::Curve& curve) {
    std::string out;
    char buf[96];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%.6f %.6f\n", p.x, p.y);
        out += buf;
    }
    return out;
}

void InferenceService::set_model(nn::GeneratorModel model) {
    auto next = std::make_shared<const nn::GeneratorModel>(std::move(model));
    std::lock_guard lock(mutex_);
    model_ = std::move(next);
}

void InferenceService::load_checkpoint(const std::filesystem::path& path) {
    set_model(train::load_checkpoint(path).gen);
}

std::shared_ptr<const nn::GeneratorModel> InferenceService::snapshot() const {
    std::lock_guard lock(mutex_);
    return model_;
}

HttpReply InferenceService::health() const {
    return {200, json{{"status", "ok"}, {"model-loaded", snapshot() != nullptr}}.dump()};
}

HttpReply InferenceService::model_info() const {
    const auto model = snapshot();
    if (!model) return error_reply(503, "model not loaded");
    const auto& c = model->config;
    return {200, json{{"latent-dim", c.latent_dim},
                      {"noise-dim", c.noise_dim},
                      {"degree", c.degree},
                      {"symmetry", geom::to_string(c.symmetry.mode)},
                      {"symmetry-parts", c.symmetry.parts},
                      {"constraint", nn::to_string(c.constraint)},
                      {"head", nn::to_string(c.head)},
                      {"curve-points", c.curve_points}}
                     .dump()};
}

HttpReply InferenceService::generate(const std::string& body) const {
    const auto model = snapshot();
    if (!model) return error_reply(503, "model not loaded");
    GenerateRequest req;
    try {
        req = parse_generate_request(body, model->config.latent_dim, model->config.noise_dim);
    } catch (const Error& e) {
        return error_reply(400, e.what());
    }
    const auto noise = resolve_noise(req, model->config.noise_dim);
    Design d;
    try {
        d = generate_design(*model, req.latent, noise);
    } catch (const Error& e) {
        return error_reply(400, e.what());
    }
    json out{{"points", points_json(d.sample.curve.points)}, {"clamped", d.clamped}, {"latent", d.latent}};
    if (req.noise)
        out["noise"] = *req.noise;
    else
        out["noise-seed"] = req.noise_seed.value_or(kDefaultNoiseSeed);
    if (req.include_control_points) {
        out["control-points"] = points_json(d.sample.prim.control);
        out["weights"] = d.sample.prim.weights;
    }
    return {200, out.dump()};
}

struct HttpServer::Impl {
    explicit Impl(InferenceService& s) : service(s) {}
    InferenceService& service;
    httplib::Server server;
};

HttpServer::HttpServer(InferenceService& service) : impl_(std::make_unique<Impl>(service)) {
    auto& svc = impl_->service;
    auto& srv = impl_->server;
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    const auto send = [](httplib::Response& res, const HttpReply& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    srv.Get("/health", [&svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc.health()); });
    srv.Get("/model", [&svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc.model_info()); });
    srv.Post("/generate", [&svc, send](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.generate(req.body));
    });
    srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int p = impl_->server.bind_to_any_port(host);
        if (p < 0) throw Error("cannot bind " + host);
        return p;
    }
    if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace curvegan::app
