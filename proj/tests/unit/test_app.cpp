#include "doctest.h"

#include "curvegan/app/cli.hpp"
#include "curvegan/app/service.hpp"
#include "curvegan/data/datasets.hpp"
#include "curvegan/error.hpp"
#include "curvegan/train/trainer.hpp"

#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

using namespace curvegan;
using namespace curvegan::app;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("curvegan_app_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "curvegan");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::vector<std::string> kSmallModel = {"--hidden", "16", "--deconv-channels", "8", "--disc-depths", "4,8",
                                              "--disc-hidden", "16", "--batch", "4"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

nn::GeneratorModel small_model(std::uint64_t seed, std::size_t latent_dim = 2) {
    nn::GeneratorConfig cfg;
    cfg.latent_dim = latent_dim;
    cfg.hidden = 16;
    cfg.deconv_channels = 8;
    nn::Rng rng(seed);
    return nn::GeneratorModel::create(cfg, rng);
}

// One superformula dataset and a briefly trained checkpoint shared by the CLI cases.
struct Fixture {
    fs::path root, data, run;
    Fixture() {
        root = scratch("fixture");
        data = root / "data";
        run = root / "run";
        REQUIRE(cli({"dataset", "superformula", "--m", "3", "--count", "40", "--seed", "1", "--out", data.string()}).code ==
                0);
        const auto r = cli(concat({"train", "--data", data.string(), "--out", run.string(), "--steps", "6",
                                   "--eval-every", "2", "--seed", "3"},
                                  kSmallModel));
        REQUIRE_MESSAGE(r.code == 0, r.err);
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

} // namespace

TEST_CASE("latent grid and clamping") {
    const auto g = latent_grid(2, 3);
    REQUIRE(g.size() == 9);
    CHECK(g[0] == std::vector<double>{0.0, 0.0});
    CHECK(g[1] == std::vector<double>{0.0, 0.5});
    CHECK(g[8] == std::vector<double>{1.0, 1.0});
    CHECK(latent_grid(3, 2).size() == 8);
    CHECK(latent_grid(2, 1) == std::vector<std::vector<double>>{{0.5, 0.5}});
    CHECK_THROWS_AS(latent_grid(2, 0), DomainError);

    const std::vector<double> in{-0.2, 0.4, 1.5};
    const auto c = clamp_latent(in);
    CHECK(c.clamped);
    CHECK(c.values == std::vector<double>{0.0, 0.4, 1.0});
    const std::vector<double> ok{0.0, 1.0};
    CHECK_FALSE(clamp_latent(ok).clamped);
}

TEST_CASE("generate request parsing") {
    const auto r = parse_generate_request(R"({"latent":[0.1,0.2],"noise-seed":5,"include-control-points":false})", 2, 3);
    CHECK(r.latent == std::vector<double>{0.1, 0.2});
    CHECK(r.noise_seed == 5u);
    CHECK_FALSE(r.noise.has_value());
    CHECK_FALSE(r.include_control_points);
    CHECK(resolve_noise(r, 3) == nn::noise_from_seed(5, 3));
    CHECK(resolve_noise(parse_generate_request(R"({"latent":[0,0]})", 2, 3), 3) ==
          nn::noise_from_seed(kDefaultNoiseSeed, 3));
    const auto explicit_noise = parse_generate_request(R"({"latent":[0,0],"noise":[1,2,3],"noise-seed":4})", 2, 3);
    CHECK(resolve_noise(explicit_noise, 3) == std::vector<double>{1, 2, 3});

    for (const char* bad : {"{", "[1,2]", R"({"noise-seed":1})", R"({"latent":[0.1]})", R"({"latent":"x"})",
                            R"({"latent":[0.1,"a"]})", R"({"latent":[0,0],"noise-seed":-1})",
                            R"({"latent":[0,0],"noise-seed":1.5})", R"({"latent":[0,0],"noise":[1]})",
                            R"({"latent":[0,0],"include-control-points":1})"})
        CHECK_THROWS_AS(parse_generate_request(bad, 2, 3), DomainError);
}

TEST_CASE("service handlers") {
    InferenceService svc;
    CHECK(svc.health().status == 200);
    CHECK(json::parse(svc.health().body)["model-loaded"] == false);
    CHECK(svc.model_info().status == 503);
    CHECK(svc.generate(R"({"latent":[0.5,0.5]})").status == 503);

    const auto model = small_model(1);
    svc.set_model(model);
    const auto info = json::parse(svc.model_info().body);
    CHECK(info["latent-dim"] == 2);
    CHECK(info["noise-dim"] == 10);
    CHECK(info["degree"] == 31);
    CHECK(info["symmetry"] == "none");
    CHECK(info["constraint"] == "open");

    const std::string body = R"({"latent":[0.25,0.75],"noise-seed":9})";
    const auto a = svc.generate(body);
    const auto b = svc.generate(body);
    REQUIRE(a.status == 200);
    CHECK(a.body == b.body);
    const auto ja = json::parse(a.body);
    CHECK(ja["points"].size() == 64);
    CHECK(ja["control-points"].size() == 32);
    CHECK(ja["weights"].size() == 32);
    CHECK(ja["clamped"] == false);

    // Matches the forward pass directly.
    const std::vector<double> c{0.25, 0.75};
    const auto direct = nn::generator_forward(model, c, nn::noise_from_seed(9, 10));
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(ja["points"][i][0].get<double>() == direct.curve.points[i].x);
        CHECK(ja["points"][i][1].get<double>() == direct.curve.points[i].y);
    }

    // Out-of-range latent is clamped and flagged.
    const auto over = json::parse(svc.generate(R"({"latent":[1.5,0.75],"noise-seed":9})").body);
    const auto at_one = json::parse(svc.generate(R"({"latent":[1.0,0.75],"noise-seed":9})").body);
    CHECK(over["clamped"] == true);
    CHECK(over["latent"][0] == 1.0);
    CHECK(over["points"] == at_one["points"]);

    // Explicit noise equal to the seed expansion gives the same curve.
    json with_noise{{"latent", {0.25, 0.75}}, {"noise", nn::noise_from_seed(9, 10)}};
    CHECK(json::parse(svc.generate(with_noise.dump()).body)["points"] == ja["points"]);

    const auto lean = json::parse(svc.generate(R"({"latent":[0.1,0.2],"include-control-points":false})").body);
    CHECK_FALSE(lean.contains("control-points"));
    CHECK_FALSE(lean.contains("weights"));

    CHECK(svc.generate(R"({"latent":[0.1]})").status == 400);
    CHECK(svc.generate("not json").status == 400);
    CHECK(json::parse(svc.generate("not json").body).contains("error"));

    // Hot swap: a different snapshot serves different curves; old snapshots stay valid.
    const auto before = svc.snapshot();
    svc.set_model(small_model(2));
    CHECK(svc.generate(body).body != a.body);
    CHECK(before->params.size() == svc.snapshot()->params.size());
}

TEST_CASE("service over localhost HTTP") {
    InferenceService svc;
    HttpServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread t([&] { server.listen(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/model");
    REQUIRE(res);
    CHECK(res->status == 503);

    svc.set_model(small_model(4));
    res = client.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["status"] == "ok");

    res = client.Get("/model");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == svc.model_info().body);

    const std::string body = R"({"latent":[0.3,0.6],"noise-seed":2})";
    auto r1 = client.Post("/generate", body, "application/json");
    auto r2 = client.Post("/generate", body, "application/json");
    REQUIRE(r1);
    REQUIRE(r2);
    CHECK(r1->status == 200);
    CHECK(r1->body == r2->body);
    CHECK(r1->body == svc.generate(body).body);
    CHECK(r1->get_header_value("Access-Control-Allow-Origin") == "*");

    auto bad = client.Post("/generate", R"({"latent":[0.3]})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    server.stop();
    t.join();
}

TEST_CASE("cli dataset superformula and usage errors") {
    const auto dir = scratch("sf");
    const auto r = cli({"dataset", "superformula", "--m", "3", "--count", "100", "--seed", "1", "--out", (dir / "d").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("count=100") != std::string::npos);
    CHECK(r.out.find("points=64") != std::string::npos);
    CHECK(r.out.find("synthetic-superformula") != std::string::npos);
    const auto ds = data::load_dataset(dir / "d");
    REQUIRE(ds.samples.size() == 100);
    for (const auto& c : ds.samples) CHECK(c.points.front() == geom::Point{1.0, 0.0});
    const auto echo = json::parse(slurp(dir / "d" / "config.json"));
    CHECK(echo["command"] == "dataset");
    CHECK(echo["options"]["count"] == 100);

    CHECK(cli({"dataset", "superformula", "--s1", "5,1", "--out", (dir / "x").string()}).code == kExitUsage);
    CHECK(cli({"dataset", "superformula", "--s1", "0,3", "--out", (dir / "x").string()}).code == kExitUsage);
    CHECK(cli({"dataset", "superformula", "--bogus", "--out", (dir / "x").string()}).code == kExitUsage);
    CHECK(cli({"dataset"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);

    const auto w = cli({"dataset", "waterline", "--count", "5", "--seed", "2", "--out", (dir / "w").string()});
    REQUIRE_MESSAGE(w.code == 0, w.err);
    CHECK(w.out.find("synthetic-waterline") != std::string::npos);
}

TEST_CASE("cli dataset load") {
    const auto dir = scratch("load");
    fs::create_directories(dir / "in");
    for (int k = 0; k < 3; ++k) {
        std::ofstream f(dir / "in" / ("shape" + std::to_string(k) + ".dat"));
        f << "shape " << k << "\n";
        for (int i = 0; i <= 40; ++i) {
            const double t = 2.0 * 3.14159265358979 * i / 40.0;
            f << 0.5 + 0.5 * std::cos(t) << " " << (0.1 + 0.05 * k) * std::sin(t) << "\n";
        }
    }
    const auto r = cli({"dataset", "load", "--format", "dat", "--dir", (dir / "in").string(), "--out", (dir / "d").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto ds = data::load_dataset(dir / "d");
    CHECK(ds.samples.size() == 3);
    for (const auto& c : ds.samples) CHECK(c.size() == 64);
    CHECK(r.out.find("file-loaded") != std::string::npos);

    fs::create_directories(dir / "bad");
    {
        std::ofstream f(dir / "bad" / "broken.dat");
        f << "0 0\n1 0\n1 x\n0 1\n";
    }
    const auto b = cli({"dataset", "load", "--format", "dat", "--dir", (dir / "bad").string(), "--out", (dir / "e").string()});
    CHECK(b.code == kExitRuntime);
    CHECK(b.err.find("broken.dat:3:") != std::string::npos);

    CHECK(cli({"dataset", "load", "--format", "xyz", "--dir", (dir / "in").string(), "--out", (dir / "e").string()}).code ==
          kExitUsage);
    CHECK(cli({"dataset", "load", "--out", (dir / "e").string()}).code == kExitUsage);
    CHECK(cli({"dataset", "load", "--dir", (dir / "missing").string(), "--out", (dir / "e").string()}).code ==
          kExitRuntime);
}

TEST_CASE("cli train: outputs, zero steps, determinism, resume") {
    const auto& fx = fixture();
    CHECK(fs::exists(fx.run / "checkpoint.ckpt"));
    CHECK(fs::exists(fx.run / "config.json"));
    CHECK(fs::exists(fx.run / "timing.csv"));
    const auto history = slurp(fx.run / "history.csv");
    CHECK(history.rfind("step,L_D,L_G,L_I,R1,R2,R3,R4\n", 0) == 0);
    CHECK(std::count(history.begin(), history.end(), '\n') == 1 + 3);
    const auto echo = json::parse(slurp(fx.run / "config.json"));
    CHECK(echo["options"]["train"]["seed"] == 3);
    CHECK(echo["options"]["generator"]["hidden"] == 16);

    const auto dir = scratch("train");
    const auto base = concat({"train", "--data", fx.data.string(), "--seed", "7", "--eval-every", "2"}, kSmallModel);

    auto zero = concat(base, {"--out", (dir / "zero").string(), "--steps", "0", "--checkpoint-every", "1"});
    REQUIRE(cli(zero).code == 0);
    CHECK(fs::exists(dir / "zero" / "checkpoint.ckpt"));
    CHECK_FALSE(fs::exists(dir / "zero" / "checkpoints"));
    CHECK(train::load_checkpoint(dir / "zero" / "checkpoint.ckpt").step == 0);

    REQUIRE(cli(concat(base, {"--out", (dir / "a").string(), "--steps", "6"})).code == 0);
    REQUIRE(cli(concat(base, {"--out", (dir / "b").string(), "--steps", "6", "--checkpoint-every", "3"})).code == 0);
    CHECK(slurp(dir / "a" / "history.csv") == slurp(dir / "b" / "history.csv"));
    CHECK(fs::exists(dir / "b" / "checkpoints" / "step_00000003.ckpt"));
    CHECK(fs::exists(dir / "b" / "checkpoints" / "step_00000006.ckpt"));

    // 3 + 3 from a periodic checkpoint equals 6 straight.
    const auto resumed = cli({"train", "--data", fx.data.string(), "--out", (dir / "c").string(), "--steps", "3",
                              "--resume", (dir / "b" / "checkpoints" / "step_00000003.ckpt").string()});
    REQUIRE_MESSAGE(resumed.code == 0, resumed.err);
    const auto full = train::load_checkpoint(dir / "a" / "checkpoint.ckpt");
    const auto cont = train::load_checkpoint(dir / "c" / "checkpoint.ckpt");
    CHECK(cont.step == 6);
    CHECK(cont.gen.params == full.gen.params);
    CHECK(cont.disc.params == full.disc.params);

    CHECK(cli(concat(base, {"--out", (dir / "u").string(), "--symmetry", "spiral"})).code == kExitUsage);
    CHECK(cli(concat(base, {"--out", (dir / "u").string(), "--lambda", "1,2"})).code == kExitUsage);
    CHECK(cli(concat(base, {"--out", (dir / "u").string(), "--degree", "30"})).code == kExitUsage);
    CHECK(cli({"train", "--data", (dir / "nowhere").string(), "--out", (dir / "u").string()}).code == kExitRuntime);
}

TEST_CASE("cli generate and service agree") {
    const auto& fx = fixture();
    const auto dir = scratch("gen");
    const auto ckpt = (fx.run / "checkpoint.ckpt").string();

    const auto wrong = cli({"generate", "--checkpoint", ckpt, "--latent", "0.2,0.8,0.1", "--out", (dir / "w").string()});
    CHECK(wrong.code == kExitUsage);
    CHECK(wrong.err.find("latent dimension 2") != std::string::npos);
    CHECK(cli({"generate", "--checkpoint", ckpt, "--out", (dir / "w").string()}).code == kExitUsage);
    CHECK(cli({"generate", "--checkpoint", ckpt, "--latent", "0.2,abc", "--out", (dir / "w").string()}).code ==
          kExitUsage);
    CHECK(cli({"generate", "--checkpoint", (dir / "none.ckpt").string(), "--grid", "2", "--out", (dir / "w").string()})
              .code == kExitRuntime);

    REQUIRE(cli({"generate", "--checkpoint", ckpt, "--grid", "3", "--out", (dir / "grid").string()}).code == 0);
    std::size_t dats = 0;
    for (const auto& e : fs::directory_iterator(dir / "grid")) dats += e.path().extension() == ".dat";
    CHECK(dats == 9);
    const auto svg = slurp(dir / "grid" / "sheet.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(std::count(svg.begin(), svg.end(), '\n') >= 9);
    CHECK(fs::exists(dir / "grid" / "config.json"));
    CHECK(fs::exists(dir / "grid" / "latents.csv"));

    for (const char* name : {"one", "two"})
        REQUIRE(cli({"generate", "--checkpoint", ckpt, "--latent", "0.2,0.8", "--noise-seed", "11", "--out",
                     (dir / name).string()})
                    .code == 0);
    const auto dat = slurp(dir / "one" / "curve_0000.dat");
    CHECK(dat == slurp(dir / "two" / "curve_0000.dat"));
    CHECK(std::count(dat.begin(), dat.end(), '\n') == 64);

    InferenceService svc;
    svc.load_checkpoint(ckpt);
    const auto reply = json::parse(svc.generate(R"({"latent":[0.2,0.8],"noise-seed":11})").body);
    geom::Curve from_service;
    for (const auto& p : reply["points"]) from_service.points.push_back({p[0].get<double>(), p[1].get<double>()});
    CHECK(format_dat(from_service) == dat);

    // Clamped CLI latent matches the clamped service request.
    REQUIRE(cli({"generate", "--checkpoint", ckpt, "--latent", "1.4,0.8", "--noise-seed", "11", "--out",
                 (dir / "clamp").string()})
                .code == 0);
    const auto clamped = json::parse(svc.generate(R"({"latent":[1.4,0.8],"noise-seed":11})").body);
    geom::Curve c2;
    for (const auto& p : clamped["points"]) c2.points.push_back({p[0].get<double>(), p[1].get<double>()});
    CHECK(format_dat(c2) == slurp(dir / "clamp" / "curve_0000.dat"));
    CHECK(slurp(dir / "clamp" / "latents.csv").find(",1\n") != std::string::npos);
}

TEST_CASE("cli evaluate") {
    const auto& fx = fixture();
    const auto dir = scratch("eval");
    const auto ckpt = (fx.run / "checkpoint.ckpt").string();
    const auto r = cli({"evaluate", "--checkpoint", ckpt, "--data", fx.data.string(), "--out", (dir / "r").string(),
                        "--runs", "1", "--samples", "50", "--lsc-lines", "10", "--lsc-points", "4", "--example",
                        "superformula-1"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto kv = slurp(dir / "r" / "report.txt");
    CHECK(kv.find("MLL_std=0\n") != std::string::npos);
    CHECK(kv.find("RVOD_std=0\n") != std::string::npos);
    CHECK(kv.find("runs=1\n") != std::string::npos);
    const auto csv = slurp(dir / "r" / "report.csv");
    CHECK(csv.rfind("example,model,MLL,RVOD,LSC,train-minutes\nsuperformula-1,bezier-gan,", 0) == 0);
    CHECK(fs::exists(dir / "r" / "config.json"));

    CHECK(cli({"evaluate", "--checkpoint", (dir / "missing.ckpt").string(), "--data", fx.data.string(), "--out",
               (dir / "m").string()})
              .code == kExitRuntime);
    CHECK(cli({"evaluate", "--checkpoint", ckpt, "--data", fx.data.string(), "--out", (dir / "m").string(), "--runs",
               "0"})
              .code == kExitUsage);
}
