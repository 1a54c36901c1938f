#include "curvegan/app/cli.hpp"

#include "curvegan/app/service.hpp"
#include "curvegan/data/datasets.hpp"
#include "curvegan/error.hpp"
#include "curvegan/eval/metrics.hpp"
#include "curvegan/train/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

namespace curvegan::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bad flag values detected before any work starts.
class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw UsageError(flag + ": empty entry in '" + text + "'");
        tok = tok.substr(b, e - b + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
            throw UsageError(flag + ": malformed number '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(flag + ": no values given");
    return out;
}

data::Range parse_range(const std::string& text, const std::string& flag) {
    const auto v = parse_list(text, flag);
    if (v.size() != 2) throw UsageError(flag + " expects 'lo,hi'");
    if (v[0] > v[1]) throw UsageError(flag + ": lo exceeds hi");
    return {v[0], v[1]};
}

template <class F>
void as_usage(F&& f) {
    try {
        f();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
    if (!f) throw Error("write failed for " + path.string());
}

json echo(const std::string& command, int argc, const char* const* argv, json options) {
    json a = json::array();
    for (int i = 0; i < argc; ++i) a.push_back(argv[i]);
    return json{{"command", command}, {"argv", a}, {"options", std::move(options)}};
}

void write_echo(const fs::path& dir, const json& e) { write_text(dir / "config.json", e.dump(2) + "\n"); }

std::string curve_file_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "curve_%04zu.dat", i);
    return buf;
}

// Last "seconds" entry of a timing CSV, or NaN.
double history_minutes(const fs::path& history) {
    std::ifstream f(history);
    std::string header, line, last;
    if (!f || !std::getline(f, header) || header.find("seconds") == std::string::npos)
        return std::numeric_limits<double>::quiet_NaN();
    while (std::getline(f, line))
        if (!line.empty()) last = line;
    if (last.empty()) return 0.0;
    return std::stod(last.substr(last.rfind(',') + 1)) / 60.0;
}

struct DatasetArgs {
    std::string out;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    int m = 3;
    std::string s1 = "1,10", s2 = "1,10";
    std::string format = "dat";
    std::string input;
    std::size_t points = geom::kCurvePoints;
    double curvature_weight = data::kDefaultCurvatureWeight;
};

struct TrainArgs {
    std::string data, out, resume;
    std::uint64_t steps, seed, eval_every, checkpoint_every = 0;
    std::size_t batch;
    double lr_d, lr_g;
    std::string lambda;
    std::size_t latent_dim, noise_dim, degree, components, parts = 2, hidden, deconv_channels, disc_hidden;
    std::string symmetry = "none", constraint = "open", head = "bezier", disc_depths;

    // Flag defaults mirror the library defaults.
    TrainArgs() {
        const train::TrainConfig t;
        const nn::GeneratorConfig g;
        const nn::DiscriminatorConfig d;
        steps = t.steps, seed = t.seed, eval_every = t.eval_every, batch = t.batch;
        lr_d = t.lr_d, lr_g = t.lr_g;
        const auto join = [](const auto& values) {
            std::ostringstream os;
            for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
            return os.str();
        };
        lambda = join(t.lambda);
        latent_dim = g.latent_dim, noise_dim = g.noise_dim, degree = g.degree, components = g.kumaraswamy_components;
        hidden = g.hidden, deconv_channels = g.deconv_channels, disc_hidden = d.hidden;
        disc_depths = join(d.conv_depths);
    }
};

struct GenerateArgs {
    std::string checkpoint, out, latent;
    std::size_t grid = 0;
    std::uint64_t noise_seed = kDefaultNoiseSeed;
};

struct EvaluateArgs {
    std::string checkpoint, data, out, example = "example", model = "bezier-gan";
    eval::EvalConfig cfg;
    double train_minutes = std::numeric_limits<double>::quiet_NaN();
};

struct ServeArgs {
    std::string checkpoint, host = "127.0.0.1";
    int port = 8080;
};

int cmd_dataset(const std::string& kind, const DatasetArgs& a, int argc, const char* const* argv, std::ostream& out) {
    data::CurveDataset ds;
    json opts{{"kind", kind}, {"out", a.out}};
    if (kind == "superformula") {
        data::Range s1, s2;
        as_usage([&] {
            s1 = parse_range(a.s1, "--s1");
            s2 = parse_range(a.s2, "--s2");
            if (a.count == 0) throw DomainError("--count must be at least 1");
            data::SuperformulaParams{s1.lo, s2.lo, a.m}.validate();
            data::SuperformulaParams{s1.hi, s2.hi, a.m}.validate();
        });
        opts.update({{"m", a.m}, {"count", a.count}, {"seed", a.seed}, {"s1", {s1.lo, s1.hi}}, {"s2", {s2.lo, s2.hi}}});
        ds = data::generate_superformula_dataset(a.count, s1, s2, a.m, a.seed);
    } else if (kind == "waterline") {
        if (a.count == 0) throw UsageError("--count must be at least 1");
        opts.update({{"count", a.count}, {"seed", a.seed}, {"curvature_weight", a.curvature_weight}});
        data::WaterlineOptions wo;
        wo.curvature_weight = a.curvature_weight;
        ds = data::generate_waterline_dataset(a.count, a.seed, wo);
    } else {
        data::PointFormat fmt{};
        as_usage([&] {
            fmt = data::point_format_from_string(a.format);
            if (a.points < 4) throw DomainError("--points must be at least 4");
            if (!(a.curvature_weight >= 0.0)) throw DomainError("--curvature-weight must be nonnegative");
        });
        opts.update({{"format", a.format},
                     {"input", a.input},
                     {"points", a.points},
                     {"curvature_weight", a.curvature_weight}});
        ds = data::load_point_sequences(a.input, fmt, a.points, a.curvature_weight);
    }
    data::save_dataset(ds, a.out);
    write_echo(a.out, echo("dataset", argc, argv, opts));
    out << "dataset " << ds.name << ": count=" << ds.samples.size() << " points=" << ds.samples.front().size()
        << " provenance=" << data::to_string(ds.provenance) << " -> " << a.out << "\n";
    return kExitOk;
}

int cmd_train(const TrainArgs& a, int argc, const char* const* argv, std::ostream& out) {
    train::TrainState state;
    const fs::path dir = a.out;
    if (!a.resume.empty()) {
        state = train::load_checkpoint(a.resume);
    } else {
        nn::GeneratorConfig g;
        nn::DiscriminatorConfig d;
        train::TrainConfig t;
        as_usage([&] {
            g.latent_dim = a.latent_dim;
            g.noise_dim = a.noise_dim;
            g.degree = a.degree;
            g.kumaraswamy_components = a.components;
            const auto mode = geom::symmetry_mode_from_string(a.symmetry);
            g.symmetry = mode == geom::SymmetryMode::None       ? geom::SymmetrySpec::none()
                         : mode == geom::SymmetryMode::AxisX    ? geom::SymmetrySpec::axis_x()
                         : mode == geom::SymmetryMode::AxisY    ? geom::SymmetrySpec::axis_y()
                                                                : geom::SymmetrySpec::rotational(a.parts);
            g.constraint = nn::constraint_from_string(a.constraint);
            g.head = nn::output_head_from_string(a.head);
            g.hidden = a.hidden;
            g.deconv_channels = a.deconv_channels;
            g.validate();
            d.latent_dim = a.latent_dim;
            d.hidden = a.disc_hidden;
            d.conv_depths.clear();
            for (double v : parse_list(a.disc_depths, "--disc-depths")) {
                if (!(v >= 1.0) || v != std::floor(v)) throw DomainError("--disc-depths must be positive integers");
                d.conv_depths.push_back(static_cast<std::size_t>(v));
            }
            d.validate();
            const auto l = parse_list(a.lambda, "--lambda");
            if (l.size() != 5) throw DomainError("--lambda expects 5 values");
            std::copy(l.begin(), l.end(), t.lambda.begin());
            t.lr_d = a.lr_d;
            t.lr_g = a.lr_g;
            t.batch = a.batch;
            t.steps = a.steps;
            t.seed = a.seed;
            t.eval_every = a.eval_every;
            t.validate();
        });
        state = train::init_training(g, d, t);
    }
    const auto ds = data::load_dataset(a.data);
    if (ds.samples.front().size() != state.gen.config.curve_points)
        throw ShapeError("dataset curves have " + std::to_string(ds.samples.front().size()) + " points, model expects " +
                         std::to_string(state.gen.config.curve_points));

    json opts{{"data", a.data},
              {"out", a.out},
              {"resume", a.resume},
              {"steps", a.steps},
              {"checkpoint_every", a.checkpoint_every},
              {"start_step", state.step},
              {"train", state.config},
              {"generator", state.gen.config},
              {"discriminator", state.disc.config}};
    fs::create_directories(dir);
    write_echo(dir, echo("train", argc, argv, opts));

    train::TrainHooks hooks;
    hooks.on_record = [&out](const train::HistoryRecord& r) {
        out << "step " << r.step << " L_D=" << r.loss_d << " L_G=" << r.loss_g << " L_I=" << r.loss_i << "\n";
    };
    hooks.checkpoint_every = a.checkpoint_every;
    hooks.on_checkpoint = [&dir](const train::TrainState& s) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "step_%08llu.ckpt", static_cast<unsigned long long>(s.step));
        fs::create_directories(dir / "checkpoints");
        train::save_checkpoint(s, dir / "checkpoints" / buf);
    };
    const auto history = train::train(ds.samples, state, a.steps, hooks);
    // Wall-clock time goes to its own file so history.csv is reproducible.
    write_text(dir / "history.csv", history.csv(false));
    std::string timing = "step,seconds\n";
    for (const auto& r : history.records) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%llu,%.6f\n", static_cast<unsigned long long>(r.step), r.seconds);
        timing += buf;
    }
    write_text(dir / "timing.csv", timing);
    train::save_checkpoint(state, dir / "checkpoint.ckpt");
    out << "trained to step " << state.step << " -> " << (dir / "checkpoint.ckpt").string() << "\n";
    return kExitOk;
}

int cmd_generate(const GenerateArgs& a, int argc, const char* const* argv, std::ostream& out) {
    if (a.latent.empty() == (a.grid == 0)) throw UsageError("give exactly one of --latent or --grid");
    std::vector<double> single;
    if (!a.latent.empty()) single = parse_list(a.latent, "--latent");
    const auto state = train::load_checkpoint(a.checkpoint);
    const auto& model = state.gen;
    const std::size_t dim = model.config.latent_dim;

    std::vector<std::vector<double>> latents;
    if (!a.latent.empty()) {
        if (single.size() != dim)
            throw UsageError("--latent has " + std::to_string(single.size()) + " values, the checkpoint expects latent dimension " +
                             std::to_string(dim));
        latents.push_back(single);
    } else {
        latents = latent_grid(dim, a.grid);
    }

    const auto noise = nn::noise_from_seed(a.noise_seed, model.config.noise_dim);
    const fs::path dir = a.out;
    fs::create_directories(dir);
    std::vector<geom::Curve> curves;
    std::string index = "file";
    for (std::size_t i = 0; i < dim; ++i) index += ",c" + std::to_string(i);
    index += ",clamped\n";
    for (std::size_t i = 0; i < latents.size(); ++i) {
        const auto d = generate_design(model, latents[i], noise);
        write_text(dir / curve_file_name(i), format_dat(d.sample.curve));
        index += curve_file_name(i);
        for (double v : d.latent) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            index += buf;
        }
        index += d.clamped ? ",1\n" : ",0\n";
        curves.push_back(d.sample.curve);
    }
    write_text(dir / "latents.csv", index);
    write_text(dir / "sheet.svg", svg_sheet(curves, a.grid == 0 ? 1 : a.grid));
    write_echo(dir, echo("generate", argc, argv,
                         {{"checkpoint", a.checkpoint},
                          {"out", a.out},
                          {"latent", single},
                          {"grid", a.grid},
                          {"noise_seed", a.noise_seed},
                          {"count", curves.size()}}));
    out << "wrote " << curves.size() << " curves -> " << a.out << "\n";
    return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& a, int argc, const char* const* argv, std::ostream& out) {
    as_usage([&] { a.cfg.validate(); });
    const auto state = train::load_checkpoint(a.checkpoint);
    const auto ds = data::load_dataset(a.data);
    const auto report = eval::evaluate(eval::wrap_generator(state.gen), ds.samples, a.cfg);
    double minutes = a.train_minutes;
    if (std::isnan(minutes)) minutes = history_minutes(fs::path(a.checkpoint).parent_path() / "timing.csv");
    if (std::isnan(minutes)) minutes = 0.0;

    const fs::path dir = a.out;
    const auto kv = eval::to_key_value(report);
    write_text(dir / "report.txt", kv);
    write_text(dir / "report.csv", eval::table_header() + "\n" + eval::table_row(a.example, a.model, report, minutes) + "\n");
    write_echo(dir, echo("evaluate", argc, argv,
                         {{"checkpoint", a.checkpoint},
                          {"data", a.data},
                          {"out", a.out},
                          {"example", a.example},
                          {"model", a.model},
                          {"train_minutes", minutes},
                          {"eval", a.cfg}}));
    out << kv;
    return kExitOk;
}

int cmd_serve(const ServeArgs& a, int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    if (a.port < 0 || a.port > 65535) throw UsageError("--port must be in [0, 65535]");
    out << echo("serve", argc, argv, {{"checkpoint", a.checkpoint}, {"host", a.host}, {"port", a.port}}).dump() << "\n";
    InferenceService service;
    HttpServer server(service);
    const int port = server.bind(a.host, a.port);
    out << "listening on http://" << a.host << ":" << port << "\n" << std::flush;
    // Requests get 503 until the checkpoint is in place.
    std::thread loader([&] {
        try {
            service.load_checkpoint(a.checkpoint);
            out << "model loaded from " << a.checkpoint << "\n" << std::flush;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            server.wait_until_ready();
            server.stop();
        }
    });
    server.listen();
    loader.join();
    return service.snapshot() ? kExitOk : kExitRuntime;
}

} // namespace

std::vector<std::vector<double>> latent_grid(std::size_t dim, std::size_t k) {
    if (k == 0) throw DomainError("grid size must be positive");
    if (dim == 0) throw DomainError("latent dimension must be positive");
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (total > 100000 / k) throw DomainError("latent grid too large");
        total *= k;
    }
    std::vector<std::vector<double>> out(total, std::vector<double>(dim));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t d = dim; d-- > 0;) {
            const std::size_t j = rest % k;
            rest /= k;
            out[idx][d] = k == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(k - 1);
        }
    }
    return out;
}

std::string svg_sheet(const std::vector<geom::Curve>& curves, std::size_t columns) {
    constexpr double kCell = 200.0, kMargin = 0.1;
    columns = std::max<std::size_t>(1, columns);
    const std::size_t rows = (curves.size() + columns - 1) / columns;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& c : curves)
        for (const auto& p : c.points) {
            x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
        }
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    const double scale = kCell * (1.0 - 2.0 * kMargin) / span;
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << columns * kCell << "\" height=\""
       << std::max<std::size_t>(rows, 1) * kCell << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char buf[64];
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double ox = static_cast<double>(i % columns) * kCell + 0.5 * kCell;
        const double oy = static_cast<double>(i / columns) * kCell + 0.5 * kCell;
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
        for (std::size_t k = 0; k < curves[i].size(); ++k) {
            const auto& p = curves[i].points[k];
            std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", k ? " " : "", ox + (p.x - cx) * scale, oy - (p.y - cy) * scale);
            os << buf;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rational Bezier curve GAN: datasets, training, generation, evaluation and serving"};
    app.require_subcommand(1);

    DatasetArgs ds;
    auto* dataset = app.add_subcommand("dataset", "Build a dataset directory");
    dataset->require_subcommand(1);
    auto* sf = dataset->add_subcommand("superformula", "Synthetic superformula family");
    sf->add_option("--out", ds.out, "Output directory")->required();
    sf->add_option("--count", ds.count, "Number of curves");
    sf->add_option("--seed", ds.seed, "Random seed");
    sf->add_option("--m", ds.m, "Number of lobes");
    sf->add_option("--s1", ds.s1, "Range of s1 as lo,hi");
    sf->add_option("--s2", ds.s2, "Range of s2 as lo,hi");
    auto* wl = dataset->add_subcommand("waterline", "Synthetic waterline family");
    wl->add_option("--out", ds.out, "Output directory")->required();
    wl->add_option("--count", ds.count, "Number of curves");
    wl->add_option("--seed", ds.seed, "Random seed");
    wl->add_option("--curvature-weight", ds.curvature_weight, "Point concentration by curvature");
    auto* ld = dataset->add_subcommand("load", "Resample point-sequence files");
    ld->add_option("--out", ds.out, "Output directory")->required();
    auto* in_dir = ld->add_option("--dir", ds.input, "Directory of point files");
    auto* in_file = ld->add_option("--file", ds.input, "Single point file");
    in_dir->excludes(in_file);
    ld->add_option("--format", ds.format, "dat or csv");
    ld->add_option("--points", ds.points, "Points per curve");
    ld->add_option("--curvature-weight", ds.curvature_weight, "Point concentration by curvature");

    TrainArgs ta;
    auto* tr = app.add_subcommand("train", "Train a generator");
    tr->add_option("--data", ta.data, "Dataset directory")->required();
    tr->add_option("--out", ta.out, "Run directory")->required();
    tr->add_option("--resume", ta.resume, "Continue from a checkpoint (model flags are then ignored)");
    tr->add_option("--steps", ta.steps, "Training steps to run");
    tr->add_option("--batch", ta.batch);
    tr->add_option("--seed", ta.seed);
    tr->add_option("--eval-every", ta.eval_every, "History record interval");
    tr->add_option("--checkpoint-every", ta.checkpoint_every, "Periodic checkpoint interval (0 = off)");
    tr->add_option("--lr-d", ta.lr_d);
    tr->add_option("--lr-g", ta.lr_g);
    tr->add_option("--lambda", ta.lambda, "lambda0..lambda4 as a comma list");
    tr->add_option("--latent-dim", ta.latent_dim);
    tr->add_option("--noise-dim", ta.noise_dim);
    tr->add_option("--degree", ta.degree, "Bezier degree of the prim");
    tr->add_option("--components", ta.components, "Kumaraswamy mixture components");
    tr->add_option("--symmetry", ta.symmetry, "none, axis-x, axis-y or rotational");
    tr->add_option("--parts", ta.parts, "Parts for rotational symmetry");
    tr->add_option("--constraint", ta.constraint, "open, closed or pinned-last");
    tr->add_option("--head", ta.head, "bezier or direct");
    tr->add_option("--hidden", ta.hidden, "Generator dense width");
    tr->add_option("--deconv-channels", ta.deconv_channels);
    tr->add_option("--disc-depths", ta.disc_depths, "Discriminator conv depths as a comma list");
    tr->add_option("--disc-hidden", ta.disc_hidden);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Generate curves from a checkpoint");
    gen->add_option("--checkpoint", ga.checkpoint)->required();
    gen->add_option("--out", ga.out, "Output directory")->required();
    gen->add_option("--latent", ga.latent, "One latent vector as a comma list");
    gen->add_option("--grid", ga.grid, "k points per latent dimension");
    gen->add_option("--noise-seed", ga.noise_seed);

    EvaluateArgs ea;
    auto* ev = app.add_subcommand("evaluate", "Compute MLL, RVOD and the LSC proxy");
    ev->add_option("--checkpoint", ea.checkpoint)->required();
    ev->add_option("--data", ea.data, "Dataset directory")->required();
    ev->add_option("--out", ea.out, "Report directory")->required();
    ev->add_option("--runs", ea.cfg.runs);
    ev->add_option("--samples", ea.cfg.samples, "Generated curves per run");
    ev->add_option("--seed", ea.cfg.seed);
    ev->add_option("--bandwidth", ea.cfg.bandwidth, "KDE bandwidth (0 selects from a grid)");
    ev->add_option("--lsc-lines", ea.cfg.lsc_lines);
    ev->add_option("--lsc-points", ea.cfg.lsc_points);
    ev->add_option("--example", ea.example, "Example label for the table");
    ev->add_option("--model", ea.model, "Model label for the table");
    ev->add_option("--train-minutes", ea.train_minutes, "Defaults to timing.csv next to the checkpoint");

    ServeArgs sa;
    auto* sv = app.add_subcommand("serve", "HTTP inference service");
    sv->add_option("--checkpoint", sa.checkpoint)->required();
    sv->add_option("--host", sa.host, "Bind address")->capture_default_str();
    sv->add_option("--port", sa.port, "0 picks a free port")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*dataset) {
            const std::string kind = *sf ? "superformula" : *wl ? "waterline" : "load";
            if (kind == "load" && ds.input.empty()) throw UsageError("give --dir or --file");
            return cmd_dataset(kind, ds, argc, argv, out);
        }
        if (*tr) return cmd_train(ta, argc, argv, out);
        if (*gen) return cmd_generate(ga, argc, argv, out);
        if (*ev) return cmd_evaluate(ea, argc, argv, out);
        return cmd_serve(sa, argc, argv, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace curvegan::app
