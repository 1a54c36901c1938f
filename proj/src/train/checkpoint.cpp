#include "curvegan/error.hpp"
#include "curvegan/train/trainer.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace curvegan::train {
namespace {

// Layout: magic, u32 version, u64 header length, JSON header, payload of
// little-endian f64, u64 FNV-1a checksum of header and payload.
constexpr char kMagic[8] = {'C', 'U', 'R', 'V', 'G', 'A', 'N', '1'};

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    return v;
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    return v;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

using Group = std::pair<std::string, const nn::ParameterSet*>;

std::vector<Group> groups_of(const TrainState& s) {
    return {{"gen/", &s.gen.params},       {"disc/", &s.disc.params},     {"adam_g.m/", &s.adam_g.m},
            {"adam_g.v/", &s.adam_g.v},    {"adam_d.m/", &s.adam_d.m},    {"adam_d.v/", &s.adam_d.v}};
}

} // namespace

void save_checkpoint(const TrainState& state, const std::filesystem::path& path) {
    nlohmann::json header;
    header["generator"] = state.gen.config;
    header["discriminator"] = state.disc.config;
    header["train"] = state.config;
    header["step"] = state.step;
    std::ostringstream rng_text;
    rng_text << state.rng;
    header["rng"] = rng_text.str();
    header["adam_g_t"] = state.adam_g.t;
    header["adam_d_t"] = state.adam_d.t;

    std::string payload;
    std::uint64_t offset = 0;
    auto& dir = header["tensors"] = nlohmann::json::array();
    for (const auto& [prefix, set] : groups_of(state)) {
        for (const auto& [name, t] : *set) {
            dir.push_back({{"name", prefix + name}, {"shape", t.shape()}, {"offset", offset}});
            for (double v : t.storage()) put_u64(payload, std::bit_cast<std::uint64_t>(v));
            offset += t.size();
        }
    }
    header["count"] = offset;

    const std::string head = header.dump();
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kCheckpointVersion);
    put_u64(out, head.size());
    out += head;
    out += payload;
    put_u64(out, fnv1a(std::string_view(out).substr(sizeof kMagic + 12)));

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
        f.write(out.data(), static_cast<std::streamsize>(out.size()));
        if (!f) throw CheckpointError("failed writing checkpoint '" + path.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

TrainState load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const std::string_view in(bytes);
    const auto corrupt = [&](const std::string& why) {
        return CheckpointError("corrupt checkpoint '" + path.string() + "': " + why);
    };

    constexpr std::size_t prefix = sizeof kMagic + 12;
    if (in.size() < prefix + 8) throw corrupt("file too short");
    if (in.substr(0, sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) throw corrupt("bad magic");
    const auto version = get_u32(in, sizeof kMagic);
    if (version != kCheckpointVersion)
        throw CheckpointError("checkpoint '" + path.string() + "' has version " + std::to_string(version) +
                              ", expected " + std::to_string(kCheckpointVersion));
    const auto head_len = get_u64(in, sizeof kMagic + 4);
    if (head_len > in.size() - prefix - 8) throw corrupt("truncated header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(in.substr(prefix, head_len));
    } catch (const nlohmann::json::exception& e) {
        throw corrupt(std::string("unreadable header: ") + e.what());
    }

    TrainState s;
    std::uint64_t count = 0;
    try {
        s.gen.config = header.at("generator").get<nn::GeneratorConfig>();
        s.disc.config = header.at("discriminator").get<nn::DiscriminatorConfig>();
        s.config = header.at("train").get<TrainConfig>();
        s.step = header.at("step").get<std::uint64_t>();
        std::istringstream rng_text(header.at("rng").get<std::string>());
        rng_text >> s.rng;
        if (!rng_text) throw corrupt("bad rng state");
        s.adam_g.t = header.at("adam_g_t").get<std::uint64_t>();
        s.adam_d.t = header.at("adam_d_t").get<std::uint64_t>();
        count = header.at("count").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw corrupt(std::string("bad header field: ") + e.what());
    }

    const std::size_t payload_at = prefix + head_len;
    if (count > (in.size() - payload_at) / 8 || in.size() != payload_at + 8 * count + 8)
        throw corrupt("payload size does not match header (truncated?)");
    if (get_u64(in, payload_at + 8 * count) != fnv1a(in.substr(sizeof kMagic + 12, head_len + 8 * count)))
        throw corrupt("checksum mismatch");

    std::map<std::string, std::pair<ad::Shape, std::uint64_t>> directory;
    for (const auto& e : header.at("tensors"))
        directory[e.at("name").get<std::string>()] = {e.at("shape").get<ad::Shape>(), e.at("offset").get<std::uint64_t>()};

    const auto fill = [&](const std::string& prefix_name, const std::map<std::string, ad::Shape>& shapes,
                          nn::ParameterSet& into) {
        for (const auto& [name, shape] : shapes) {
            auto it = directory.find(prefix_name + name);
            if (it == directory.end()) throw CheckpointError("checkpoint is missing tensor '" + prefix_name + name + "'");
            const auto& [stored, offset] = it->second;
            if (stored != shape)
                throw CheckpointError("tensor '" + prefix_name + name + "' has shape " + ad::shape_string(stored) +
                                      ", expected " + ad::shape_string(shape));
            const std::size_t n = ad::shape_size(shape);
            if (offset + n > count) throw corrupt("tensor '" + prefix_name + name + "' lies outside the payload");
            std::vector<double> values(n);
            for (std::size_t i = 0; i < n; ++i)
                values[i] = std::bit_cast<double>(get_u64(in, payload_at + 8 * (offset + i)));
            into.insert_or_assign(name, ad::Tensor(shape, std::move(values)));
        }
    };
    const auto gshapes = nn::generator_parameter_shapes(s.gen.config);
    const auto dshapes = nn::discriminator_parameter_shapes(s.disc.config);
    fill("gen/", gshapes, s.gen.params);
    fill("disc/", dshapes, s.disc.params);
    fill("adam_g.m/", gshapes, s.adam_g.m);
    fill("adam_g.v/", gshapes, s.adam_g.v);
    fill("adam_d.m/", dshapes, s.adam_d.m);
    fill("adam_d.v/", dshapes, s.adam_d.v);
    return s;
}

} // namespace curvegan::train
