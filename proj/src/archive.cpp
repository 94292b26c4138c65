#include "f2a/archive.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "f2a/errors.hpp"

namespace f2a {

namespace {

constexpr char kMagic[8] = {'F', '2', 'A', 'T', 'N', 'S', 'R', '1'};

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t get_u32(std::ifstream& in, const std::string& what) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
        throw CheckpointError("archive truncated reading " + what);
    return v;
}

std::uint64_t get_u64(std::ifstream& in, const std::string& what) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
        throw CheckpointError("archive truncated reading " + what);
    return v;
}

} // namespace

void write_archive(const std::string& path, const nlohmann::json& meta,
                   const NamedTensors& tensors) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + path + " for writing");
    out.write(kMagic, sizeof(kMagic));
    const std::string meta_s = meta.dump();
    put_u64(out, meta_s.size());
    out.write(meta_s.data(), static_cast<std::streamsize>(meta_s.size()));
    put_u64(out, tensors.size());
    for (const auto& [name, t] : tensors) { // std::map iterates sorted
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(out, static_cast<std::uint32_t>(t.n));
        put_u32(out, static_cast<std::uint32_t>(t.c));
        put_u32(out, static_cast<std::uint32_t>(t.h));
        put_u32(out, static_cast<std::uint32_t>(t.w));
        out.write(reinterpret_cast<const char*>(t.v.data()),
                  static_cast<std::streamsize>(t.v.size() * sizeof(float)));
    }
    out.flush();
    if (!out) throw CheckpointError("write failed for " + path);
}

NamedTensors read_archive(const std::string& path, nlohmann::json* meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open " + path);
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, 8) != 0)
        throw CheckpointError(path + " is not a tensor archive (bad magic)");
    const std::uint64_t meta_len = get_u64(in, "metadata length");
    if (meta_len > (1ull << 30))
        throw CheckpointError("implausible metadata size in " + path);
    std::string meta_s(meta_len, '\0');
    if (!in.read(meta_s.data(), static_cast<std::streamsize>(meta_len)))
        throw CheckpointError("archive truncated reading metadata");
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(meta_s);
    } catch (const nlohmann::json::parse_error& e) {
        throw CheckpointError(std::string("corrupt archive metadata: ") + e.what());
    }
    if (meta != nullptr) *meta = std::move(parsed);
    const std::uint64_t count = get_u64(in, "tensor count");
    NamedTensors out;
    std::string prev;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(in, "tensor name length");
        if (name_len == 0 || name_len > 4096)
            throw CheckpointError("implausible tensor name length");
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len))
            throw CheckpointError("archive truncated reading tensor name");
        if (i > 0 && !(prev < name))
            throw CheckpointError("tensor names out of order at " + name);
        prev = name;
        std::uint32_t d[4];
        for (auto& x : d) x = get_u32(in, "dims of " + name);
        const std::uint64_t numel =
            static_cast<std::uint64_t>(d[0]) * d[1] * d[2] * d[3];
        if (numel == 0 || numel > (1ull << 31))
            throw CheckpointError("implausible shape for tensor " + name);
        Tensor t(static_cast<int>(d[0]), static_cast<int>(d[1]),
                 static_cast<int>(d[2]), static_cast<int>(d[3]));
        if (!in.read(reinterpret_cast<char*>(t.v.data()),
                     static_cast<std::streamsize>(numel * sizeof(float))))
            throw CheckpointError("archive truncated reading data of " + name);
        out.emplace(std::move(name), std::move(t));
    }
    return out;
}

} // namespace f2a
