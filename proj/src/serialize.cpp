#include "ttopt/serialize.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <json.hpp>

#include "ttopt/errors.hpp"

namespace ttopt {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'T', 'V', '1'};

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    std::uint64_t u64() { return uint(8); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
    double f64() { return std::bit_cast<double>(u64()); }
    void expect_magic() {
        need(4);
        for (std::size_t i = 0; i < 4; ++i)
            if (static_cast<char>(bytes_[pos_ + i]) != kMagic[i])
                throw ParseError("bad magic: not a TTV1 file");
        pos_ += 4;
    }
    [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (remaining() < n) throw ParseError("truncated TT file");
    }
    std::uint64_t uint(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i)
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

// Validates the header-level rank chain with ParseError messages naming the core.
void check_chain(const std::vector<std::uint64_t>& modes, const std::vector<std::uint64_t>& ranks) {
    if (modes.empty()) throw ParseError("TT file declares zero modes");
    if (ranks.front() != 1) throw ParseError("rank chain: core 1 must have left rank 1");
    if (ranks.back() != 1)
        throw ParseError("rank chain: core " + std::to_string(modes.size()) +
                         " must have right rank 1");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] == 0) throw ParseError("core " + std::to_string(i + 1) + ": zero mode size");
        if (ranks[i + 1] == 0)
            throw ParseError("rank chain: core " + std::to_string(i + 1) + " has zero right rank");
    }
}

TTTensor build(const std::vector<std::uint64_t>& modes, const std::vector<std::uint64_t>& ranks,
               std::vector<std::vector<double>> data) {
    std::vector<TTCore> cores;
    cores.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        cores.emplace_back(ranks[i], modes[i], ranks[i + 1], std::move(data[i]));
    try {
        return TTTensor(std::move(cores));
    } catch (const std::domain_error& e) {
        throw ParseError(e.what());
    }
}

}  // namespace

std::vector<std::byte> serialize(const TTTensor& t) {
    std::vector<std::byte> out;
    for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
    const auto d = static_cast<std::uint32_t>(t.dim());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((d >> (8 * i)) & 0xff));
    for (auto n : t.shape()) put_u64(out, n);
    for (auto r : t.ranks()) put_u64(out, r);
    for (const auto& core : t.cores())
        for (double v : core.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

TTTensor deserialize(std::span<const std::byte> bytes) {
    if (bytes.empty()) throw ParseError("empty TT file");
    Reader in(bytes);
    in.expect_magic();
    const std::uint32_t d = in.u32();
    if (d == 0) throw ParseError("TT file declares zero modes");
    if (static_cast<std::uint64_t>(d) * 16 + 8 > in.remaining()) throw ParseError("truncated TT file");
    std::vector<std::uint64_t> modes(d), ranks(d + 1);
    for (auto& n : modes) n = in.u64();
    for (auto& r : ranks) r = in.u64();
    check_chain(modes, ranks);
    std::vector<std::vector<double>> data(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::uint64_t count = 0;
        if (__builtin_mul_overflow(ranks[i], modes[i], &count) ||
            __builtin_mul_overflow(count, ranks[i + 1], &count) || count > in.remaining() / 8) throw ParseError("truncated TT file in core " + std::to_string(i + 1));
        data[i].resize(count);
        for (auto& v : data[i]) v = in.f64();
    }
    if (in.remaining() != 0) throw ParseError("trailing bytes after last core");
    return build(modes, ranks, std::move(data));
}

void save(const TTTensor& t, const std::filesystem::path& path) {
    const auto bytes = serialize(t);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

TTTensor load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(std::as_bytes(std::span<const char>(raw)));
}

std::string to_json_string(const TTTensor& t) {
    nlohmann::json j;
    j["format"] = "TTV1";
    j["d"] = t.dim();
    j["modes"] = t.shape();
    j["ranks"] = t.ranks();
    auto cores = nlohmann::json::array();
    for (const auto& c : t.cores()) cores.push_back(std::vector<double>(c.data().begin(), c.data().end()));
    j["cores"] = std::move(cores);
    return j.dump();
}

TTTensor from_json_string(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("format").get<std::string>() != "TTV1") throw ParseError("unknown format tag");
        const auto d = j.at("d").get<std::uint64_t>();
        auto modes = j.at("modes").get<std::vector<std::uint64_t>>();
        auto ranks = j.at("ranks").get<std::vector<std::uint64_t>>();
        auto data = j.at("cores").get<std::vector<std::vector<double>>>();
        if (modes.size() != d || ranks.size() != d + 1 || data.size() != d)
            throw ParseError("field lengths do not match d");
        check_chain(modes, ranks);
        for (std::size_t i = 0; i < d; ++i)
            if (data[i].size() != ranks[i] * modes[i] * ranks[i + 1])
                throw ParseError("core " + std::to_string(i + 1) + ": wrong element count");
        return build(modes, ranks, std::move(data));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON sidecar: ") + e.what());
    }
}

}  // namespace ttopt
