#include "dataio/sidecar.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "core/error.hpp"

namespace rdskit {

namespace {

constexpr std::array<char, 4> kMagic{'R', 'D', 'S', 'E'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
    }
}

template <class T>
T get_le(std::istream& in) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof()) throw Error(ErrorCode::Io, "truncated sidecar file");
        value |= static_cast<T>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return value;
}

} // namespace

SidecarMatrix read_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open sidecar " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw Error(ErrorCode::Io, path.string() + " is not an embedding sidecar");
    if (get_le<std::uint32_t>(in) != kVersion) throw Error(ErrorCode::SchemaVersionMismatch, "unsupported sidecar version");
    SidecarMatrix m;
    m.dim = get_le<std::uint32_t>(in);
    const auto count = get_le<std::uint64_t>(in);
    if (m.dim == 0 && count > 0) throw Error(ErrorCode::Io, "sidecar declares dim 0");
    m.values.resize(static_cast<std::size_t>(count) * m.dim);
    for (auto& v : m.values) v = std::bit_cast<float>(get_le<std::uint32_t>(in));
    if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::Io, "trailing bytes in sidecar");
    return m;
}

void write_sidecar(const std::filesystem::path& path, const SidecarMatrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write sidecar " + path.string());
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint32_t>(out, m.dim);
    put_le<std::uint64_t>(out, m.rows());
    for (float v : m.values) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
    if (!out) throw Error(ErrorCode::Io, "failed writing sidecar " + path.string());
}

std::size_t attach_sidecar(std::vector<PromptRecord>& records, const SidecarMatrix& m) {
    std::size_t total = 0;
    for (const auto& r : records) total += r.samples.size();
    if (total != m.rows()) {
        throw Error(ErrorCode::LengthMismatch,
                    "sidecar has " + std::to_string(m.rows()) + " rows but records hold " +
                        std::to_string(total) + " samples");
    }
    std::size_t row = 0, filled = 0;
    for (auto& r : records) {
        for (auto& s : r.samples) {
            if (!s.embedding) {
                const float* p = m.values.data() + row * m.dim;
                s.embedding = std::vector<double>(p, p + m.dim);
                ++filled;
            }
            ++row;
        }
    }
    return filled;
}

SidecarMatrix sidecar_from_records(const std::vector<PromptRecord>& records) {
    SidecarMatrix m;
    for (const auto& r : records) {
        for (const auto& s : r.samples) {
            if (!s.embedding) throw Error(ErrorCode::InvalidArgument, "record " + r.id + " has a sample without an embedding");
            if (m.dim == 0) m.dim = static_cast<std::uint32_t>(s.embedding->size());
            if (s.embedding->size() != m.dim) throw Error(ErrorCode::LengthMismatch, "sidecar rows must share one dimension");
            for (double x : *s.embedding) m.values.push_back(static_cast<float>(x));
        }
    }
    return m;
}

} // namespace rdskit
