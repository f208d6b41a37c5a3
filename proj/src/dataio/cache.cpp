#include "dataio/cache.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "core/error.hpp"
#include "core/log.hpp"

namespace rdskit {

namespace {

// Entry layout (little-endian):
//   "RDKC" | u32 version | u32 dim | u32 reserved | i64 created_at (unix s)
//   | 32-byte key digest | dim * f64
constexpr std::array<char, 4> kMagic{'R', 'D', 'K', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 4 + 8 + 32;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::string& buf, std::size_t off, std::size_t width) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[off + i])) << (8 * i);
    }
    return v;
}

std::string digest_bytes(const std::string& hex) {
    std::string out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
        out.push_back(static_cast<char>(std::stoi(hex.substr(i, 2), nullptr, 16)));
    }
    return out;
}

std::string encode_entry(const std::string& key, std::span<const double> v) {
    std::string out(kMagic.begin(), kMagic.end());
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(v.size()));
    put_u32(out, 0);
    const auto now = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::system_clock::now().time_since_epoch());
    put_u64(out, static_cast<std::uint64_t>(now.count()));
    out += digest_bytes(key);
    for (double x : v) put_u64(out, std::bit_cast<std::uint64_t>(x));
    return out;
}

// Returns the payload, or an empty optional with `why` filled on corruption.
std::optional<std::vector<double>> decode_entry(const std::string& buf, const std::string& key,
                                                std::string& why) {
    if (buf.size() < kHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), buf.begin())) {
        why = "bad header";
        return std::nullopt;
    }
    if (get_le(buf, 4, 4) != kVersion) {
        why = "unsupported version";
        return std::nullopt;
    }
    const auto dim = static_cast<std::size_t>(get_le(buf, 8, 4));
    if (dim == 0 || buf.size() != kHeaderSize + 8 * dim) {
        why = "size does not match header";
        return std::nullopt;
    }
    if (buf.compare(24, 32, digest_bytes(key)) != 0) {
        why = "key digest mismatch";
        return std::nullopt;
    }
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = std::bit_cast<double>(get_le(buf, kHeaderSize + 8 * i, 8));
        if (!std::isfinite(v[i])) {
            why = "non-finite component";
            return std::nullopt;
        }
    }
    return v;
}

std::optional<std::string> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Io, "SHA-256 computation failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create cache directory " + root_.string() + ": " + ec.message());
}

std::filesystem::path EmbeddingCache::default_root() {
    if (const char* d = std::getenv("RDSKIT_CACHE_DIR"); d && *d) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "rdskit";
    if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "rdskit";
    return std::filesystem::temp_directory_path() / "rdskit-cache";
}

std::string EmbeddingCache::key(std::string_view encoder_id, std::string_view text) {
    std::string material(encoder_id);
    material.push_back('\0');
    material.append(text);
    return sha256_hex(material);
}

std::filesystem::path EmbeddingCache::entry_path(const std::string& key) const {
    return root_ / key.substr(0, 2) / (key + ".emb");
}

std::optional<std::vector<double>> EmbeddingCache::lookup(std::string_view encoder_id,
                                                          std::string_view text) const {
    ++lookups_;
    const auto k = key(encoder_id, text);
    const auto path = entry_path(k);
    const auto buf = slurp(path);
    if (!buf) return std::nullopt;
    std::string why;
    auto v = decode_entry(*buf, k, why);
    if (!v) {
        log::warn(fmt::format("ignoring corrupt cache entry {} ({})", path.string(), why));
        return std::nullopt;
    }
    ++hits_;
    return v;
}

bool EmbeddingCache::store(std::string_view encoder_id, std::string_view text,
                           std::span<const double> vector) {
    if (vector.empty()) throw Error(ErrorCode::InvalidVector, "cannot cache an empty vector");
    for (double x : vector) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidVector, "cannot cache a vector with non-finite components");
    }
    const auto k = key(encoder_id, text);
    const auto path = entry_path(k);

    if (const auto buf = slurp(path)) {
        std::string why;
        if (const auto existing = decode_entry(*buf, k, why)) {
            if (std::equal(existing->begin(), existing->end(), vector.begin(), vector.end(),
                           [](double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); })) {
                return false;
            }
            log::warn(fmt::format("cache entry {} differs from the new vector; overwriting", path.string()));
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());

    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    static std::atomic<std::uint64_t> counter{0};
    const auto tmp = path.parent_path() / fmt::format(".{}.{:x}.{}.tmp", k, tid, counter++);
    const auto payload = encode_entry(k, vector);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::Io, "failed writing cache entry " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::Io, "cannot commit cache entry " + path.string());
    }
    return true;
}

} // namespace rdskit
