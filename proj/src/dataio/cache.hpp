#pragma once

// Content-addressed embedding cache. Key = SHA-256(encoder_id || 0x00 || text),
// stored one file per entry under <root>/<key[0:2]>/<key>.emb.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdskit {

/// Lowercase hex SHA-256 of the raw bytes.
std::string sha256_hex(std::string_view bytes);

class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path root);

    /// $RDSKIT_CACHE_DIR, else $XDG_CACHE_HOME/rdskit, else ~/.cache/rdskit.
    static std::filesystem::path default_root();

    static std::string key(std::string_view encoder_id, std::string_view text);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path entry_path(const std::string& key) const;

    /// Absent on a miss; a corrupt entry is reported and treated as a miss.
    std::optional<std::vector<double>> lookup(std::string_view encoder_id, std::string_view text) const;

    /// Durable write via temp file + rename. Returns false when an identical
    /// entry already exists. Throws InvalidVector for non-finite input and Io
    /// on write failure.
    bool store(std::string_view encoder_id, std::string_view text, std::span<const double> vector);

    std::uint64_t lookups() const noexcept { return lookups_.load(); }
    std::uint64_t hits() const noexcept { return hits_.load(); }

private:
    std::filesystem::path root_;
    mutable std::atomic<std::uint64_t> lookups_{0};
    mutable std::atomic<std::uint64_t> hits_{0};
};

} // namespace rdskit
