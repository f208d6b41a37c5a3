#pragma once

// Bulk embedding sidecar: "RDSE" magic, u32 version (1), u32 dim, u64 count,
// then count * dim little-endian float32 values, row-major. Rows cover the
// samples of each record in file order; inline embeddings take precedence.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dataio/records.hpp"

namespace rdskit {

struct SidecarMatrix {
    std::uint32_t dim = 0;
    std::vector<float> values;  // row-major

    std::size_t rows() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
};

SidecarMatrix read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const SidecarMatrix& m);

/// Fills missing sample embeddings from consecutive sidecar rows. Throws
/// LengthMismatch when the row count differs from the total sample count.
/// Returns the number of embeddings filled.
std::size_t attach_sidecar(std::vector<PromptRecord>& records, const SidecarMatrix& m);

/// Collects every sample embedding (all must be present and share one dim).
SidecarMatrix sidecar_from_records(const std::vector<PromptRecord>& records);

} // namespace rdskit
