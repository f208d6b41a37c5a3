#pragma once

// Synthetic unit-vector sets for the three dispersion regimes: one tight
// cluster (coherent), a broad spread that stays on one side of an axis
// (hemispheric), and balanced clusters whose mean cancels (opposing).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "core/dispersion.hpp"

namespace rdskit {

enum class Regime { Coherent, Hemispheric, Opposing };

const char* to_string(Regime r) noexcept;
Regime parse_regime(std::string_view name);

struct RegimeConfig {
    Regime regime = Regime::Coherent;
    std::size_t n = 10;
    std::size_t dim = 2;
    double noise = 0.0;
    std::size_t clusters = 2;  // opposing only
    std::uint64_t seed = 0;
};

/// Throws Config for an infeasible configuration.
void validate(const RegimeConfig& cfg);

/// Deterministic in cfg (including the seed).
///  coherent:    random base direction, samples = normalize(base + noise * g).
///  hemispheric: random axis a; sample i = cos(t) a + sin(t) w, t ~ U[pi/4, pi/2),
///               w a random unit vector orthogonal to a, taken as -w for every
///               second sample so the spread is symmetric about a. noise unused.
///  opposing:    k unit centers forming a regular simplex (+-e1 for k = 2),
///               sample i assigned to center i mod k, jittered by noise.
EmbeddingSet generate(const RegimeConfig& cfg);

/// Unit vectors of a regular k-simplex centred at the origin, embedded in the
/// first k-1 coordinates of R^dim.
std::vector<std::vector<double>> simplex_directions(std::size_t k, std::size_t dim);

struct SweepRow {
    RegimeConfig config;
    double rds = 0.0;
    double rds_l2 = 0.0;
    double eigen_embed = 0.0;
    double avg_cosine = 0.0;
};

std::vector<SweepRow> sweep(const std::vector<RegimeConfig>& configs);

inline constexpr std::string_view kSweepCsvHeader =
    "regime,n,dim,noise,clusters,seed,rds,rds_l2,eigen_embed,avg_cosine";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace rdskit
