#include "core/regime_sim.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace rdskit {

namespace {

std::vector<double> random_direction(Rng& rng, std::size_t dim) {
    std::vector<double> g(dim);
    for (;;) {
        for (auto& x : g) x = rng.normal();
        double sq = 0.0;
        for (double x : g) sq += x * x;
        if (sq > 1e-24) return l2_normalize(g);
    }
}

// Unit vector orthogonal to `axis` (which must be unit norm).
std::vector<double> random_orthogonal(Rng& rng, const std::vector<double>& axis) {
    for (;;) {
        std::vector<double> g(axis.size());
        for (auto& x : g) x = rng.normal();
        double proj = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) proj += g[k] * axis[k];
        double sq = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            g[k] -= proj * axis[k];
            sq += g[k] * g[k];
        }
        if (sq > 1e-24) return l2_normalize(g);
    }
}

std::vector<double> jitter(Rng& rng, const std::vector<double>& center, double noise) {
    if (noise == 0.0) return center;
    std::vector<double> v(center);
    for (auto& x : v) x += noise * rng.normal();
    return l2_normalize(v);
}

} // namespace

const char* to_string(Regime r) noexcept {
    switch (r) {
    case Regime::Coherent: return "coherent";
    case Regime::Hemispheric: return "hemispheric";
    case Regime::Opposing: return "opposing";
    }
    return "unknown";
}

Regime parse_regime(std::string_view name) {
    if (name == "coherent") return Regime::Coherent;
    if (name == "hemispheric") return Regime::Hemispheric;
    if (name == "opposing") return Regime::Opposing;
    throw Error(ErrorCode::Config, "unknown regime '" + std::string(name) + "'");
}

void validate(const RegimeConfig& cfg) {
    if (cfg.n < 2) throw Error(ErrorCode::Config, "regime simulation needs n >= 2");
    if (cfg.dim < 1) throw Error(ErrorCode::Config, "regime simulation needs dim >= 1");
    if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise)) {
        throw Error(ErrorCode::Config, "noise must be finite and >= 0");
    }
    if (cfg.regime == Regime::Hemispheric && cfg.dim < 2) {
        throw Error(ErrorCode::Config, "hemispheric regime needs dim >= 2");
    }
    if (cfg.regime == Regime::Opposing) {
        if (cfg.clusters < 2) throw Error(ErrorCode::Config, "opposing regime needs clusters >= 2");
        if (cfg.clusters > cfg.dim + 1) {
            throw Error(ErrorCode::Config,
                        fmt::format("opposing regime with {} clusters needs dim >= {}, got {}",
                                    cfg.clusters, cfg.clusters - 1, cfg.dim));
        }
    }
}

std::vector<std::vector<double>> simplex_directions(std::size_t k, std::size_t dim) {
    if (k < 2 || k > dim + 1) throw Error(ErrorCode::Config, "infeasible simplex size");
    // Vertices e_j - 1/k in R^k, expressed in an orthonormal basis of the
    // hyperplane orthogonal to the all-ones vector (Gram-Schmidt).
    std::vector<std::vector<double>> basis;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        std::vector<double> b(k, -1.0 / static_cast<double>(k));
        b[j] += 1.0;
        for (const auto& q : basis) {
            double proj = 0.0;
            for (std::size_t t = 0; t < k; ++t) proj += b[t] * q[t];
            for (std::size_t t = 0; t < k; ++t) b[t] -= proj * q[t];
        }
        basis.push_back(l2_normalize(b));
    }
    std::vector<std::vector<double>> out;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> v(dim, 0.0);
        for (std::size_t c = 0; c + 1 < k; ++c) {
            double coord = 0.0;
            for (std::size_t t = 0; t < k; ++t) {
                const double vt = (t == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(k);
                coord += vt * basis[c][t];
            }
            v[c] = coord;
        }
        out.push_back(l2_normalize(v));
    }
    // k = 2 gives +-e1 up to rounding; pin it exactly.
    if (k == 2) {
        out[0].assign(dim, 0.0);
        out[1].assign(dim, 0.0);
        out[0][0] = 1.0;
        out[1][0] = -1.0;
    }
    return out;
}

EmbeddingSet generate(const RegimeConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    std::vector<std::vector<double>> rows;
    rows.reserve(cfg.n);

    switch (cfg.regime) {
    case Regime::Coherent: {
        const auto base = random_direction(rng, cfg.dim);
        for (std::size_t i = 0; i < cfg.n; ++i) rows.push_back(jitter(rng, base, cfg.noise));
        break;
    }
    case Regime::Hemispheric: {
        const auto axis = random_direction(rng, cfg.dim);
        std::vector<double> w;
        for (std::size_t i = 0; i < cfg.n; ++i) {
            const double t = rng.uniform(std::numbers::pi / 4.0, std::numbers::pi / 2.0);
            if (i % 2 == 0) {
                w = random_orthogonal(rng, axis);
            } else {
                for (auto& x : w) x = -x;
            }
            std::vector<double> u(cfg.dim);
            for (std::size_t k = 0; k < cfg.dim; ++k) u[k] = std::cos(t) * axis[k] + std::sin(t) * w[k];
            rows.push_back(l2_normalize(u));
        }
        break;
    }
    case Regime::Opposing: {
        const auto centers = simplex_directions(cfg.clusters, cfg.dim);
        for (std::size_t i = 0; i < cfg.n; ++i) {
            rows.push_back(jitter(rng, centers[i % cfg.clusters], cfg.noise));
        }
        break;
    }
    }
    return EmbeddingSet::from_rows(rows);
}

std::vector<SweepRow> sweep(const std::vector<RegimeConfig>& configs) {
    std::vector<SweepRow> out;
    out.reserve(configs.size());
    for (const auto& cfg : configs) {
        const auto set = generate(cfg);
        SweepRow row;
        row.config = cfg;
        row.rds = rds(set);
        row.rds_l2 = rds_l2(set);
        row.eigen_embed = eigen_embed(set);
        row.avg_cosine = avg_pairwise_cosine(set);
        out.push_back(row);
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(r.config.regime), r.config.n,
                           r.config.dim, r.config.noise, r.config.clusters, r.config.seed, r.rds,
                           r.rds_l2, r.eigen_embed, r.avg_cosine);
    }
}

} // namespace rdskit
