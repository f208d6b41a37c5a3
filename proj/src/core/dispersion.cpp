#include "core/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace rdskit {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
}

double squared_l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

void check_lengths(const EmbeddingSet& set, const ProbabilityWeights& p) {
    if (p.size() != set.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "weights have length " + std::to_string(p.size()) + " but the set has " +
                        std::to_string(set.size()) + " embeddings");
    }
}

// sum_i w_i u_i evaluated as u_0 + sum_i w_i (u_i - u_0). With weights summing
// to one this is the same point, but identical rows give u_0 back exactly.
template <class WeightFn>
std::vector<double> shifted_mean(const EmbeddingSet& set, WeightFn weight) {
    const auto anchor = set.row(0);
    std::vector<double> acc(set.dim(), 0.0);
    for (std::size_t i = 1; i < set.size(); ++i) {
        const auto u = set.row(i);
        const double w = weight(i);
        for (std::size_t k = 0; k < set.dim(); ++k) acc[k] += w * (u[k] - anchor[k]);
    }
    for (std::size_t k = 0; k < set.dim(); ++k) acc[k] += anchor[k];
    return acc;
}

} // namespace

std::vector<double> l2_normalize(std::span<const double> v) {
    if (v.empty()) throw Error(ErrorCode::InvalidArgument, "cannot normalize an empty vector");
    const double norm = std::sqrt(dot(v, v));
    if (!std::isfinite(norm)) throw Error(ErrorCode::InvalidVector, "vector has non-finite components");
    if (norm < kZeroNormThreshold) {
        throw Error(ErrorCode::DegenerateEmbedding, "embedding has zero norm");
    }
    std::vector<double> out(v.begin(), v.end());
    for (auto& x : out) x /= norm;
    return out;
}

EmbeddingSet EmbeddingSet::from_flat(std::span<const double> data, std::size_t dim,
                                     std::size_t* renormalized) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be >= 1");
    if (data.size() % dim != 0) {
        throw Error(ErrorCode::LengthMismatch, "flat embedding buffer is not a multiple of dim");
    }
    const std::size_t n = data.size() / dim;
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "an embedding set needs at least 2 samples, got " + std::to_string(n));
    }
    std::vector<double> out(data.begin(), data.end());
    std::size_t touched = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::span<double> r(out.data() + i * dim, dim);
        double sq = 0.0;
        for (double x : r) {
            if (!std::isfinite(x)) {
                throw Error(ErrorCode::InvalidVector,
                            "embedding " + std::to_string(i) + " has non-finite components");
            }
            sq += x * x;
        }
        const double norm = std::sqrt(sq);
        if (norm < kZeroNormThreshold) {
            throw Error(ErrorCode::DegenerateEmbedding,
                        "embedding " + std::to_string(i) + " has zero norm");
        }
        if (std::abs(norm - 1.0) > kUnitNormTolerance) {
            for (auto& x : r) x /= norm;
            ++touched;
        }
    }
    if (renormalized) *renormalized = touched;
    return EmbeddingSet(std::move(out), n, dim);
}

EmbeddingSet EmbeddingSet::from_rows(const std::vector<std::vector<double>>& rows,
                                     std::size_t* renormalized) {
    if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty embedding set");
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw Error(ErrorCode::LengthMismatch,
                        "embedding " + std::to_string(i) + " has dimension " +
                            std::to_string(rows[i].size()) + ", expected " + std::to_string(dim));
        }
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return from_flat(flat, dim, renormalized);
}

EmbeddingSet EmbeddingSet::from_rows(const std::vector<std::vector<float>>& rows,
                                     std::size_t* renormalized) {
    std::vector<std::vector<double>> wide;
    wide.reserve(rows.size());
    for (const auto& r : rows) wide.emplace_back(r.begin(), r.end());
    return from_rows(wide, renormalized);
}

ProbabilityWeights::ProbabilityWeights(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw Error(ErrorCode::InvalidArgument, "empty probability weights");
    double sum = 0.0;
    for (double w : w_) {
        if (!std::isfinite(w) || w < 0.0) {
            throw Error(ErrorCode::InvalidLikelihood, "probability weights must be finite and >= 0");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        throw Error(ErrorCode::InvalidLikelihood,
                    "probability weights sum to " + std::to_string(sum) + ", not 1");
    }
}

ProbabilityWeights ProbabilityWeights::uniform(std::size_t n) {
    return ProbabilityWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<double> centroid(const EmbeddingSet& set) {
    const double w = 1.0 / static_cast<double>(set.size());
    return shifted_mean(set, [w](std::size_t) { return w; });
}

std::vector<double> weighted_centroid(const EmbeddingSet& set, const ProbabilityWeights& p) {
    check_lengths(set, p);
    return shifted_mean(set, [&p](std::size_t i) { return p[i]; });
}

double rds(const EmbeddingSet& set) {
    const auto c = centroid(set);
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += l1_distance(set.row(i), c);
    return s;
}

double rds_l2(const EmbeddingSet& set) {
    const auto c = centroid(set);
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += std::sqrt(squared_l2_distance(set.row(i), c));
    return s;
}

double eigen_embed(const EmbeddingSet& set) {
    const auto c = centroid(set);
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += squared_l2_distance(set.row(i), c);
    return s / static_cast<double>(set.size());
}

double eigen_embed_centroid_form(const EmbeddingSet& set) {
    const auto c = centroid(set);
    return 1.0 - dot(c, c);
}

double rds_weighted(const EmbeddingSet& set, const ProbabilityWeights& p) {
    const auto c = weighted_centroid(set, p);
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += p[i] * l1_distance(set.row(i), c);
    return s;
}

std::vector<double> rds_per_sample(const EmbeddingSet& set) {
    const auto c = centroid(set);
    std::vector<double> out(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) out[i] = l1_distance(set.row(i), c);
    return out;
}

std::vector<double> rds_w_per_sample(const EmbeddingSet& set, const ProbabilityWeights& p) {
    const auto c = weighted_centroid(set, p);
    std::vector<double> out(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) out[i] = l1_distance(set.row(i), c);
    return out;
}

double avg_pairwise_cosine(const EmbeddingSet& set) {
    const std::size_t n = set.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) s += dot(set.row(i), set.row(j));
    }
    return 2.0 * s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

ProbabilityWeights probs_from_anll(std::span<const double> anlls) {
    if (anlls.empty()) throw Error(ErrorCode::InvalidArgument, "no likelihoods supplied");
    for (double a : anlls) {
        if (!std::isfinite(a)) throw Error(ErrorCode::InvalidLikelihood, "non-finite ANLL value");
    }
    // exp(-a_i) / sum_j exp(-a_j), shifted by the smallest ANLL.
    const double lo = *std::min_element(anlls.begin(), anlls.end());
    std::vector<double> w(anlls.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < anlls.size(); ++i) {
        w[i] = std::exp(-(anlls[i] - lo));
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return ProbabilityWeights(std::move(w));
}

ScoreSet score_set(const EmbeddingSet& set, const ProbabilityWeights* p) {
    ScoreSet out;
    out.per_sample = rds_per_sample(set);
    for (double d : out.per_sample) out.rds += d;
    out.rds_l2 = rds_l2(set);
    out.eigen_embed = eigen_embed(set);
    if (p) {
        auto w = rds_w_per_sample(set, *p);
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += (*p)[i] * w[i];
        out.rds_w = s;
        out.per_sample_w = std::move(w);
    }
    return out;
}

} // namespace rdskit
