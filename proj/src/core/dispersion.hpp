#pragma once

// Radial dispersion kernel: hypersphere geometry over the embeddings of N
// sampled generations for one prompt. Every sum accumulates in double.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rdskit {

inline constexpr double kUnitNormTolerance = 1e-6;
inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kZeroNormThreshold = 1e-12;

/// Returns v / ||v||_2. Throws DegenerateEmbedding for a (near) zero vector.
std::vector<double> l2_normalize(std::span<const double> v);

/// N >= 2 unit-norm vectors of a common dimension, stored row-major.
/// Immutable after construction.
class EmbeddingSet {
public:
    /// Rows not within kUnitNormTolerance of unit norm are renormalized; the
    /// number of rows touched is written to `renormalized` when non-null.
    static EmbeddingSet from_rows(const std::vector<std::vector<double>>& rows,
                                  std::size_t* renormalized = nullptr);
    static EmbeddingSet from_rows(const std::vector<std::vector<float>>& rows,
                                  std::size_t* renormalized = nullptr);
    static EmbeddingSet from_flat(std::span<const double> data, std::size_t dim,
                                  std::size_t* renormalized = nullptr);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * dim_, dim_};
    }
    std::span<const double> data() const noexcept { return data_; }

private:
    EmbeddingSet(std::vector<double> data, std::size_t n, std::size_t dim)
        : data_(std::move(data)), n_(n), dim_(dim) {}

    std::vector<double> data_;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
};

/// Non-negative weights summing to one.
class ProbabilityWeights {
public:
    explicit ProbabilityWeights(std::vector<double> weights);

    static ProbabilityWeights uniform(std::size_t n);

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const noexcept { return w_[i]; }
    std::span<const double> values() const noexcept { return w_; }

private:
    std::vector<double> w_;
};

std::vector<double> centroid(const EmbeddingSet& set);
std::vector<double> weighted_centroid(const EmbeddingSet& set, const ProbabilityWeights& p);

/// Sum of l1 distances of each embedding to the centroid.
double rds(const EmbeddingSet& set);
/// Same with the l2 norm.
double rds_l2(const EmbeddingSet& set);
/// Trace of the embedding covariance: mean squared l2 distance of each
/// embedding to the centroid. In [0, 1] for unit-norm rows.
double eigen_embed(const EmbeddingSet& set);
/// 1 - ||centroid||^2, the closed form eigen_embed() reduces to on the sphere.
double eigen_embed_centroid_form(const EmbeddingSet& set);

/// sum_i p_i ||u_i - u_w||_1 with u_w the p-weighted centroid. This is the
/// 1-Wasserstein distance (l1 ground cost) between sum_i p_i delta(u_i) and
/// the Dirac at u_w, since the only coupling moves every atom to u_w.
double rds_weighted(const EmbeddingSet& set, const ProbabilityWeights& p);

std::vector<double> rds_per_sample(const EmbeddingSet& set);
std::vector<double> rds_w_per_sample(const EmbeddingSet& set, const ProbabilityWeights& p);

/// Mean of u_i . u_j over ordered pairs i != j.
double avg_pairwise_cosine(const EmbeddingSet& set);

/// p_i proportional to exp(-anll_i), via a max-shifted softmax.
ProbabilityWeights probs_from_anll(std::span<const double> anlls);

struct ScoreSet {
    double rds = 0.0;
    double rds_l2 = 0.0;
    std::optional<double> rds_w;
    double eigen_embed = 0.0;
    std::vector<double> per_sample;
    std::optional<std::vector<double>> per_sample_w;
};

ScoreSet score_set(const EmbeddingSet& set, const ProbabilityWeights* p = nullptr);

} // namespace rdskit
