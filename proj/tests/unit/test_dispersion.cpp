#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "core/dispersion.hpp"
#include "core/error.hpp"
#include "oracles.hpp"

using namespace rdskit;
using doctest::Approx;

namespace {

EmbeddingSet set_of(const oracle::Matrix& u) { return EmbeddingSet::from_rows(u); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an rdskit::Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("l2_normalize scales to unit length") {
    const std::vector<double> v{3, 4};
    const auto u = l2_normalize(v);
    CHECK(u[0] == Approx(0.6));
    CHECK(u[1] == Approx(0.8));
    CHECK(code_of([] { l2_normalize(std::vector<double>{0, 0, 0}); }) == ErrorCode::DegenerateEmbedding);
    CHECK(code_of([] { l2_normalize(std::vector<double>{}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("EmbeddingSet validates its rows") {
    CHECK(code_of([] { set_of({{1, 0}}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { set_of({{1, 0}, {1, 0, 0}}); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([] { set_of({{1, 0}, {0, 0}}); }) == ErrorCode::DegenerateEmbedding);
    CHECK(code_of([] { set_of({{1, 0}, {NAN, 0}}); }) == ErrorCode::InvalidVector);

    std::size_t touched = 99;
    const auto s = EmbeddingSet::from_rows(oracle::Matrix{{2, 0}, {0, 1}, {0.6, 0.8}}, &touched);
    CHECK(touched == 1);
    CHECK(s.row(0)[0] == 1.0);
    CHECK(s.size() == 3);
    CHECK(s.dim() == 2);
}

TEST_CASE("EmbeddingSet accepts float rows and flat buffers") {
    const std::vector<std::vector<float>> f{{1.f, 0.f}, {0.f, 1.f}};
    const auto a = EmbeddingSet::from_rows(f);
    const std::vector<double> flat{1, 0, 0, 1};
    const auto b = EmbeddingSet::from_flat(flat, 2);
    CHECK(rds(a) == rds(b));
    CHECK(code_of([&] { EmbeddingSet::from_flat(std::vector<double>{1, 0, 0}, 2); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("ProbabilityWeights checks normalization") {
    CHECK_NOTHROW(ProbabilityWeights({0.25, 0.75}));
    CHECK(code_of([] { ProbabilityWeights({0.5, 0.6}); }) == ErrorCode::InvalidLikelihood);
    CHECK(code_of([] { ProbabilityWeights({-0.1, 1.1}); }) == ErrorCode::InvalidLikelihood);
    const auto u = ProbabilityWeights::uniform(4);
    CHECK(u[3] == 0.25);
}

TEST_CASE("identical embeddings have zero dispersion") {
    const auto s = set_of({{0.6, 0.8}, {0.6, 0.8}, {0.6, 0.8}});
    CHECK(rds(s) == 0.0);
    CHECK(rds_l2(s) == 0.0);
    CHECK(eigen_embed(s) == 0.0);
}

TEST_CASE("antipodal pair") {
    const auto s = set_of({{1, 0}, {-1, 0}});
    CHECK(rds(s) == 2.0);
    CHECK(rds_l2(s) == 2.0);
    CHECK(eigen_embed(s) == 1.0);
    CHECK(avg_pairwise_cosine(s) == -1.0);
}

TEST_CASE("orthogonal pair in the plane") {
    // centroid (1/2, 1/2): each row sits at l1 distance 1 and l2 distance 1/sqrt(2).
    const auto s = set_of({{1, 0}, {0, 1}});
    CHECK(rds(s) == Approx(2.0).epsilon(1e-12));
    CHECK(rds_l2(s) == Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(eigen_embed(s) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("weighted reductions") {
    const auto s = set_of({{1, 0}, {0, 1}, {-1, 0}});
    SUBCASE("mismatched weights") {
        CHECK(code_of([&] { rds_weighted(s, ProbabilityWeights::uniform(2)); }) == ErrorCode::LengthMismatch);
    }
    SUBCASE("point mass: the weighted centroid is the chosen row") {
        const ProbabilityWeights p({0, 1, 0});
        const auto c = weighted_centroid(s, p);
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 1.0);
        CHECK(rds_weighted(s, p) == 0.0);
        const auto per = rds_w_per_sample(s, p);
        CHECK(per[0] == Approx(2.0));
        CHECK(per[1] == 0.0);
    }
}

TEST_CASE("probs_from_anll is a max-shifted softmax of -anll") {
    const std::vector<double> a{0.5, 1.5, 1000.0};
    const auto p = probs_from_anll(a);
    const double z = 1 + std::exp(-1.0) + std::exp(-999.5);
    CHECK(p[0] == Approx(1 / z).epsilon(1e-15));
    CHECK(p[1] == Approx(std::exp(-1.0) / z).epsilon(1e-15));
    CHECK(p[2] >= 0.0);
    CHECK(code_of([] { probs_from_anll(std::vector<double>{0.1, INFINITY}); }) == ErrorCode::InvalidLikelihood);
}

TEST_CASE("score_set bundles the reductions") {
    const auto s = set_of({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0.6, 0.8}});
    const auto plain = score_set(s);
    CHECK_FALSE(plain.rds_w);
    CHECK_FALSE(plain.per_sample_w);
    CHECK(plain.rds == Approx(rds(s)).epsilon(1e-15));
    CHECK(plain.per_sample.size() == 5);
    const auto p = ProbabilityWeights::uniform(5);
    const auto weighted = score_set(s, &p);
    REQUIRE(weighted.rds_w);
    CHECK(*weighted.rds_w == Approx(rds(s) / 5).epsilon(1e-12));
}

// -------------------------------------------------------------- properties

TEST_CASE("property: kernel agrees with the naive oracle") {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + g() % 20;
        const std::size_t d = 1 + g() % 40;
        const auto u = oracle::random_set(g, n, d);
        const auto p = oracle::random_simplex(g, n);
        const auto s = set_of(u);
        CHECK(rds(s) == Approx(oracle::rds(u)).epsilon(1e-12));
        CHECK(rds_weighted(s, ProbabilityWeights(p)) == Approx(oracle::rds_weighted(u, p)).epsilon(1e-12));
    }
}

TEST_CASE("property: bounds and rds >= sqrt(N * eigen_embed) >= eigen_embed") {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + g() % 30;
        const std::size_t d = 2 + g() % 64;
        const auto s = set_of(oracle::random_set(g, n, d));
        const double ee = eigen_embed(s);
        const double r = rds(s);
        const double N = static_cast<double>(n);
        CHECK(ee >= 0.0);
        CHECK(ee <= 1.0 + 1e-12);
        CHECK(r >= std::sqrt(N * ee) - 1e-9);
        CHECK(std::sqrt(N * ee) >= ee - 1e-9);
        CHECK(rds_l2(s) <= r + 1e-12);  // ||x||_2 <= ||x||_1
        CHECK(eigen_embed_centroid_form(s) == Approx(ee).epsilon(1e-9));
    }
}

TEST_CASE("property: permutation invariance and per-sample decomposition") {
    std::mt19937_64 g(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + g() % 12;
        auto u = oracle::random_set(g, n, 3 + g() % 10);
        auto p = oracle::random_simplex(g, n);
        const auto s = set_of(u);
        const ProbabilityWeights w(p);
        const double r = rds(s);
        const double rw = rds_weighted(s, w);

        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), g);
        oracle::Matrix u2;
        std::vector<double> p2;
        for (auto i : perm) {
            u2.push_back(u[i]);
            p2.push_back(p[i]);
        }
        const auto s2 = set_of(u2);
        CHECK(rds(s2) == Approx(r).epsilon(1e-12));
        CHECK(rds_weighted(s2, ProbabilityWeights(p2)) == Approx(rw).epsilon(1e-12));

        const auto per = rds_per_sample(s);
        CHECK(std::accumulate(per.begin(), per.end(), 0.0) == Approx(r).epsilon(1e-12));
        const auto per_w = rds_w_per_sample(s, w);
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc += p[i] * per_w[i];
        CHECK(acc == Approx(rw).epsilon(1e-12));
        CHECK(rds_weighted(s, ProbabilityWeights::uniform(n)) == Approx(r / static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("property: avg pairwise cosine relates to the centroid norm") {
    // sum_{i,j} u_i.u_j = N^2 |c|^2 and the diagonal contributes N.
    std::mt19937_64 g(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + g() % 15;
        const auto s = set_of(oracle::random_set(g, n, 2 + g() % 20));
        const double N = static_cast<double>(n);
        const double c2 = 1.0 - eigen_embed(s);
        CHECK(avg_pairwise_cosine(s) == Approx((N * N * c2 - N) / (N * (N - 1))).epsilon(1e-9));
    }
}
