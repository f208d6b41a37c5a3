#include <doctest.h>

#include <random>

#include "core/error.hpp"
#include "core/evaluation.hpp"
#include "oracles.hpp"

using namespace rdskit;
using doctest::Approx;

namespace {

std::vector<LabeledScore> labeled(std::vector<double> incorrect, std::vector<double> correct) {
    std::vector<LabeledScore> v;
    for (double x : incorrect) v.push_back({x, false});
    for (double x : correct) v.push_back({x, true});
    return v;
}

} // namespace

TEST_CASE("rouge_l_f1 examples") {
    CHECK(rouge_l_f1("the cat sat", "the cat sat") == 1.0);
    CHECK(rouge_l_f1("alpha beta", "gamma delta") == 0.0);
    CHECK(rouge_l_f1("the cat sat", "the cat ran") == Approx(2.0 / 3).epsilon(1e-15));
    CHECK(rouge_l_f1("", "anything") == 0.0);
    CHECK(rouge_l_f1("The CAT, sat!", "the cat sat") == 1.0);
}

TEST_CASE("rouge tokens") {
    const auto t = rouge_tokens("  Hello,  World!\tAgain ");
    REQUIRE(t.size() == 3);
    CHECK(t[0] == "hello");
    CHECK(t[2] == "again");
}

TEST_CASE("property: lcs_length matches the recursive oracle") {
    std::mt19937_64 g(21);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> a(g() % 31), b(g() % 31);
        const int vocab = 2 + static_cast<int>(g() % 6);
        for (auto& s : a) s = "w" + std::to_string(g() % vocab);
        for (auto& s : b) s = "w" + std::to_string(g() % vocab);
        CHECK(lcs_length(a, b) == oracle::Lcs(a, b).length());
    }
}

TEST_CASE("label_correct") {
    const std::vector<std::string> ref42{"42"};
    CHECK(label_correct("42", ref42, CorrectnessMode::exact_match()));
    CHECK(label_correct("so it is 42.0", ref42, CorrectnessMode::exact_match()));
    CHECK_FALSE(label_correct("41", ref42, CorrectnessMode::exact_match()));
    CHECK_FALSE(label_correct("no idea", std::vector<std::string>{"no idea"}, CorrectnessMode::exact_match()));
    CHECK(label_correct("Paris!", std::vector<std::string>{"paris"},
                        CorrectnessMode::exact_match(ExtractionMode::normalized_full())));

    const std::vector<std::string> ran{"the cat ran"};
    CHECK(label_correct("the cat sat", ran, CorrectnessMode::rouge_gate(0.3)));
    CHECK_FALSE(label_correct("alpha", std::vector<std::string>{"beta"}, CorrectnessMode::rouge_gate(0.3)));
    // The gate is strict: F1 exactly at the threshold is not enough.
    CHECK_FALSE(label_correct("the cat sat", ran, CorrectnessMode::rouge_gate(2.0 / 3)));
    // Best reference wins.
    CHECK(label_correct("red fox", std::vector<std::string>{"blue whale", "red fox"}, CorrectnessMode::rouge_gate()));
    CHECK_THROWS_AS(label_correct("x", std::vector<std::string>{}, CorrectnessMode::rouge_gate()), Error);
}

TEST_CASE("auroc examples") {
    CHECK(*auroc(labeled({0.9, 0.8}, {0.1, 0.2})) == 1.0);
    CHECK(*auroc(labeled({0.9, 0.15}, {0.1, 0.2})) == 0.75);
    CHECK(*auroc(labeled({0.5}, {0.5})) == 0.5);
    CHECK(*auroc(labeled({0.1}, {0.9})) == 0.0);
    CHECK_FALSE(auroc(labeled({}, {0.1, 0.2})));
    CHECK_FALSE(auroc(labeled({0.3}, {})));
    CHECK_FALSE(auroc({}));
    CHECK_THROWS_AS(auroc(labeled({NAN}, {0.1})), Error);
}

TEST_CASE("property: auroc matches pair counting, including heavy ties") {
    std::mt19937_64 g(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + g() % 60;
        const int levels = trial % 3 == 0 ? 3 : 1000;
        std::vector<double> score(n);
        std::vector<bool> correct(n);
        std::vector<LabeledScore> items;
        for (std::size_t i = 0; i < n; ++i) {
            score[i] = static_cast<double>(g() % levels) / levels;
            correct[i] = g() % 2;
            items.push_back({score[i], correct[i]});
        }
        const double expected = oracle::auroc_pairs(score, correct);
        const auto got = auroc(items);
        if (expected < 0) {
            CHECK_FALSE(got);
        } else {
            REQUIRE(got);
            CHECK(std::fabs(*got - expected) <= 1e-12);
        }
    }
}

TEST_CASE("property: auroc is invariant under monotone transforms") {
    std::mt19937_64 g(29);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LabeledScore> a, b;
        for (int i = 0; i < 20; ++i) {
            const double s = static_cast<double>(g() % 10);
            const bool c = g() % 2;
            a.push_back({s, c});
            b.push_back({std::exp(s / 3) + 7, c});
        }
        const auto x = auroc(a), y = auroc(b);
        REQUIRE(x.has_value() == y.has_value());
        if (x) CHECK(*x == *y);
    }
}

TEST_CASE("best_of_n_select") {
    CHECK(best_of_n_select(std::vector<double>{0.3, 0.1, 0.9}) == 1);
    CHECK(best_of_n_select(std::vector<double>{0.5, 0.5}) == 0);
    CHECK(best_of_n_select(std::vector<double>{7.0}) == 0);
    CHECK(best_of_n_select(std::vector<double>{2, 1, 1, 3}) == 1);
    CHECK_THROWS_AS(best_of_n_select(std::vector<double>{}), Error);
}

TEST_CASE("best_of_n_accuracy") {
    std::vector<BestOfNRecord> recs{
        {{0.2, 0.1}, {false, true}},
        {{0.5, 0.5}, {false, true}},
        {{1.0}, {true}},
    };
    CHECK(*best_of_n_accuracy(recs) == Approx(2.0 / 3));
    CHECK_FALSE(best_of_n_accuracy({}));
    std::vector<BestOfNRecord> bad{{{0.1, 0.2}, {true}}};
    CHECK_THROWS_AS(best_of_n_accuracy(bad), Error);
}
