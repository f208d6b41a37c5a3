#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/baselines.hpp"

namespace rdskit {

/// Tokens used for ROUGE: normalize_text() split on single spaces.
std::vector<std::string> rouge_tokens(std::string_view text);

/// Length of the longest common subsequence of two token lists.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// LCS-based F1 over rouge_tokens(); 0 if either side is empty.
double rouge_l_f1(std::string_view candidate, std::string_view reference);

inline constexpr double kDefaultRougeThreshold = 0.3;

struct CorrectnessMode {
    enum class Kind { ExactMatch, RougeGate };
    Kind kind = Kind::RougeGate;
    double threshold = kDefaultRougeThreshold;
    // Extraction used for exact match on both candidate and references.
    ExtractionMode extraction = ExtractionMode::last_number();

    static CorrectnessMode exact_match(ExtractionMode m = ExtractionMode::last_number()) {
        return {Kind::ExactMatch, kDefaultRougeThreshold, std::move(m)};
    }
    static CorrectnessMode rouge_gate(double threshold = kDefaultRougeThreshold) {
        return {Kind::RougeGate, threshold, ExtractionMode::normalized_full()};
    }
};

/// exact match: extracted answers equal (an unanswerable candidate never
/// matches). rouge gate: max over references of rouge_l_f1 > threshold.
bool label_correct(std::string_view candidate, std::span<const std::string> references,
                   const CorrectnessMode& mode);

struct LabeledScore {
    double uncertainty = 0.0;
    bool correct = false;
};

/// P(uncertainty of a random incorrect item > that of a random correct item),
/// ties counted 1/2. Empty when either class is empty.
std::optional<double> auroc(std::span<const LabeledScore> items);

/// argmin with ties resolved to the lowest index.
std::size_t best_of_n_select(std::span<const double> per_sample_scores);

struct BestOfNRecord {
    std::vector<double> scores;
    std::vector<bool> correct;
};

/// Fraction of records whose selected sample is correct; empty for no records.
std::optional<double> best_of_n_accuracy(std::span<const BestOfNRecord> records);

} // namespace rdskit
