#include "core/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace rdskit {

std::vector<std::string> rouge_tokens(std::string_view text) {
    const std::string norm = normalize_text(text);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < norm.size()) {
        auto end = norm.find(' ', start);
        if (end == std::string::npos) end = norm.size();
        out.emplace_back(norm.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l_f1(std::string_view candidate, std::string_view reference) {
    const auto cand = rouge_tokens(candidate);
    const auto ref = rouge_tokens(reference);
    if (cand.empty() || ref.empty()) return 0.0;
    const auto lcs = static_cast<double>(lcs_length(cand, ref));
    if (lcs == 0.0) return 0.0;
    const double p = lcs / static_cast<double>(cand.size());
    const double r = lcs / static_cast<double>(ref.size());
    return 2.0 * p * r / (p + r);
}

bool label_correct(std::string_view candidate, std::span<const std::string> references,
                   const CorrectnessMode& mode) {
    if (references.empty()) {
        throw Error(ErrorCode::InvalidArgument, "at least one reference answer is required");
    }
    if (mode.kind == CorrectnessMode::Kind::ExactMatch) {
        const auto got = extract_answer(candidate, mode.extraction);
        if (got.unanswerable) return false;
        return std::any_of(references.begin(), references.end(), [&](const std::string& ref) {
            const auto want = extract_answer(ref, mode.extraction);
            return !want.unanswerable && want.canonical == got.canonical;
        });
    }
    double best = 0.0;
    for (const auto& ref : references) best = std::max(best, rouge_l_f1(candidate, ref));
    return best > mode.threshold;
}

std::optional<double> auroc(std::span<const LabeledScore> items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (const auto& it : items) {
        if (!std::isfinite(it.uncertainty)) {
            throw Error(ErrorCode::InvalidArgument, "AUROC input contains a non-finite score");
        }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return items[a].uncertainty < items[b].uncertainty;
    });

    // Mann-Whitney: sum of (tie-averaged) ranks of the incorrect items.
    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && items[order[j]].uncertainty == items[order[i]].uncertainty) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (!items[order[k]].correct) {
                pos_rank_sum += avg_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = items.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::nullopt;
    const double p = static_cast<double>(n_pos);
    const double u = pos_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(n_neg));
}

std::size_t best_of_n_select(std::span<const double> per_sample_scores) {
    if (per_sample_scores.empty()) throw Error(ErrorCode::InvalidArgument, "no samples to select from");
    std::size_t best = 0;
    for (std::size_t i = 1; i < per_sample_scores.size(); ++i) {
        if (per_sample_scores[i] < per_sample_scores[best]) best = i;
    }
    return best;
}

std::optional<double> best_of_n_accuracy(std::span<const BestOfNRecord> records) {
    if (records.empty()) return std::nullopt;
    std::size_t hits = 0;
    for (const auto& r : records) {
        if (r.scores.size() != r.correct.size()) {
            throw Error(ErrorCode::LengthMismatch, "scores and correctness lengths differ");
        }
        if (r.correct[best_of_n_select(r.scores)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

} // namespace rdskit
