#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdskit {

/// Natural-log token probabilities of one generation (T >= 1, all <= 0 up to
/// rounding).
class TokenLogprobs {
public:
    explicit TokenLogprobs(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// -mean(log p). Throws EmptyGeneration on an empty list.
double anll(std::span<const double> logprobs);
inline double anll(const TokenLogprobs& lp) { return anll(lp.values()); }

/// -sum(log p). Throws EmptyGeneration on an empty list.
double nll(std::span<const double> logprobs);
inline double nll(const TokenLogprobs& lp) { return nll(lp.values()); }

enum class AnswerKind { Numeric, Text };

struct ExtractedAnswer {
    std::string canonical;
    AnswerKind kind = AnswerKind::Text;
    bool unanswerable = false;

    // Voting key; all unanswerable samples share one bucket.
    std::string bucket() const;
    friend bool operator==(const ExtractedAnswer&, const ExtractedAnswer&) = default;
};

struct ExtractionMode {
    enum class Kind { LastNumber, NormalizedFull, Regex };
    Kind kind = Kind::NormalizedFull;
    std::string pattern;  // Regex only

    static ExtractionMode last_number() { return {Kind::LastNumber, {}}; }
    static ExtractionMode normalized_full() { return {Kind::NormalizedFull, {}}; }
    static ExtractionMode regex(std::string p) { return {Kind::Regex, std::move(p)}; }
};

/// Parses "last_number", "normalized_full" (or "normalized") and
/// "regex:<pattern>".
ExtractionMode parse_extraction_mode(std::string_view name);

/// Lowercase, ASCII punctuation removed, whitespace runs collapsed, trimmed.
std::string normalize_text(std::string_view text);

/// Canonical form of a numeric literal: no '+', no thousands separators, no
/// redundant leading zeros, no trailing fractional zeros.
std::string canonical_number(std::string_view literal);

ExtractedAnswer extract_answer(std::string_view text, const ExtractionMode& mode);

/// 1 - (size of the largest answer bucket) / N.
double self_consistency(std::span<const ExtractedAnswer> answers);

/// Per-sample form used for best-of-N: 1 - (size of the sample's bucket) / N.
std::vector<double> self_consistency_per_sample(std::span<const ExtractedAnswer> answers);

} // namespace rdskit
