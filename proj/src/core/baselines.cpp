#include "core/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <unordered_map>

#include "core/error.hpp"

namespace rdskit {

namespace {

// Allow tiny positive log-probs that come from rounding on the server side.
constexpr double kLogprobSlack = 1e-9;

const std::regex& number_regex() {
    static const std::regex re(R"([+-]?(?:\d[\d,]*(?:\.\d+)?|\.\d+))");
    return re;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\f\v");
    return std::string(s.substr(first, last - first + 1));
}

} // namespace

TokenLogprobs::TokenLogprobs(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::EmptyGeneration, "generation has no tokens");
    for (double v : values_) {
        if (!std::isfinite(v) || v > kLogprobSlack) {
            throw Error(ErrorCode::InvalidLikelihood,
                        "token log-probabilities must be finite and <= 0");
        }
    }
}

double nll(std::span<const double> logprobs) {
    if (logprobs.empty()) throw Error(ErrorCode::EmptyGeneration, "generation has no tokens");
    double s = 0.0;
    for (double v : logprobs) s += v;
    return -s;
}

double anll(std::span<const double> logprobs) {
    return nll(logprobs) / static_cast<double>(logprobs.size());
}

std::string ExtractedAnswer::bucket() const {
    if (unanswerable) return std::string("\0unanswerable", 13);
    return canonical;
}

ExtractionMode parse_extraction_mode(std::string_view name) {
    if (name == "last_number") return ExtractionMode::last_number();
    if (name == "normalized_full" || name == "normalized") return ExtractionMode::normalized_full();
    if (name.starts_with("regex:")) {
        std::string pattern(name.substr(6));
        try {
            std::regex probe(pattern);
        } catch (const std::regex_error& e) {
            throw Error(ErrorCode::Config, "invalid extraction regex '" + pattern + "': " + e.what());
        }
        return ExtractionMode::regex(std::move(pattern));
    }
    throw Error(ErrorCode::Config, "unknown extraction mode '" + std::string(name) + "'");
}

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::ispunct(c)) continue;
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string canonical_number(std::string_view literal) {
    std::string digits;
    bool negative = false;
    for (char c : literal) {
        if (c == ',' || c == '+') continue;
        if (c == '-') {
            negative = true;
            continue;
        }
        digits.push_back(c);
    }
    std::string int_part = digits;
    std::string frac_part;
    if (const auto dot = digits.find('.'); dot != std::string::npos) {
        int_part = digits.substr(0, dot);
        frac_part = digits.substr(dot + 1);
    }
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
    const auto nz = int_part.find_first_not_of('0');
    int_part = nz == std::string::npos ? "0" : int_part.substr(nz);

    std::string out = int_part;
    if (!frac_part.empty()) out += "." + frac_part;
    if (negative && out != "0") out.insert(out.begin(), '-');
    return out;
}

ExtractedAnswer extract_answer(std::string_view text, const ExtractionMode& mode) {
    ExtractedAnswer ans;
    switch (mode.kind) {
    case ExtractionMode::Kind::LastNumber: {
        ans.kind = AnswerKind::Numeric;
        const std::string s(text);
        std::string last;
        for (auto it = std::sregex_iterator(s.begin(), s.end(), number_regex());
             it != std::sregex_iterator(); ++it) {
            last = it->str();
        }
        if (last.empty()) {
            ans.unanswerable = true;
        } else {
            ans.canonical = canonical_number(last);
        }
        break;
    }
    case ExtractionMode::Kind::NormalizedFull:
        ans.canonical = normalize_text(text);
        ans.unanswerable = ans.canonical.empty();
        break;
    case ExtractionMode::Kind::Regex: {
        const std::regex re(mode.pattern);
        const std::string s(text);
        std::smatch m;
        if (std::regex_search(s, m, re)) {
            ans.canonical = trim(m.size() > 1 ? m[1].str() : m[0].str());
        }
        ans.unanswerable = ans.canonical.empty();
        break;
    }
    }
    return ans;
}

double self_consistency(std::span<const ExtractedAnswer> answers) {
    if (answers.empty()) throw Error(ErrorCode::InvalidArgument, "no answers to vote over");
    std::unordered_map<std::string, std::size_t> counts;
    std::size_t best = 0;
    for (const auto& a : answers) best = std::max(best, ++counts[a.bucket()]);
    return 1.0 - static_cast<double>(best) / static_cast<double>(answers.size());
}

std::vector<double> self_consistency_per_sample(std::span<const ExtractedAnswer> answers) {
    if (answers.empty()) throw Error(ErrorCode::InvalidArgument, "no answers to vote over");
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& a : answers) ++counts[a.bucket()];
    std::vector<double> out;
    out.reserve(answers.size());
    const auto n = static_cast<double>(answers.size());
    for (const auto& a : answers) out.push_back(1.0 - static_cast<double>(counts[a.bucket()]) / n);
    return out;
}

} // namespace rdskit
