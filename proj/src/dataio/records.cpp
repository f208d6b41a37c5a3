#include "dataio/records.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "core/error.hpp"

namespace rdskit {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorCode::MalformedRecord, what);
}

const Json& require(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) malformed(std::string("missing field \"") + key + "\"");
    return *it;
}

std::string require_string(const Json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_string()) malformed(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<double> number_array(const Json& v, const std::string& what) {
    if (!v.is_array()) malformed(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) malformed(what + " must be an array of numbers");
        const double d = x.get<double>();
        if (!std::isfinite(d)) malformed(what + " contains a non-finite value");
        out.push_back(d);
    }
    return out;
}

GenerationSample sample_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) malformed(where + " must be an object");
    GenerationSample s;
    const auto text = j.find("text");
    if (text == j.end() || !text->is_string()) malformed(where + ".text must be a string");
    s.text = text->get<std::string>();
    if (const auto it = j.find("token_logprobs"); it != j.end() && !it->is_null()) {
        auto lp = number_array(*it, where + ".token_logprobs");
        for (double v : lp) {
            if (v > 1e-9) malformed(where + ".token_logprobs has a positive log-probability");
        }
        s.token_logprobs = std::move(lp);
    }
    if (const auto it = j.find("embedding"); it != j.end() && !it->is_null()) {
        auto e = number_array(*it, where + ".embedding");
        if (e.empty()) malformed(where + ".embedding is empty");
        s.embedding = std::move(e);
    }
    return s;
}

void check_embedding_dims(const PromptRecord& r) {
    std::optional<std::size_t> dim;
    auto check = [&](const GenerationSample& s, const std::string& where) {
        if (!s.embedding) return;
        if (dim && *dim != s.embedding->size()) {
            malformed(where + ".embedding has dimension " + std::to_string(s.embedding->size()) +
                      ", expected " + std::to_string(*dim));
        }
        dim = s.embedding->size();
    };
    for (std::size_t i = 0; i < r.samples.size(); ++i) check(r.samples[i], "samples[" + std::to_string(i) + "]");
    check(r.greedy, "greedy");
}

} // namespace

const char* to_string(CorrectnessKind k) noexcept {
    return k == CorrectnessKind::ExactMatch ? "exact_match" : "rouge_gate";
}

PromptRecord record_from_json(const Json& j, bool prompts_only) {
    if (!j.is_object()) malformed("line is not a JSON object");
    const auto v = j.find("v");
    if (v == j.end()) malformed("missing field \"v\"");
    if (!v->is_number_integer() || v->get<long long>() != kSchemaVersion) {
        throw Error(ErrorCode::SchemaVersionMismatch,
                    "schema version " + v->dump() + " is not supported (expected 1)");
    }

    PromptRecord r;
    r.id = require_string(j, "id");
    if (r.id.empty()) malformed("field \"id\" is empty");
    r.prompt = require_string(j, "prompt");
    r.dataset_tag = require_string(j, "dataset_tag");

    const auto mode = require_string(j, "correctness_mode");
    if (mode == "exact_match") {
        r.correctness_mode = CorrectnessKind::ExactMatch;
    } else if (mode == "rouge_gate") {
        r.correctness_mode = CorrectnessKind::RougeGate;
    } else {
        malformed("field \"correctness_mode\" must be \"exact_match\" or \"rouge_gate\"");
    }

    const auto& refs = require(j, "references");
    if (!refs.is_array()) malformed("field \"references\" must be an array of strings");
    for (const auto& ref : refs) {
        if (!ref.is_string()) malformed("field \"references\" must be an array of strings");
        r.references.push_back(ref.get<std::string>());
    }

    const bool has_greedy = j.contains("greedy");
    const bool has_samples = j.contains("samples");
    if (!prompts_only || has_greedy) {
        r.greedy = sample_from_json(require(j, "greedy"), "greedy");
    }
    if (!prompts_only || has_samples) {
        const auto& samples = require(j, "samples");
        if (!samples.is_array()) malformed("field \"samples\" must be an array");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            r.samples.push_back(sample_from_json(samples[i], "samples[" + std::to_string(i) + "]"));
        }
    }
    check_embedding_dims(r);
    return r;
}

Json to_json(const GenerationSample& s) {
    Json j;
    j["text"] = s.text;
    if (s.token_logprobs) j["token_logprobs"] = *s.token_logprobs;
    if (s.embedding) j["embedding"] = *s.embedding;
    return j;
}

Json to_json(const PromptRecord& r) {
    Json j;
    j["v"] = kSchemaVersion;
    j["id"] = r.id;
    j["prompt"] = r.prompt;
    j["greedy"] = to_json(r.greedy);
    Json samples = Json::array();
    for (const auto& s : r.samples) samples.push_back(to_json(s));
    j["samples"] = std::move(samples);
    j["references"] = r.references;
    j["dataset_tag"] = r.dataset_tag;
    j["correctness_mode"] = to_string(r.correctness_mode);
    return j;
}

std::string dump_line(const Json& j) {
    return j.dump(-1, ' ', false, Json::error_handler_t::strict);
}

struct RecordReader::Impl {
    std::ifstream in;
    std::unordered_set<std::string> seen;
};

RecordReader::RecordReader(const std::filesystem::path& path, ReadOptions options)
    : impl_(std::make_unique<Impl>()), options_(options) {
    impl_->in.open(path);
    if (!impl_->in) throw Error(ErrorCode::Io, "cannot open " + path.string());
}

RecordReader::~RecordReader() = default;

std::optional<PromptRecord> RecordReader::next() {
    std::string line;
    while (std::getline(impl_->in, line)) {
        ++line_no_;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string id_hint;
        try {
            const auto j = Json::parse(line);
            if (j.is_object()) {
                if (const auto it = j.find("id"); it != j.end() && it->is_string()) id_hint = it->get<std::string>();
            }
            auto rec = record_from_json(j, options_.prompts_only);
            if (!impl_->seen.insert(rec.id).second) {
                throw Error(ErrorCode::DuplicateId, "duplicate id \"" + rec.id + "\"");
            }
            return rec;
        } catch (const Json::parse_error& e) {
            const std::string msg = std::string("invalid JSON: ") + e.what();
            if (options_.strict) {
                throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no_) + ": " + msg);
            }
            diagnostics_.push_back({line_no_, id_hint, msg});
        } catch (const Error& e) {
            if (options_.strict || e.code() == ErrorCode::SchemaVersionMismatch) {
                throw Error(e.code(), "line " + std::to_string(line_no_) + ": " + e.what());
            }
            diagnostics_.push_back({line_no_, id_hint, e.what()});
        }
    }
    if (impl_->in.bad()) throw Error(ErrorCode::Io, "read error");
    return std::nullopt;
}

ReadResult read_records(const std::filesystem::path& path, ReadOptions options) {
    RecordReader reader(path, options);
    ReadResult out;
    while (auto r = reader.next()) out.records.push_back(std::move(*r));
    out.diagnostics = reader.diagnostics();
    out.lines = reader.lines_read();
    return out;
}

void write_records(std::ostream& out, const std::vector<PromptRecord>& records) {
    for (const auto& r : records) out << dump_line(to_json(r)) << '\n';
}

Json to_json(const ScoreRow& row) {
    Json j;
    j["id"] = row.id;
    j["rds"] = row.scores.rds;
    j["rds_l2"] = row.scores.rds_l2;
    j["rds_w"] = row.scores.rds_w ? Json(*row.scores.rds_w) : Json(nullptr);
    j["eigen_embed"] = row.scores.eigen_embed;
    j["per_sample"] = row.scores.per_sample;
    j["per_sample_w"] = row.scores.per_sample_w ? Json(*row.scores.per_sample_w) : Json(nullptr);
    j["anll"] = row.anll ? Json(*row.anll) : Json(nullptr);
    j["nll"] = row.nll ? Json(*row.nll) : Json(nullptr);
    j["self_consistency"] = row.self_consistency ? Json(*row.self_consistency) : Json(nullptr);
    return j;
}

ScoreRow score_row_from_json(const Json& j) {
    auto opt_number = [&](const char* key) -> std::optional<double> {
        const auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        if (!it->is_number()) malformed(std::string("field \"") + key + "\" must be a number or null");
        return it->get<double>();
    };
    auto number = [&](const char* key) {
        auto v = opt_number(key);
        if (!v) malformed(std::string("missing field \"") + key + "\"");
        return *v;
    };
    ScoreRow row;
    row.id = require_string(j, "id");
    row.scores.rds = number("rds");
    row.scores.rds_l2 = number("rds_l2");
    row.scores.rds_w = opt_number("rds_w");
    row.scores.eigen_embed = number("eigen_embed");
    row.scores.per_sample = number_array(require(j, "per_sample"), "per_sample");
    if (const auto it = j.find("per_sample_w"); it != j.end() && !it->is_null()) {
        row.scores.per_sample_w = number_array(*it, "per_sample_w");
    }
    row.anll = opt_number("anll");
    row.nll = opt_number("nll");
    row.self_consistency = opt_number("self_consistency");
    return row;
}

std::vector<ScoreRow> read_score_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::vector<ScoreRow> rows;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(score_row_from_json(Json::parse(line)));
        } catch (const Json::parse_error& e) {
            throw Error(ErrorCode::MalformedRecord, "score line " + std::to_string(n) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(e.code(), "score line " + std::to_string(n) + ": " + e.what());
        }
    }
    return rows;
}

CorrectnessMode correctness_for(CorrectnessKind kind, double rouge_threshold,
                                const ExtractionMode& extraction) {
    if (kind == CorrectnessKind::ExactMatch) return CorrectnessMode::exact_match(extraction);
    return CorrectnessMode::rouge_gate(rouge_threshold);
}

} // namespace rdskit
