#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "core/log.hpp"
#include "pipeline/common.hpp"

namespace rdskit {

using detail::add_diagnostic;

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json slice_json(const SliceStats& s, const std::vector<std::string>& methods, bool best_of_n) {
    Json j;
    j["n_prompts"] = s.n_prompts;
    j["n_correct"] = s.n_correct;
    Json metric = Json::object();
    Json counts = Json::object();
    const auto& values = best_of_n ? s.best_of_n_accuracy : s.auroc;
    for (const auto& m : methods) {
        const auto it = values.find(m);
        metric[m] = it == values.end() ? Json(nullptr) : optional_number(it->second);
        const auto n = s.n.find(m);
        counts[m] = n == s.n.end() ? 0 : n->second;
    }
    j[best_of_n ? "best_of_n_accuracy" : "auroc"] = std::move(metric);
    j["n"] = std::move(counts);
    return j;
}

bool is_best_of_n(const EvalReport& r) { return !r.all.best_of_n_accuracy.empty(); }

std::vector<std::string> select_methods(const RunOptions& opts, const std::vector<std::string>& allowed) {
    if (opts.methods.empty()) return allowed;
    for (const auto& m : opts.methods) {
        if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw Error(ErrorCode::Config, fmt::format("unknown method '{}' (expected one of: {})", m, list));
        }
    }
    return opts.methods;
}

std::filesystem::path csv_path(const std::filesystem::path& json_path) {
    auto p = json_path;
    if (p.extension() == ".json") return p.replace_extension(".csv");
    p += ".csv";
    return p;
}

void write_report(const RunOptions& opts, const EvalReport& report) {
    if (detail::is_stdout(opts.output)) {
        std::cout << to_json(report).dump(2) << '\n';
        return;
    }
    const auto csv = csv_path(opts.output);
    detail::check_output(csv, opts.force);
    detail::Output json_out(opts.output, opts.force);
    json_out.stream() << to_json(report).dump(2) << '\n';
    json_out.close();
    detail::Output csv_out(csv, opts.force);
    csv_out.stream() << to_csv(report);
    csv_out.close();
}

std::optional<double> prompt_score(const ScoreRow& row, const std::string& method) {
    if (method == "rds") return row.scores.rds;
    if (method == "rds_l2") return row.scores.rds_l2;
    if (method == "rds_w") return row.scores.rds_w;
    if (method == "eigen_embed") return row.scores.eigen_embed;
    if (method == "anll") return row.anll;
    if (method == "nll") return row.nll;
    if (method == "sc") return row.self_consistency;
    return std::nullopt;
}

} // namespace

Json to_json(const EvalReport& report) {
    const bool bon = is_best_of_n(report);
    Json j;
    j["kind"] = bon ? "best_of_n" : "hallucination_detection";
    j["methods"] = report.methods;
    auto all = slice_json(report.all, report.methods, bon);
    for (auto& [k, v] : all.items()) j[k] = v;
    Json slices = Json::object();
    for (const auto& [tag, s] : report.slices) slices[tag] = slice_json(s, report.methods, bon);
    j["slices"] = std::move(slices);
    j["rows"] = report.rows;
    return j;
}

std::string to_csv(const EvalReport& report) {
    const bool bon = is_best_of_n(report);
    const char* metric = bon ? "best_of_n_accuracy" : "auroc";
    std::ostringstream out;
    out << "method,metric,value,n\n";
    auto emit = [&](const std::string& slice, const SliceStats& s) {
        const auto& values = bon ? s.best_of_n_accuracy : s.auroc;
        for (const auto& m : report.methods) {
            const auto it = values.find(m);
            const auto n = s.n.find(m);
            const bool defined = it != values.end() && it->second;
            out << m << ',' << metric << ':' << slice << ','
                << (defined ? fmt::format("{}", *it->second) : std::string("undefined")) << ','
                << (n == s.n.end() ? 0 : n->second) << '\n';
        }
    };
    emit("all", report.all);
    for (const auto& [tag, s] : report.slices) emit(tag, s);
    return out.str();
}

RunSummary cmd_evaluate(const RunOptions& opts, EvalReport* report_out) {
    RunSummary summary;
    const auto methods = select_methods(opts, kPromptMethods);
    detail::check_output(opts.output, opts.force);
    auto records = detail::load_records(opts, summary);

    std::unordered_map<std::string, ScoreRow> joined;
    if (!opts.scores.empty()) {
        for (auto& row : read_score_rows(opts.scores)) joined.emplace(row.id, std::move(row));
    } else {
        detail::embed_missing(records, opts, summary);
    }

    struct Item {
        std::size_t record;
        ScoreRow row;
        bool correct;
    };
    std::vector<std::optional<Item>> items(records.size());
    std::vector<std::string> errors(records.size());
    detail::parallel_for(records.size(), opts.workers, [&](std::size_t i) {
        const auto& r = records[i];
        try {
            if (r.references.empty()) throw Error(ErrorCode::InvalidArgument, "no reference answers");
            ScoreRow row;
            if (!opts.scores.empty()) {
                const auto it = joined.find(r.id);
                if (it == joined.end()) throw Error(ErrorCode::InvalidArgument, "no score row with this id");
                row = it->second;
            } else {
                const auto kind = opts.correctness.value_or(r.correctness_mode);
                row = score_record(r, extraction_for(opts, kind));
            }
            const bool correct = label_correct(r.greedy.text, r.references, detail::correctness_of(opts, r));
            items[i] = Item{i, std::move(row), correct};
        } catch (const Error& e) {
            if (opts.strict) throw Error(e.code(), "record " + r.id + ": " + e.what());
            errors[i] = e.what();
        }
    });

    EvalReport report;
    report.methods = methods;
    std::map<std::string, std::map<std::string, std::vector<LabeledScore>>> by_slice;  // slice -> method -> items
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!items[i]) {
            ++summary.skipped;
            add_diagnostic(summary, {0, r.id, "skipped: " + errors[i]});
            continue;
        }
        const auto& it = *items[i];
        ++summary.scored;
        for (auto* s : {&report.all, &report.slices[r.dataset_tag]}) {
            ++s->n_prompts;
            if (it.correct) ++s->n_correct;
        }
        Json row;
        row["id"] = r.id;
        row["dataset_tag"] = r.dataset_tag;
        row["correct"] = it.correct;
        Json scores = Json::object();
        for (const auto& m : methods) {
            const auto v = prompt_score(it.row, m);
            scores[m] = optional_number(v);
            if (v) {
                by_slice["\x01all"][m].push_back({*v, it.correct});
                by_slice[r.dataset_tag][m].push_back({*v, it.correct});
            }
        }
        row["scores"] = std::move(scores);
        report.rows.push_back(std::move(row));
    }

    auto fill = [&](SliceStats& s, const std::string& key) {
        for (const auto& m : methods) {
            const auto& v = by_slice[key][m];
            s.auroc[m] = auroc(v);
            s.n[m] = v.size();
        }
    };
    fill(report.all, "\x01all");
    for (auto& [tag, s] : report.slices) fill(s, tag);
    for (const auto& m : methods) {
        if (!report.all.auroc[m]) log::warn(fmt::format("AUROC for {} is undefined (needs both correct and incorrect items)", m));
    }

    write_report(opts, report);
    if (report_out) *report_out = std::move(report);
    return summary;
}

RunSummary cmd_bestofn(const RunOptions& opts, EvalReport* report_out) {
    RunSummary summary;
    const auto methods = select_methods(opts, kSampleMethods);
    detail::check_output(opts.output, opts.force);
    auto records = detail::load_records(opts, summary);
    for (const auto& r : records) {
        if (r.references.empty()) {
            throw Error(ErrorCode::InvalidArgument, "record " + r.id + " has no reference answers; best-of-N needs them");
        }
    }
    const bool need_embeddings = std::any_of(methods.begin(), methods.end(),
                                             [](const std::string& m) { return m == "rds_s" || m == "rds_w_s"; });
    if (need_embeddings) detail::embed_missing(records, opts, summary);

    struct Item {
        std::vector<bool> correct;
        std::map<std::string, std::optional<std::vector<double>>> scores;
    };
    std::vector<std::optional<Item>> items(records.size());
    std::vector<std::string> errors(records.size());
    detail::parallel_for(records.size(), opts.workers, [&](std::size_t i) {
        const auto& r = records[i];
        try {
            const auto n = r.samples.size();
            if (n == 0) throw Error(ErrorCode::InvalidArgument, "record has no samples");
            const auto mode = detail::correctness_of(opts, r);
            Item it;
            for (const auto& s : r.samples) it.correct.push_back(label_correct(s.text, r.references, mode));

            bool all_logprobs = true;
            std::vector<double> anlls, nlls;
            for (const auto& s : r.samples) {
                if (!s.token_logprobs || s.token_logprobs->empty()) {
                    all_logprobs = false;
                    break;
                }
                anlls.push_back(anll(*s.token_logprobs));
                nlls.push_back(nll(*s.token_logprobs));
            }
            std::optional<EmbeddingSet> set;
            if (need_embeddings && n >= 2) {
                std::vector<std::vector<double>> rows;
                for (const auto& s : r.samples) rows.push_back(*s.embedding);
                set = EmbeddingSet::from_rows(rows);
            }
            for (const auto& m : methods) {
                std::optional<std::vector<double>> v;
                if (n == 1) {
                    // A single sample is selected whatever its score.
                    v = std::vector<double>{0.0};
                } else if (m == "rds_s") {
                    v = rds_per_sample(*set);
                } else if (m == "rds_w_s") {
                    if (all_logprobs) v = rds_w_per_sample(*set, probs_from_anll(anlls));
                } else if (m == "anll") {
                    if (all_logprobs) v = anlls;
                } else if (m == "nll") {
                    if (all_logprobs) v = nlls;
                } else if (m == "sc") {
                    std::vector<ExtractedAnswer> answers;
                    const auto ex = extraction_for(opts, opts.correctness.value_or(r.correctness_mode));
                    for (const auto& s : r.samples) answers.push_back(extract_answer(s.text, ex));
                    v = self_consistency_per_sample(answers);
                }
                it.scores[m] = std::move(v);
            }
            items[i] = std::move(it);
        } catch (const Error& e) {
            if (opts.strict) throw Error(e.code(), "record " + r.id + ": " + e.what());
            errors[i] = e.what();
        }
    });

    EvalReport report;
    report.methods = methods;
    std::map<std::string, std::map<std::string, std::vector<BestOfNRecord>>> by_slice;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!items[i]) {
            ++summary.skipped;
            add_diagnostic(summary, {0, r.id, "skipped: " + errors[i]});
            continue;
        }
        const auto& it = *items[i];
        ++summary.scored;
        const bool any_correct = std::find(it.correct.begin(), it.correct.end(), true) != it.correct.end();
        for (auto* s : {&report.all, &report.slices[r.dataset_tag]}) {
            ++s->n_prompts;
            if (any_correct) ++s->n_correct;
        }
        Json row;
        row["id"] = r.id;
        row["dataset_tag"] = r.dataset_tag;
        row["sample_correct"] = it.correct;
        Json selected = Json::object();
        for (const auto& m : methods) {
            const auto& v = it.scores.at(m);
            if (!v) {
                selected[m] = nullptr;
                continue;
            }
            const auto pick = best_of_n_select(*v);
            selected[m] = Json{{"index", pick}, {"correct", static_cast<bool>(it.correct[pick])}};
            by_slice["\x01all"][m].push_back({*v, it.correct});
            by_slice[r.dataset_tag][m].push_back({*v, it.correct});
        }
        row["selected"] = std::move(selected);
        report.rows.push_back(std::move(row));
    }

    auto fill = [&](SliceStats& s, const std::string& key) {
        for (const auto& m : methods) {
            const auto& v = by_slice[key][m];
            s.best_of_n_accuracy[m] = best_of_n_accuracy(v);
            s.n[m] = v.size();
        }
    };
    fill(report.all, "\x01all");
    for (auto& [tag, s] : report.slices) fill(s, tag);

    write_report(opts, report);
    if (report_out) *report_out = std::move(report);
    return summary;
}

} // namespace rdskit
