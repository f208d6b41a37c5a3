#include "pipeline/pipeline.hpp"

#include <fmt/format.h>

#include "core/baselines.hpp"
#include "core/log.hpp"
#include "dataio/sidecar.hpp"
#include "pipeline/common.hpp"

namespace rdskit {

using detail::add_diagnostic;

ExtractionMode extraction_for(const RunOptions& opts, CorrectnessKind kind) {
    if (!opts.extract.empty()) return parse_extraction_mode(opts.extract);
    return kind == CorrectnessKind::ExactMatch ? ExtractionMode::last_number() : ExtractionMode::normalized_full();
}

ScoreRow score_record(const PromptRecord& record, const ExtractionMode& extraction, std::size_t* renormalized) {
    if (record.samples.size() < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("needs at least 2 samples for dispersion scoring, has {}", record.samples.size()));
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(record.samples.size());
    bool all_logprobs = true;
    std::vector<double> anlls;
    for (const auto& s : record.samples) {
        if (!s.embedding) throw Error(ErrorCode::InvalidArgument, "a sample has no embedding");
        rows.push_back(*s.embedding);
        if (s.token_logprobs && !s.token_logprobs->empty()) {
            anlls.push_back(anll(*s.token_logprobs));
        } else {
            all_logprobs = false;
        }
    }
    const auto set = EmbeddingSet::from_rows(rows, renormalized);

    ScoreRow row;
    row.id = record.id;
    if (all_logprobs) {
        const auto p = probs_from_anll(anlls);
        row.scores = score_set(set, &p);
    } else {
        row.scores = score_set(set);
    }
    if (record.greedy.token_logprobs && !record.greedy.token_logprobs->empty()) {
        row.anll = anll(*record.greedy.token_logprobs);
        row.nll = nll(*record.greedy.token_logprobs);
    }
    std::vector<ExtractedAnswer> answers;
    answers.reserve(record.samples.size());
    for (const auto& s : record.samples) answers.push_back(extract_answer(s.text, extraction));
    row.self_consistency = self_consistency(answers);
    return row;
}

RunSummary cmd_score(const RunOptions& opts) {
    RunSummary summary;
    detail::check_output(opts.output, opts.force);
    auto records = detail::load_records(opts, summary);
    detail::embed_missing(records, opts, summary);

    std::vector<std::optional<ScoreRow>> rows(records.size());
    std::vector<std::string> errors(records.size());
    std::vector<std::size_t> renorm(records.size(), 0);
    detail::parallel_for(records.size(), opts.workers, [&](std::size_t i) {
        const auto& r = records[i];
        try {
            rows[i] = score_record(r, extraction_for(opts, opts.correctness.value_or(r.correctness_mode)), &renorm[i]);
        } catch (const Error& e) {
            if (opts.strict) throw Error(e.code(), "record " + r.id + ": " + e.what());
            errors[i] = e.what();
        }
    });

    detail::Output out(opts.output, opts.force);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (renorm[i]) log::warn(fmt::format("record {}: renormalized {} embeddings to unit length", records[i].id, renorm[i]));
        if (!rows[i]) {
            ++summary.skipped;
            add_diagnostic(summary, {0, records[i].id, "skipped: " + errors[i]});
            continue;
        }
        if (!rows[i]->scores.rds_w) ++summary.rds_w_missing;
        out.stream() << dump_line(to_json(*rows[i])) << '\n';
        ++summary.scored;
    }
    out.close();
    if (summary.rds_w_missing) {
        log::info(fmt::format("{} records lack token log-probabilities; rds_w is null for them", summary.rds_w_missing));
    }
    return summary;
}

RunSummary cmd_embed(const RunOptions& opts) {
    RunSummary summary;
    detail::check_output(opts.output, opts.force);
    if (!opts.sidecar_out.empty()) detail::check_output(opts.sidecar_out, opts.force);
    auto records = detail::load_records(opts, summary);
    detail::embed_missing(records, opts, summary);

    detail::Output out(opts.output, opts.force);
    write_records(out.stream(), records);
    out.close();
    if (!opts.sidecar_out.empty()) write_sidecar(opts.sidecar_out, sidecar_from_records(records));
    summary.scored = records.size();
    return summary;
}

RunSummary cmd_sample(const RunOptions& opts) {
    RunSummary summary;
    detail::check_output(opts.output, opts.force);
    if (opts.llm.base_url.empty() && !opts.llm_transport) {
        throw Error(ErrorCode::Config, "no generation endpoint configured; set RDSKIT_LLM_URL or pass --llm-url");
    }
    opts.sampling.validate();
    auto records = detail::load_records(opts, summary, /*prompts_only=*/true);

    auto cfg = opts.llm;
    if (cfg.base_url.empty()) cfg.base_url = "http://localhost";
    auto transport = opts.llm_transport ? opts.llm_transport : make_http_transport(cfg.base_url, cfg.timeout);
    SamplingClient client(cfg, transport);

    std::vector<std::string> errors(records.size());
    std::vector<bool> ok(records.size(), false);
    detail::parallel_for(records.size(), opts.workers, [&](std::size_t i) {
        auto& r = records[i];
        try {
            r.greedy = client.greedy(r.prompt, opts.sampling.max_tokens, opts.sampling.want_logprobs);
            try {
                r.samples = client.sample_generations(opts.sampling, r.prompt);
            } catch (PartialBatchError& e) {
                if (opts.strict) throw;
                errors[i] = e.what();
                r.samples = std::move(e.samples);
            }
            ok[i] = true;
        } catch (const Error& e) {
            if (opts.strict || e.code() == ErrorCode::Auth) throw Error(e.code(), "record " + r.id + ": " + e.what());
            errors[i] = e.what();
        }
    });

    detail::Output out(opts.output, opts.force);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!ok[i]) {
            ++summary.skipped;
            add_diagnostic(summary, {0, records[i].id, "skipped: " + errors[i]});
            continue;
        }
        if (!errors[i].empty()) add_diagnostic(summary, {0, records[i].id, "kept partial batch: " + errors[i]});
        out.stream() << dump_line(to_json(records[i])) << '\n';
        ++summary.scored;
    }
    out.close();
    summary.network_calls = client.network_calls();
    return summary;
}

RunSummary cmd_simulate(const RunOptions& opts) {
    RunSummary summary;
    std::vector<RegimeConfig> configs;
    for (auto regime : opts.regimes) {
        for (double noise : opts.sim_noise) {
            for (std::size_t s = 0; s < std::max<std::size_t>(opts.sim_seeds, 1); ++s) {
                RegimeConfig c;
                c.regime = regime;
                c.n = opts.sim_n;
                c.dim = opts.sim_dim;
                c.noise = noise;
                c.clusters = opts.sim_clusters;
                c.seed = opts.seed + s;
                configs.push_back(c);
            }
        }
    }
    for (const auto& c : configs) validate(c);
    const auto rows = sweep(configs);
    detail::Output out(opts.output, opts.force);
    write_sweep_csv(out.stream(), rows);
    out.close();
    summary.records_read = configs.size();
    summary.scored = rows.size();
    return summary;
}

} // namespace rdskit
