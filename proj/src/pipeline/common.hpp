#pragma once

// Helpers shared by the pipeline translation units.

#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include "pipeline/pipeline.hpp"

namespace rdskit::detail {

/// Runs fn(i) for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Refuses to clobber an existing file unless `force`.
void check_output(const std::filesystem::path& path, bool force);

bool is_stdout(const std::filesystem::path& path);

/// Opened output stream: a file, or std::cout for "-"/empty.
class Output {
public:
    Output(const std::filesystem::path& path, bool force);
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close();

private:
    std::filesystem::path path_;
    std::unique_ptr<std::ofstream> file_;
};

/// Reads records, logs per-line diagnostics and counts them as skipped.
std::vector<PromptRecord> load_records(const RunOptions& opts, RunSummary& summary,
                                       bool prompts_only = false);

void add_diagnostic(RunSummary& summary, Diagnostic d);

/// Fills missing sample embeddings from the cache and, for misses, from the
/// embedding endpoint. Throws Config when embeddings are missing and no
/// endpoint is configured.
void embed_missing(std::vector<PromptRecord>& records, const RunOptions& opts, RunSummary& summary);

CorrectnessMode correctness_of(const RunOptions& opts, const PromptRecord& r);

} // namespace rdskit::detail
