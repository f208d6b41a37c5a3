// Runs the rdskit executable end to end.
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "temp_dir.hpp"

namespace {

struct Result {
    int exit_code;
    std::string output;  // stdout and stderr
};

Result run(const std::string& args) {
    const std::string cmd = std::string(RDSKIT_CLI_PATH) + " " + args + " 2>&1";
    Result r{-1, {}};
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    while (auto n = std::fread(buf.data(), 1, buf.size(), p)) r.output.append(buf.data(), n);
    const int status = ::pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(RDSKIT_TEST_DATA_DIR) + "/" + name; }

} // namespace

TEST_CASE("help and version") {
    const auto h = run("--help");
    CHECK(h.exit_code == 0);
    for (const char* sub : {"score", "evaluate", "bestofn", "embed", "sample", "simulate"})
        CHECK(h.output.find(sub) != std::string::npos);
    const auto sh = run("score --help");
    for (const char* flag : {"--input", "--output", "--methods", "--correctness", "--rouge-threshold", "--strict",
                             "--force", "--seed", "--workers"})
        CHECK(sh.output.find(flag) != std::string::npos);
    const auto samp = run("sample --help");
    CHECK(samp.output.find("--n-samples") != std::string::npos);
    CHECK(samp.output.find("--temperature") != std::string::npos);
    CHECK(run("--version").output.find("0.1.0") != std::string::npos);
    CHECK(run("").exit_code != 0);
    CHECK(run("score --correctness fuzzy").exit_code != 0);
}

TEST_CASE("score prints the summary line and refuses to overwrite") {
    TempDir tmp;
    const auto out = (tmp / "s.jsonl").string();
    const auto r = run("score --input " + data("detect_separable.jsonl") + " --output " + out +
                       " --cache-dir " + (tmp / "c").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("records read 10, scored 10, skipped 0, network calls 0") != std::string::npos);

    const auto again = run("score --input " + data("detect_separable.jsonl") + " --output " + out);
    CHECK(again.exit_code != 0);
    CHECK(again.output.find("OutputExists") != std::string::npos);
    CHECK(run("score --force --input " + data("detect_separable.jsonl") + " --output " + out).exit_code == 0);
}

TEST_CASE("evaluate and bestofn from the bundled data") {
    TempDir tmp;
    const auto e = run("evaluate --input " + data("detect_separable.jsonl") + " --output " +
                       (tmp / "eval.json").string() + " --methods rds,rds_w --workers 2");
    CHECK(e.exit_code == 0);
    const auto csv = slurp(tmp / "eval.csv");
    CHECK(csv.find("rds,auroc:all,1,10") != std::string::npos);
    CHECK(csv.find("rds_w,auroc:all,1,10") != std::string::npos);

    const auto b = run("bestofn --input " + data("bestofn_8.jsonl") + " --output " + (tmp / "bon.json").string() +
                       " --correctness exact");
    CHECK(b.exit_code == 0);
    CHECK(slurp(tmp / "bon.csv").find("rds_s,best_of_n_accuracy:all,0.75,8") != std::string::npos);
}

TEST_CASE("lenient runs survive bad lines, strict runs do not") {
    TempDir tmp;
    spit(tmp / "in.jsonl", slurp(data("detect_separable.jsonl")) + "{broken\n");
    const auto lenient = run("score --input " + (tmp / "in.jsonl").string() + " --output " + (tmp / "a.jsonl").string());
    CHECK(lenient.exit_code == 0);
    CHECK(lenient.output.find("records read 11, scored 10, skipped 1") != std::string::npos);
    const auto strict =
        run("score --strict --input " + (tmp / "in.jsonl").string() + " --output " + (tmp / "b.jsonl").string());
    CHECK(strict.exit_code != 0);
    CHECK(strict.output.find("line 11") != std::string::npos);
}

TEST_CASE("simulate") {
    TempDir tmp;
    const auto r = run("simulate --seed 3 --noise 0,0.1 --output " + (tmp / "sim.csv").string());
    CHECK(r.exit_code == 0);
    const auto csv = slurp(tmp / "sim.csv");
    CHECK(csv.rfind("regime,n,dim,noise,clusters,seed,rds,rds_l2,eigen_embed,avg_cosine\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(run("simulate --regimes opposing --clusters 9 --output -").exit_code != 0);
}

TEST_CASE("missing endpoint is reported, not crashed on") {
    TempDir tmp;
    spit(tmp / "p.jsonl",
         R"({"v":1,"id":"p","prompt":"hi","references":["x"],"dataset_tag":"qa","correctness_mode":"rouge_gate"})" "\n");
    const auto r = run("sample --input " + (tmp / "p.jsonl").string() + " --output " + (tmp / "o.jsonl").string());
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("RDSKIT_LLM_URL") != std::string::npos);
}
