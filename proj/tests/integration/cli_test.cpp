#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sstream>

#include <sys/wait.h>

#include "hackforge/cli.hpp"
#include "hackforge/error.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
namespace hf = hackforge;
using nlohmann::json;
using hf::testing::TempDir;

namespace {

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args, const fs::path& workspace = {}) {
    std::vector<std::string> full{"hackforge"};
    if (!workspace.empty()) full.insert(full.end(), {"--workspace", workspace.string()});
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int status = hf::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

// The real binary, for exit codes and stdout as a shell sees them.
CliResult spawn(const std::string& args) {
    std::string cmd = std::string(HACKFORGE_CLI_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    CliResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = ::pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<json> run_records(const fs::path& workspace) {
    std::vector<json> out;
    for (const auto& e : fs::directory_iterator(workspace / "runs"))
        if (e.path().extension() == ".json" && e.path().string().find(".transcript.") == std::string::npos)
            out.push_back(json::parse(hf::read_file(e.path())));
    return out;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli({}).status, 2);
    EXPECT_EQ(cli({"frobnicate"}).status, 2);
    EXPECT_EQ(cli({"judge", "x"}).status, 2) << "--submission is required";
    EXPECT_EQ(cli({"metrics", "x", "--suite", "hidden"}).status, 2);
    EXPECT_EQ(cli({"--help"}).status, 0);
}

TEST(Cli, JudgeReportsVerdictAndWritesReport) {
    TempDir tmp;
    auto pkg = hf::testing::copy_package("maxelem", tmp);
    auto r = cli({"judge", pkg.string(), "--submission", "skip_first"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "skip_first on local suite (4 tests): WA on test 2")) << r.out;
    auto report = json::parse(hf::read_file(pkg / "reports" / "judge-skip_first-local.json"));
    EXPECT_EQ(report["verdict"]["kind"], "WA");

    auto std_run = cli({"judge", pkg.string(), "--submission", "std"});
    EXPECT_EQ(std_run.status, 0);
    EXPECT_TRUE(contains(std_run.out, ": AC")) << std_run.out;
}

TEST(Cli, DomainErrorsExitOne) {
    TempDir tmp;
    auto pkg = hf::testing::copy_package("maxelem", tmp);
    auto missing = cli({"judge", pkg.string(), "--submission", "ghost"});
    EXPECT_EQ(missing.status, 1);
    EXPECT_TRUE(contains(missing.err, "DANGLING_REFERENCE")) << missing.err;
    EXPECT_EQ(cli({"judge", pkg.string(), "--submission", "sorted", "--suite", "official"}).status, 1);
    EXPECT_EQ(cli({"judge", (tmp.path() / "nowhere").string(), "--submission", "sorted"}).status, 1);
    auto transcript = cli({"hack", pkg.string(), "--provider", "scripted:" + (tmp.path() / "missing.json").string()});
    EXPECT_EQ(transcript.status, 1);
    EXPECT_TRUE(contains(transcript.err, "TRANSCRIPT_IO")) << transcript.err;
}

TEST(Cli, ConfigErrorsAreUsageErrors) {
    TempDir ws;
    hf::write_file(ws.path() / "hackforge.json", R"({"K": 3, "colour": "blue"})");
    auto r = cli({"antihash", "--spec", "whatever.json"}, ws.path());
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(contains(r.err, "colour")) << r.err;
    hf::write_file(ws.path() / "hackforge.json", R"({"K": "three"})");
    EXPECT_EQ(cli({"antihash", "--spec", "whatever.json"}, ws.path()).status, 2);
    EXPECT_EQ(cli({"hack", "x", "-T", "0"}, ws.path()).status, 2);
}

TEST(Cli, BusyWorkspaceIsRefused) {
    TempDir ws;
    hf::WorkspaceLock held(ws.path());
    auto r = cli({"antihash", "--spec", "x.json"}, ws.path());
    EXPECT_EQ(r.status, 1);
    EXPECT_TRUE(contains(r.err, "WORKSPACE_BUSY")) << r.err;
    EXPECT_FALSE(fs::exists(ws.path() / "runs")) << "no run record for a refused command";
}

TEST(Cli, AntihashPrintsCollidingPair) {
    TempDir ws;
    auto spec = ws.path() / "spec.json";
    hf::write_file(spec, R"({"bases": ["31"], "moduli": ["1000000007"], "charset": ["a", "z"], "offset": 1, "orientation": "low_first"})");
    auto r = cli({"antihash", "--spec", spec.string()}, ws.path());
    ASSERT_EQ(r.status, 0) << r.err;
    std::istringstream lines(r.out);
    std::string a, b;
    std::getline(lines, a);
    std::getline(lines, b);
    EXPECT_EQ(a.size(), b.size());
    EXPECT_NE(a, b);
    // Independent check: low-first polynomial hash with chars mapped c - 96.
    auto h = [](const std::string& s) {
        unsigned long long v = 0, p = 1;
        for (char c : s) {
            v = (v + (c - 96) * p) % 1000000007ULL;
            p = p * 31 % 1000000007ULL;
        }
        return v;
    };
    EXPECT_EQ(h(a), h(b));

    auto records = run_records(ws.path());
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0]["command"], "antihash");
    EXPECT_EQ(records[0]["exit_status"], 0);
    EXPECT_EQ(records[0]["result"]["a"], a);

    hf::write_file(spec, "{not json");
    EXPECT_EQ(cli({"antihash", "--spec", spec.string()}, ws.path()).status, 1);
}

TEST(Cli, CalibrateWritesRefinedTools) {
    TempDir tmp;
    auto pkg = hf::testing::copy_package("cf309c", tmp);
    auto r = cli({"calibrate", pkg.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "validator: CLEAN_STREAK after 4 iterations, 1 fixes")) << r.out;
    EXPECT_TRUE(contains(r.out, "checker: NOT_APPLICABLE")) << r.out;
    EXPECT_TRUE(fs::exists(pkg / "calibration" / "refined_validator.cpp"));
    auto log = json::parse(hf::read_file(pkg / "calibration" / "validator.log.json"));
    EXPECT_EQ(log["terminated_by"], "CLEAN_STREAK");

    // The refined validator is picked up on the next load.
    auto loaded = hf::load_package(pkg);
    ASSERT_TRUE(loaded.refined_validator);
    EXPECT_EQ(hf::sha256_hex(loaded.refined_validator->source), log["final_sha256"]);

    TempDir frozen_tmp;
    auto frozen = hf::testing::copy_package("cf25b", frozen_tmp);
    auto f = cli({"calibrate", frozen.string()});
    ASSERT_EQ(f.status, 0) << f.err;
    EXPECT_TRUE(contains(f.out, "validator: frozen, left unchanged")) << f.out;
    EXPECT_TRUE(contains(f.out, "checker: CLEAN_STREAK after 4 iterations, 1 fixes")) << f.out;
    EXPECT_FALSE(fs::exists(frozen / "calibration" / "refined_validator.cpp"));
    EXPECT_TRUE(fs::exists(frozen / "calibration" / "refined_checker.cpp"));
}

TEST(Cli, HackAugmentMetricsPipeline) {
    TempDir tmp;
    auto pkg = hf::testing::copy_package("maxelem", tmp);
    auto h = cli({"hack", pkg.string()});
    ASSERT_EQ(h.status, 0) << h.err;
    EXPECT_TRUE(contains(h.out, "target skip_last: hacked at STRESS stage")) << h.out;
    EXPECT_TRUE(contains(h.out, "HSR 1/1 (1.00)")) << h.out;
    EXPECT_TRUE(fs::exists(pkg / "hacks" / "skip_last" / "1.in"));
    EXPECT_TRUE(fs::exists(pkg / "hacks" / "summary.json"));
    auto cascade = json::parse(hf::read_file(pkg / "hacks" / "skip_last" / "cascade.json"));
    EXPECT_EQ(cascade["winning_stage"], "STRESS");

    auto a = cli({"augment", pkg.string()});
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_TRUE(contains(a.out, "dropped 003.in")) << a.out;
    EXPECT_TRUE(contains(a.out, "augmented suite: 4 tests (1 added, 1 dropped)")) << a.out;

    auto m = cli({"metrics", pkg.string(), "--suite", "augmented"});
    ASSERT_EQ(m.status, 0) << m.err;
    EXPECT_TRUE(contains(m.out, "TPR 1/1 (1.00)")) << m.out;
    EXPECT_TRUE(contains(m.out, "TNR 3/3 (1.00)")) << m.out;
    EXPECT_TRUE(contains(m.out, "VPR 4/4 (1.00)")) << m.out;

    auto local = cli({"metrics", pkg.string()});
    EXPECT_TRUE(contains(local.out, "TNR 2/3 (0.67)")) << local.out;
    EXPECT_TRUE(contains(local.out, "VPR 3/4 (0.75)")) << local.out;
    auto report = json::parse(hf::read_file(pkg / "reports" / "metrics-local.json"));
    EXPECT_EQ(report["tnr"]["numerator"], 2);
}

TEST(Cli, ProviderStageIsReproducible) {
    TempDir a_tmp, b_tmp;
    auto a = hf::testing::copy_package("cf1388a", a_tmp);
    auto b = hf::testing::copy_package("cf1388a", b_tmp);
    auto ra = cli({"hack", a.string(), "--target", "greedy_fixed"});
    auto rb = cli({"hack", b.string(), "--target", "greedy_fixed"});
    ASSERT_EQ(ra.status, 0) << ra.err;
    EXPECT_TRUE(contains(ra.out, "hacked at PROVIDER stage, turns_used 1")) << ra.out;
    EXPECT_EQ(hf::read_file(a / "hacks" / "greedy_fixed" / "1.in"), "1\n36\n");
    EXPECT_EQ(hf::read_file(a / "hacks" / "greedy_fixed" / "1.in"), hf::read_file(b / "hacks" / "greedy_fixed" / "1.in"));
    EXPECT_EQ(hf::read_file(a / "hacks" / "greedy_fixed" / "cascade.json"),
              hf::read_file(b / "hacks" / "greedy_fixed" / "cascade.json"));
}

TEST(Cli, RunRecordsCaptureFailures) {
    TempDir ws;
    cli({"antihash", "--spec", (ws.path() / "absent.json").string()}, ws.path());
    auto records = run_records(ws.path());
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0]["exit_status"], 1);
    EXPECT_EQ(records[0]["error"]["code"], "IO");
    EXPECT_TRUE(records[0].contains("started_at"));
    EXPECT_TRUE(records[0].contains("config"));
}

TEST(Binary, ExitCodesAndOutput) {
    TempDir tmp;
    auto pkg = hf::testing::copy_package("maxelem", tmp);
    auto ok = spawn("judge " + pkg.string() + " --submission sorted");
    EXPECT_EQ(ok.status, 0);
    EXPECT_TRUE(contains(ok.out, "sorted on local suite (4 tests): AC")) << ok.out;
    EXPECT_EQ(spawn("judge " + pkg.string() + " --submission ghost").status, 1);
    EXPECT_EQ(spawn("no-such-command").status, 2);
}
