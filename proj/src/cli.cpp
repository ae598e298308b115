#include "hackforge/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "hackforge/error.hpp"
#include "hackforge/metrics.hpp"
#include "hackforge/package.hpp"
#include "hackforge/report.hpp"

namespace hackforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) { throw Error(Errc::Usage, "hackforge.json: " + what); }

template <class T>
T field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j[key].get<T>();
    } catch (const json::exception&) {
        bad_config(std::string("field ") + key + " has the wrong type");
    }
}

Rational parse_delta(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (auto slash = s.find('/'); slash != std::string::npos) {
        try {
            return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
        } catch (const std::exception&) {
            bad_config("antihash.delta " + s);
        }
    }
    // Decimal literal as an exact fraction.
    auto dot = s.find('.');
    std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
    long long den = 1;
    if (dot != std::string::npos)
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    try {
        std::size_t used = 0;
        long long num = std::stoll(digits, &used);
        if (used != digits.size()) throw std::invalid_argument(s);
        return {num, den};
    } catch (const std::exception&) {
        bad_config("antihash.delta " + s);
    }
}

}  // namespace

WorkspaceConfig WorkspaceConfig::from_json(const json& j) {
    if (!j.is_object()) bad_config("top level must be an object");
    static const std::set<std::string> known = {"toolchains", "limits", "provider", "seed", "K", "max_iter",
                                                "trial_budget_T", "stress_iterations", "antihash"};
    for (const auto& [k, _] : j.items())
        if (!known.count(k)) bad_config("unknown key " + k);
    WorkspaceConfig c;
    if (j.contains("toolchains")) {
        if (!j["toolchains"].is_array()) bad_config("toolchains must be an array");
        for (const auto& t : j["toolchains"]) {
            ToolchainSpec spec{field<std::string>(t, "id", ""), field<std::string>(t, "compile", ""),
                               field<std::string>(t, "run", "{bin}"), field<std::string>(t, "extension", ".cpp")};
            try {
                spec.validate();
            } catch (const Error& e) {
                bad_config("toolchain " + spec.id + ": " + e.detail());
            }
            auto it = std::find_if(c.toolchains.begin(), c.toolchains.end(),
                                   [&](const ToolchainSpec& x) { return x.id == spec.id; });
            if (it != c.toolchains.end())
                *it = spec;
            else
                c.toolchains.push_back(spec);
        }
    }
    if (j.contains("limits")) {
        if (!j["limits"].is_object()) bad_config("limits must be an object");
        static const std::set<std::string> lk = {"time_limit_ms", "memory_limit_mib", "wall_clock_multiplier",
                                                 "output_limit_bytes"};
        for (const auto& [k, v] : j["limits"].items()) {
            if (!lk.count(k)) bad_config("unknown limits key " + k);
            if (!v.is_number()) bad_config("limits." + k + " must be a number");
        }
        c.limits = j["limits"];
    }
    if (j.contains("provider")) {
        const json& p = j["provider"];
        if (!p.is_string() && !p.is_object()) bad_config("provider must be a string or an object");
        c.provider = p;
    }
    c.seed = field<std::uint64_t>(j, "seed", c.seed);
    c.K = field<int>(j, "K", c.K);
    c.max_iter = field<int>(j, "max_iter", c.max_iter);
    c.trial_budget_T = field<int>(j, "trial_budget_T", c.trial_budget_T);
    c.stress_iterations = field<int>(j, "stress_iterations", c.stress_iterations);
    if (c.K < 1 || c.max_iter < 1 || c.trial_budget_T < 1 || c.stress_iterations < 0)
        bad_config("K, max_iter and trial_budget_T must be >= 1, stress_iterations >= 0");
    if (j.contains("antihash")) {
        const json& a = j["antihash"];
        if (!a.is_object()) bad_config("antihash must be an object");
        static const std::set<std::string> ak = {"delta", "lambda_log2", "L0", "L_max"};
        for (const auto& [k, _] : a.items())
            if (!ak.count(k)) bad_config("unknown antihash key " + k);
        if (a.contains("delta")) c.antihash.delta = parse_delta(a["delta"]);
        c.antihash.lambda_log2 = field<int>(a, "lambda_log2", c.antihash.lambda_log2);
        c.antihash.L0 = field<std::size_t>(a, "L0", c.antihash.L0);
        c.antihash.L_max = field<std::size_t>(a, "L_max", c.antihash.L_max);
        const Rational& d = c.antihash.delta;
        if (d.den <= 0 || 4 * d.num <= d.den || d.num > d.den) bad_config("antihash.delta must lie in (1/4, 1]");
        if (c.antihash.L_max < 2) bad_config("antihash.L_max must be >= 2");
    }
    c.antihash.seed = c.seed;
    return c;
}

WorkspaceConfig WorkspaceConfig::load(const fs::path& file) {
    if (!fs::exists(file)) return {};
    json j = json::parse(read_file(file), nullptr, false);
    if (j.is_discarded()) bad_config("not valid JSON");
    return from_json(j);
}

json WorkspaceConfig::to_json() const {
    json tcs = json::array();
    for (const auto& t : toolchains)
        tcs.push_back({{"id", t.id}, {"compile", t.compile_template}, {"run", t.run_template}, {"extension", t.source_extension}});
    return {{"toolchains", tcs},
            {"limits", limits},
            {"provider", provider},
            {"seed", seed},
            {"K", K},
            {"max_iter", max_iter},
            {"trial_budget_T", trial_budget_T},
            {"stress_iterations", stress_iterations},
            {"antihash",
             {{"delta", std::to_string(antihash.delta.num) + "/" + std::to_string(antihash.delta.den)},
              {"lambda_log2", antihash.lambda_log2},
              {"L0", antihash.L0},
              {"L_max", antihash.L_max}}}};
}

CampaignConfig WorkspaceConfig::campaign() const {
    CampaignConfig c;
    c.trial_budget_T = trial_budget_T;
    c.stress_iterations = stress_iterations;
    c.seed = seed;
    c.antihash = antihash;
    return c;
}

CalibrationConfig WorkspaceConfig::calibration() const {
    CalibrationConfig c;
    c.K = K;
    c.max_iter = max_iter;
    return c;
}

void WorkspaceConfig::apply_limits(ProblemPackage& pkg) const {
    if (limits.contains("time_limit_ms")) pkg.limits.time_limit_ms = limits["time_limit_ms"].get<std::int64_t>();
    if (limits.contains("memory_limit_mib")) pkg.limits.memory_limit_mib = limits["memory_limit_mib"].get<std::int64_t>();
    if (limits.contains("wall_clock_multiplier"))
        pkg.limits.wall_clock_multiplier = limits["wall_clock_multiplier"].get<double>();
    if (limits.contains("output_limit_bytes"))
        pkg.limits.output_limit_bytes = limits["output_limit_bytes"].get<std::int64_t>();
    pkg.limits.validate();
}

std::unique_ptr<Provider> make_provider(const json& spec, const fs::path& default_transcript) {
    if (spec.is_string()) {
        std::string s = spec.get<std::string>();
        if (s == "scripted") {
            return std::make_unique<ScriptedProvider>(load_transcript(default_transcript.string()),
                                                      default_transcript.string());
        }
        if (s.rfind("scripted:", 0) == 0) {
            std::string file = s.substr(9);
            if (file.empty()) throw Error(Errc::Usage, "scripted provider needs a file: scripted:FILE");
            return std::make_unique<ScriptedProvider>(load_transcript(file), file);
        }
        if (s == "remote") return std::make_unique<RemoteProvider>(RemoteProviderConfig{});
        throw Error(Errc::Usage, "unknown provider " + s + " (expected scripted:FILE or remote)");
    }
    if (spec.is_object() && spec.value("kind", "") == "remote") {
        RemoteProviderConfig rc;
        rc.endpoint = spec.value("endpoint", rc.endpoint);
        rc.model = spec.value("model", rc.model);
        rc.temperature = spec.value("temperature", rc.temperature);
        rc.max_retries = spec.value("max_retries", rc.max_retries);
        rc.max_in_flight = spec.value("max_in_flight", rc.max_in_flight);
        if (spec.contains("timeout_ms")) rc.request_timeout = std::chrono::milliseconds(spec["timeout_ms"].get<long>());
        rc.validate();
        return std::make_unique<RemoteProvider>(rc);
    }
    if (spec.is_object() && spec.value("kind", "") == "scripted") {
        fs::path file = spec.value("transcript", default_transcript.string());
        return std::make_unique<ScriptedProvider>(load_transcript(file.string()), file.string());
    }
    throw Error(Errc::Usage, "provider must be \"scripted\", \"scripted:FILE\", \"remote\" or {\"kind\": ...}");
}

WorkspaceLock::WorkspaceLock(const fs::path& workspace) {
    fs::create_directories(workspace);
    fs::path p = workspace / ".lock";
    fd_ = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(Errc::Io, "cannot open " + p.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw Error(Errc::WorkspaceBusy, "another command holds " + p.string());
    }
}

WorkspaceLock::~WorkspaceLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

namespace {

// State shared by one CLI invocation; becomes the RunRecord.
struct Run {
    fs::path workspace;
    WorkspaceConfig config;
    std::string command;
    std::vector<std::string> argv;
    std::string id;
    json record = json::object();
    std::vector<std::string> artifacts;
    std::ostream* out = nullptr;

    void write(const fs::path& p, std::string_view bytes) {
        write_file(p, bytes);
        artifacts.push_back(fs::absolute(p).lexically_normal().string());
    }
    void write_json(const fs::path& p, const json& j) { write(p, j.dump(2) + "\n"); }
};

std::string run_id(const std::string& command) {
    std::string ts = utc_timestamp();
    ts.erase(std::remove_if(ts.begin(), ts.end(), [](char c) { return c == '-' || c == ':'; }), ts.end());
    static std::atomic<int> seq{0};
    return ts + "-" + command + "-" + std::to_string(::getpid()) + "-" + std::to_string(++seq);
}

std::unique_ptr<Sandbox> make_sandbox(const Run& run) {
    SandboxOptions so;
    so.workspace = run.workspace;
    so.toolchains = run.config.toolchains;
    return std::make_unique<Sandbox>(so);
}

ProblemPackage open_package(const Run& run, const fs::path& dir) {
    ProblemPackage pkg = load_package(dir);
    run.config.apply_limits(pkg);
    return pkg;
}

void describe_package(Run& run, Sandbox& sandbox, const ProblemPackage& pkg, const fs::path& dir) {
    json sources = json::object();
    std::set<std::string> toolchains = {pkg.std_solution.toolchain_id};
    sources["std"] = sha256_hex(pkg.std_solution.source);
    for (const auto& s : pkg.submissions) {
        sources["submission:" + s.id] = sha256_hex(s.source);
        toolchains.insert(s.toolchain_id);
    }
    if (const ToolSource* v = pkg.effective_validator()) {
        sources["validator"] = sha256_hex(v->source);
        toolchains.insert(v->toolchain_id);
    }
    if (const ToolSource* c = pkg.effective_checker()) {
        sources["checker"] = sha256_hex(c->source);
        toolchains.insert(c->toolchain_id);
    }
    json versions = json::object();
    for (const auto& id : toolchains) {
        try {
            versions[id] = sandbox.toolchain_identity(id);
        } catch (const Error& e) {
            versions[id] = std::string("unavailable: ") + e.what();
        }
    }
    run.record["package"] = {{"id", pkg.id}, {"path", fs::absolute(dir).lexically_normal().string()}, {"sources", sources}};
    run.record["tool_versions"] = versions;
}

void record_provider(Run& run, const Provider& provider, const json& spec) {
    fs::path t = run.workspace / "runs" / (run.id + ".transcript.json");
    auto entries = provider.transcript();
    save_transcript(entries, t.string());
    run.artifacts.push_back(t.string());
    run.record["provider"] = {{"spec", spec}, {"describe", provider.describe()}, {"calls", entries.size()},
                              {"transcript", t.string()}};
}

std::vector<TestCase> pick_suite(const ProblemPackage& pkg, const fs::path& dir, const std::string& which) {
    if (which == "local") return pkg.local_suite;
    if (which == "official") {
        if (!pkg.official_suite) throw Error(Errc::EmptySuite, "package has no official suite");
        return *pkg.official_suite;
    }
    if (which == "augmented") {
        auto suite = load_suite(dir / "tests" / "augmented", Provenance::Original);
        if (suite.empty()) throw Error(Errc::EmptySuite, "no augmented suite under " + (dir / "tests" / "augmented").string() +
                                                             "; run augment first");
        return suite;
    }
    throw Error(Errc::Usage, "suite must be local, official or augmented");
}

std::string verdict_line(const Verdict& v) {
    std::string s(to_string(v.kind));
    if (v.test_index) s += " on test " + std::to_string(*v.test_index + 1);
    if (!v.detail.empty()) s += " (" + v.detail + ")";
    return s;
}

std::vector<CascadeResult> load_cascades(const fs::path& hacks) {
    std::vector<CascadeResult> out;
    if (!fs::is_directory(hacks)) return out;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(hacks))
        if (e.is_directory() && fs::exists(e.path() / "cascade.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        json j = json::parse(read_file(d / "cascade.json"));
        CascadeResult r;
        r.target_id = j["target"];
        std::string stage = j["winning_stage"];
        for (Stage s : {Stage::Provider, Stage::Stress, Stage::Antihash, Stage::None})
            if (to_string(s) == stage) r.winning_stage = s;
        r.turns_used = j["turns_used"];
        out.push_back(std::move(r));
    }
    return out;
}

json summary_json(const std::string& pkg_id, const std::vector<CascadeResult>& cascades) {
    HsrResult h = compute_hsr(cascades);
    json targets = json::array();
    for (const auto& c : cascades)
        targets.push_back({{"target", c.target_id}, {"winning_stage", to_string(c.winning_stage)}, {"turns_used", c.turns_used}});
    return {{"package", pkg_id}, {"targets", targets}, {"hsr", rate_to_json(h.hsr)}, {"avg_turns", rate_to_json(h.avg_turns)}};
}

// Counts are shown unreduced: "2/2", not "1/1".
std::string rate_line(const Rate& r, std::int64_t den) {
    if (!r) return "UNDEFINED";
    return std::to_string(r->num * (den / r->den)) + "/" + std::to_string(den) + " (" + r->fixed2() + ")";
}

std::string rate_line(const Rate& r) {
    if (!r) return "UNDEFINED";
    return r->fixed2();
}

// Loaded hack inputs with their sidecar metadata.
struct StoredHack {
    std::string target;
    std::string file;
    TestCase input;
};

std::vector<StoredHack> load_hacks(const fs::path& hacks) {
    std::vector<StoredHack> out;
    if (!fs::is_directory(hacks)) return out;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(hacks))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        std::vector<std::pair<long, fs::path>> files;
        for (const auto& e : fs::directory_iterator(d)) {
            if (e.path().extension() != ".in") continue;
            try {
                files.emplace_back(std::stol(e.path().stem().string()), e.path());
            } catch (const std::exception&) {
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& [n, p] : files) {
            fs::path side = p;
            side.replace_extension(".json");
            json meta = fs::exists(side) ? json::parse(read_file(side)) : json::object();
            Provenance prov = provenance_from_string(meta.value("strategy", std::string("PROVIDER")));
            std::map<std::string, std::string> md;
            if (meta.contains("metadata"))
                for (const auto& [k, v] : meta["metadata"].items()) md[k] = v.get<std::string>();
            md["source_file"] = d.filename().string() + "/" + p.filename().string();
            out.push_back({meta.value("target", d.filename().string()), md["source_file"],
                           TestCase(read_file(p), prov, std::nullopt, md)});
        }
    }
    return out;
}

// ---- subcommands --------------------------------------------------------

void cmd_calibrate(Run& run, const fs::path& dir, const std::string& provider_opt) {
    ProblemPackage pkg = open_package(run, dir);
    auto sandbox = make_sandbox(run);
    describe_package(run, *sandbox, pkg, dir);
    json spec = provider_opt.empty() ? run.config.provider : json(provider_opt);
    auto provider = make_provider(spec, dir / "transcripts" / "calibrate.json");
    Judge judge(*sandbox, pkg);
    CalibrationConfig cfg = run.config.calibration();
    json results = json::object();
    fs::path cal = dir / "calibration";
    auto finish = [&](const char* name, const CalibrationResult& r) {
        run.write_json(cal / (std::string(name) + ".log.json"), r.log.to_json());
        if (r.log.final_sha256 != r.log.initial_sha256)
            run.write(cal / ("refined_" + std::string(name) + ".cpp"), r.tool.source);
        if (r.tool.frozen)
            *run.out << name << ": frozen, left unchanged\n";
        else
            *run.out << name << ": " << to_string(r.log.terminated_by) << " after " << r.log.iterations.size()
                     << " iterations, " << r.log.fixes.size() << " fixes\n";
        results[name] = {{"terminated_by", to_string(r.log.terminated_by)},
                         {"iterations", r.log.iterations.size()},
                         {"final_sha256", r.log.final_sha256}};
    };
    try {
        finish("validator", refine_validator(judge, *provider, cfg));
    } catch (const Error& e) {
        if (e.code() != Errc::NotApplicable) throw;
        *run.out << "validator: NOT_APPLICABLE (" << e.detail() << ")\n";
        results["validator"] = "NOT_APPLICABLE";
    }
    try {
        finish("checker", refine_checker(judge, *provider, *provider, cfg));
    } catch (const Error& e) {
        if (e.code() != Errc::NotApplicable) throw;
        *run.out << "checker: NOT_APPLICABLE (" << e.detail() << ")\n";
        results["checker"] = "NOT_APPLICABLE";
    }
    record_provider(run, *provider, spec);
    run.record["result"] = results;
}

void cmd_hack(Run& run, const fs::path& dir, const std::string& target_opt, const std::string& provider_opt,
              std::optional<int> T) {
    ProblemPackage pkg = open_package(run, dir);
    json spec = provider_opt.empty() ? run.config.provider : json(provider_opt);
    auto provider = make_provider(spec, dir / "transcripts" / "hack.json");
    auto sandbox = make_sandbox(run);
    describe_package(run, *sandbox, pkg, dir);
    Judge judge(*sandbox, pkg);
    CampaignConfig cfg = run.config.campaign();
    if (T) {
        if (*T < 1) throw Error(Errc::Usage, "-T must be >= 1");
        cfg.trial_budget_T = *T;
    }

    std::vector<Submission> targets;
    if (!target_opt.empty()) {
        const Submission* s = pkg.find_submission(target_opt);
        if (!s) throw Error(Errc::DanglingReference, "no submission " + target_opt);
        targets.push_back(*s);
    } else {
        targets = judge.identify_targets();
    }
    fs::path hacks = dir / "hacks";
    json per_target = json::array();
    std::vector<TestCase> winners;
    for (const auto& t : targets) {
        CascadeResult r = cascade_hack(judge, t, *provider, cfg);
        fs::path tdir = hacks / t.id;
        fs::remove_all(tdir);
        int n = 0;
        for (const auto& a : r.attempts) {
            if (!a.success) continue;
            ++n;
            run.write(tdir / (std::to_string(n) + ".in"), a.input.input);
            json side = to_json(a);
            side["stage"] = to_string(r.winning_stage);
            run.write_json(tdir / (std::to_string(n) + ".json"), side);
            TestCase tc = a.input;
            tc.metadata["source_file"] = t.id + "/" + std::to_string(n) + ".in";
            winners.push_back(tc);
        }
        run.write_json(tdir / "cascade.json", to_json(r));
        *run.out << "target " << t.id << ": ";
        if (r.winning_stage == Stage::None)
            *run.out << "no hack found\n";
        else
            *run.out << "hacked at " << to_string(r.winning_stage) << " stage, turns_used " << r.turns_used << "\n";
        per_target.push_back({{"target", t.id}, {"winning_stage", to_string(r.winning_stage)}, {"turns_used", r.turns_used}});
    }
    if (targets.empty()) *run.out << "no targets\n";

    auto cascades = load_cascades(hacks);
    json summary = summary_json(pkg.id, cascades);
    run.write_json(hacks / "summary.json", summary);

    if (!winners.empty()) {
        auto matrix = cross_apply(judge, winners, pkg.submissions, cfg.workers);
        json rows = json::array();
        for (std::size_t i = 0; i < winners.size(); ++i) {
            json cells = json::array();
            for (std::size_t j = 0; j < pkg.submissions.size(); ++j) {
                const HackAttempt& a = matrix[i][j];
                cells.push_back({{"submission", pkg.submissions[j].id},
                                 {"success", a.success},
                                 {"target_verdict", a.target_verdict ? json(to_string(a.target_verdict->kind)) : json(nullptr)},
                                 {"note", a.note}});
            }
            rows.push_back({{"input", winners[i].metadata.at("source_file")}, {"results", cells}});
        }
        run.write_json(hacks / "cross_apply.json", rows);
    }
    HsrResult hsr = compute_hsr(cascades);
    *run.out << "HSR " << rate_line(hsr.hsr, static_cast<std::int64_t>(hsr.targets)) << "\n";
    record_provider(run, *provider, spec);
    run.record["result"] = {{"targets", per_target}, {"summary", summary}};
}

void cmd_judge(Run& run, const fs::path& dir, const std::string& submission, const std::string& suite_name) {
    ProblemPackage pkg = open_package(run, dir);
    auto sandbox = make_sandbox(run);
    describe_package(run, *sandbox, pkg, dir);
    const Submission* s = submission == "std" ? &pkg.std_solution : pkg.find_submission(submission);
    if (!s) throw Error(Errc::DanglingReference, "no submission " + submission);
    std::vector<TestCase> suite = pick_suite(pkg, dir, suite_name);
    Judge judge(*sandbox, pkg);
    JudgeOutcome o = judge.judge_submission(*s, suite);
    json report = to_json(o);
    report["submission"] = s->id;
    report["suite"] = suite_name;
    run.write_json(dir / "reports" / ("judge-" + s->id + "-" + suite_name + ".json"), report);
    *run.out << s->id << " on " << suite_name << " suite (" << suite.size() << " tests): " << verdict_line(o.verdict) << "\n";
    run.record["result"] = report;
}

void cmd_metrics(Run& run, const fs::path& dir, const std::string& suite_name) {
    ProblemPackage pkg = open_package(run, dir);
    auto sandbox = make_sandbox(run);
    describe_package(run, *sandbox, pkg, dir);
    std::vector<TestCase> suite = pick_suite(pkg, dir, suite_name);
    Judge judge(*sandbox, pkg);
    MetricsReport rep;
    rep.package_id = pkg.id;
    rep.suite = suite_name;
    rep.suite_size = suite.size();
    rep.classification = compute_classification(evaluate_suite(judge, suite));
    rep.vpr = compute_vpr(judge, suite);
    rep.hsr = compute_hsr(load_cascades(dir / "hacks"));
    json j = rep.to_json();
    run.write_json(dir / "reports" / ("metrics-" + suite_name + ".json"), j);
    *run.out << "TPR " << rate_line(rep.classification.tpr, static_cast<std::int64_t>(rep.classification.positives))
             << "\n"
             << "TNR " << rate_line(rep.classification.tnr, static_cast<std::int64_t>(rep.classification.negatives))
             << "\n"
             << "VPR " << rate_line(rep.vpr, static_cast<std::int64_t>(suite.size())) << "\n"
             << "HSR " << rate_line(rep.hsr.hsr, static_cast<std::int64_t>(rep.hsr.targets)) << "\n"
             << "avg_turns " << rate_line(rep.hsr.avg_turns) << "\n";
    run.record["result"] = j;
}

void cmd_antihash(Run& run, const fs::path& spec_file) {
    if (!fs::is_regular_file(spec_file)) throw Error(Errc::Io, "cannot read " + spec_file.string());
    json j = json::parse(read_file(spec_file), nullptr, false);
    if (j.is_discarded()) throw Error(Errc::InvariantViolation, spec_file.string() + " is not valid JSON");
    RollingHashSpec spec = RollingHashSpec::from_json(j);
    CollisionPair pair = find_collision(spec, run.config.antihash);
    *run.out << pair.a << "\n" << pair.b << "\n";
    run.record["result"] = {{"spec", spec.to_json()}, {"a", pair.a}, {"b", pair.b}, {"length", pair.a.size()}};
}

void cmd_augment(Run& run, const fs::path& dir) {
    ProblemPackage pkg = open_package(run, dir);
    auto sandbox = make_sandbox(run);
    describe_package(run, *sandbox, pkg, dir);
    Judge judge(*sandbox, pkg);
    std::vector<HackAttempt> ok;
    json stale = json::array();
    for (auto& h : load_hacks(dir / "hacks")) {
        const Submission* target = pkg.find_submission(h.target);
        if (!target) {
            stale.push_back({{"input", h.file}, {"reason", "unknown target " + h.target}});
            continue;
        }
        HackAttempt a = judge.is_successful_hack(h.input, *target);
        if (a.success)
            ok.push_back(std::move(a));
        else
            stale.push_back({{"input", h.file}, {"reason", a.note.empty() ? "target now passes" : a.note}});
    }
    AugmentResult r = augment_suite(judge, ok);
    fs::path adir = dir / "tests" / "augmented";
    fs::remove_all(adir);
    save_suite(r.package.local_suite, adir);
    json index = json::array();
    for (std::size_t i = 0; i < r.package.local_suite.size(); ++i) {
        const TestCase& t = r.package.local_suite[i];
        std::string stem = zero_pad(i + 1, 3);
        run.artifacts.push_back((adir / (stem + ".in")).string());
        if (t.jury_answer) run.artifacts.push_back((adir / (stem + ".ans")).string());
        json meta = json::object();
        for (const auto& [k, v] : t.metadata) meta[k] = v;
        index.push_back({{"file", stem + ".in"}, {"provenance", to_string(t.provenance())}, {"metadata", meta}});
    }
    run.write_json(adir / "index.json", index);
    for (const auto& d : r.dropped) *run.out << "dropped " << d << "\n";
    for (const auto& s : stale) *run.out << "skipped " << s["input"].get<std::string>() << ": " << s["reason"].get<std::string>() << "\n";
    *run.out << "augmented suite: " << r.package.local_suite.size() << " tests (" << r.added << " added, "
             << r.dropped.size() << " dropped)\n";
    run.record["result"] = {{"dropped", r.dropped}, {"added", r.added}, {"size", r.package.local_suite.size()},
                            {"skipped", stale}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"hackforge: adversarial test generation for competitive programming packages", "hackforge"};
    app.require_subcommand(1);
    std::string workspace_opt;
    app.add_option("--workspace", workspace_opt, "Workspace root (default $HACKFORGE_WORKDIR)");

    std::string pkg, provider_opt, target_opt, submission, suite = "local", spec_file;
    std::optional<int> T;

    auto* calibrate = app.add_subcommand("calibrate", "Harden the validator and checker with probes");
    calibrate->add_option("package", pkg, "Package directory")->required();
    calibrate->add_option("--provider", provider_opt, "scripted:FILE or remote");

    auto* hack = app.add_subcommand("hack", "Run the hack cascade against target submissions");
    hack->add_option("package", pkg, "Package directory")->required();
    hack->add_option("--target", target_opt, "Submission id (default: every target)");
    hack->add_option("--provider", provider_opt, "scripted:FILE or remote");
    hack->add_option("-T", T, "Provider trial budget");

    auto* judge = app.add_subcommand("judge", "Judge one submission on a suite");
    judge->add_option("package", pkg, "Package directory")->required();
    judge->add_option("--submission", submission, "Submission id ('std' for the reference)")->required();
    judge->add_option("--suite", suite, "local, official or augmented")
        ->check(CLI::IsMember({"local", "official", "augmented"}));

    auto* metrics = app.add_subcommand("metrics", "TPR, TNR, VPR, HSR for a package");
    metrics->add_option("package", pkg, "Package directory")->required();
    metrics->add_option("--suite", suite, "local, official or augmented")
        ->check(CLI::IsMember({"local", "official", "augmented"}));

    auto* antihash = app.add_subcommand("antihash", "Print two colliding strings for a rolling hash");
    antihash->add_option("--spec", spec_file, "Hash spec JSON")->required();

    auto* augment = app.add_subcommand("augment", "Filter invalid tests and append stored hacks");
    augment->add_option("package", pkg, "Package directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    Run run;
    run.out = &out;
    run.command = app.get_subcommands().front()->get_name();
    for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);
    run.id = run_id(run.command);
    int status = 0;
    std::unique_ptr<WorkspaceLock> lock;
    std::string started = utc_timestamp();
    try {
        run.workspace = workspace_opt.empty() ? default_workspace() : fs::path(workspace_opt);
        run.workspace = fs::absolute(run.workspace).lexically_normal();
        lock = std::make_unique<WorkspaceLock>(run.workspace);
        run.config = WorkspaceConfig::load(run.workspace / "hackforge.json");
        if (*calibrate) cmd_calibrate(run, pkg, provider_opt);
        if (*hack) cmd_hack(run, pkg, target_opt, provider_opt, T);
        if (*judge) cmd_judge(run, pkg, submission, suite);
        if (*metrics) cmd_metrics(run, pkg, suite);
        if (*antihash) cmd_antihash(run, spec_file);
        if (*augment) cmd_augment(run, pkg);
    } catch (const Error& e) {
        status = e.code() == Errc::Usage ? 2 : 1;
        err << "error: " << e.what() << "\n";
        if (status == 2) err << app.get_subcommands().front()->help();
        run.record["error"] = {{"code", to_string(e.code())}, {"detail", e.detail()}};
    } catch (const std::exception& e) {
        status = 1;
        err << "error: " << e.what() << "\n";
        run.record["error"] = {{"code", "INTERNAL"}, {"detail", e.what()}};
    }
    if (!lock) return status;  // busy or unusable workspace: nothing of ours to record
    try {
        run.record["id"] = run.id;
        run.record["command"] = run.command;
        run.record["argv"] = run.argv;
        run.record["workspace"] = run.workspace.string();
        run.record["config"] = run.config.to_json();
        run.record["artifacts"] = run.artifacts;
        run.record["started_at"] = started;
        run.record["finished_at"] = utc_timestamp();
        run.record["exit_status"] = status;
        write_file(run.workspace / "runs" / (run.id + ".json"), run.record.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "error: cannot write run record: " << e.what() << "\n";
        if (status == 0) status = 1;
    }
    return status;
}

}  // namespace hackforge
