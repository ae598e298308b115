#include "hackforge/judge.hpp"

#include "hackforge/error.hpp"

namespace hackforge {

std::string_view to_string(CheckerOutcome o) {
    switch (o) {
        case CheckerOutcome::Accepted: return "ACCEPTED";
        case CheckerOutcome::Rejected: return "REJECTED";
        case CheckerOutcome::CheckerFail: return "CHECKER_FAIL";
    }
    return "?";
}

CheckerOutcome checker_outcome_from_exit(const ExitStatus& exit) {
    if (exit.signaled) return CheckerOutcome::CheckerFail;
    switch (exit.value) {
        case 0: return CheckerOutcome::Accepted;
        case 1:
        case 2: return CheckerOutcome::Rejected;
        default: return CheckerOutcome::CheckerFail;
    }
}

CheckerResult token_diff(std::string_view contestant, std::string_view jury) {
    auto out = split_whitespace(normalize_newlines(contestant));
    auto ans = split_whitespace(normalize_newlines(jury));
    for (std::size_t i = 0; i < std::min(out.size(), ans.size()); ++i) {
        if (out[i] != ans[i])
            return {CheckerOutcome::Rejected,
                    "token " + std::to_string(i + 1) + " differs: expected '" + ans[i] + "', found '" + out[i] + "'"};
    }
    if (out.size() != ans.size())
        return {CheckerOutcome::Rejected,
                "expected " + std::to_string(ans.size()) + " tokens, found " + std::to_string(out.size())};
    return {CheckerOutcome::Accepted, std::to_string(ans.size()) + " tokens"};
}

ResourceLimits tool_limits() {
    ResourceLimits l;
    l.time_limit_ms = 10'000;
    l.memory_limit_mib = 1024;
    l.wall_clock_multiplier = 1.5;
    l.output_limit_bytes = 256LL << 20;
    return l;
}

ValidatorResult run_validator(const Sandbox& sandbox, const CompiledArtifact& validator, std::string_view input) {
    ExecutionResult r = sandbox.execute(validator, input, tool_limits());
    if (r.exit.is_clean_exit() && !r.wall_killed) return {true, {}};
    std::string reason = r.stderr_data.empty() ? r.exit.describe() : r.stderr_data;
    while (!reason.empty() && (reason.back() == '\n' || reason.back() == '\r')) reason.pop_back();
    if (r.wall_killed) reason = "validator timed out";
    return {false, reason};
}

CheckerResult run_checker(const Sandbox& sandbox, const CompiledArtifact* checker, std::string_view input,
                          std::string_view contestant_out, std::string_view jury_answer) {
    if (!checker) return token_diff(contestant_out, jury_answer);
    ExecOptions opts;
    opts.files = {{"input.txt", Bytes(input)}, {"output.txt", Bytes(contestant_out)}, {"answer.txt", Bytes(jury_answer)}};
    opts.args = {"input.txt", "output.txt", "answer.txt"};
    ExecutionResult r = sandbox.execute(*checker, "", tool_limits(), opts);
    std::string reason = r.stderr_data;
    while (!reason.empty() && (reason.back() == '\n' || reason.back() == '\r')) reason.pop_back();
    if (r.wall_killed) return {CheckerOutcome::CheckerFail, "checker timed out"};
    if (reason.empty()) reason = r.exit.describe();
    return {checker_outcome_from_exit(r.exit), reason};
}

bool hack_succeeded(bool validator_ok, const std::optional<Verdict>& std_verdict,
                    const std::optional<Verdict>& target_verdict) {
    return validator_ok && std_verdict && std_verdict->is_ac() && target_verdict && !target_verdict->is_ac();
}

Judge::Judge(Sandbox& sandbox, ProblemPackage pkg) : sandbox_(sandbox), pkg_(std::move(pkg)) {}

namespace {
VerdictKind verdict_for(RunStatus s) {
    switch (s) {
        case RunStatus::TLE: return VerdictKind::TLE;
        case RunStatus::MLE: return VerdictKind::MLE;
        case RunStatus::RE: return VerdictKind::RE;
        case RunStatus::OK: break;
    }
    return VerdictKind::AC;
}
}  // namespace

CompiledArtifact Judge::compiled(const Submission& s) {
    return compiled_tool(ToolSource{s.source, s.toolchain_id, s.source_path, false});
}

CompiledArtifact Judge::compiled_tool(const ToolSource& tool) {
    std::string key = tool.toolchain_id + ":" + sha256_hex(tool.source);
    std::shared_ptr<std::once_flag> once;
    {
        std::lock_guard lock(mutex_);
        auto& slot = compile_once_[key];
        if (!slot) slot = std::make_shared<std::once_flag>();
        once = slot;
    }
    std::call_once(*once, [&] {
        try {
            CompiledArtifact art = sandbox_.compile(tool.source, tool.toolchain_id);
            std::lock_guard lock(mutex_);
            artifacts_[key] = std::move(art);
        } catch (const Error& e) {
            std::lock_guard lock(mutex_);
            compile_errors_[key] = e.what();
            if (e.code() != Errc::CompileError) throw;
        }
    });
    std::lock_guard lock(mutex_);
    if (auto it = artifacts_.find(key); it != artifacts_.end()) return it->second;
    auto err = compile_errors_.find(key);
    throw Error(Errc::CompileError, err != compile_errors_.end() ? err->second : "compilation failed");
}

ValidatorResult Judge::validate(std::string_view input) {
    if (input.empty() && !pkg_.allow_empty_input) return {false, "empty input"};
    const ToolSource* v = pkg_.effective_validator();
    if (!v) return {true, {}};
    return run_validator(sandbox_, compiled_tool(*v), input);
}

CheckerResult Judge::check(std::string_view input, std::string_view contestant_out, std::string_view jury_answer) {
    const ToolSource* c = pkg_.effective_checker();
    if (!c) return token_diff(contestant_out, jury_answer);
    CompiledArtifact art = compiled_tool(*c);
    return run_checker(sandbox_, &art, input, contestant_out, jury_answer);
}

Judge::OracleRun Judge::oracle(std::string_view input) {
    std::string key = sha256_hex(input);
    {
        std::lock_guard lock(mutex_);
        if (auto it = oracle_cache_.find(key); it != oracle_cache_.end()) return it->second;
    }
    OracleRun run;
    try {
        CompiledArtifact bin = compiled(pkg_.std_solution);
        ExecutionResult r = sandbox_.execute(bin, input, pkg_.limits);
        RunStatus st = classify_run(r, pkg_.limits);
        if (st == RunStatus::OK)
            run = {Verdict::accepted(), std::move(r.stdout_data)};
        else
            run = {Verdict::failed(verdict_for(st), "std solution: " + std::string(to_string(st)) + ", " + r.exit.describe()),
                   std::move(r.stdout_data)};
    } catch (const Error& e) {
        VerdictKind kind = e.code() == Errc::CompileError ? VerdictKind::CE : VerdictKind::JudgeFail;
        run = {Verdict::failed(kind, std::string("std solution: ") + e.what()), {}};
    }
    std::lock_guard lock(mutex_);
    oracle_cache_.emplace(key, run);
    return run;
}

Bytes Judge::jury_answer(const TestCase& test) {
    if (test.provenance() == Provenance::Original && test.jury_answer) return *test.jury_answer;
    OracleRun run = oracle(test.input);
    if (!run.verdict.is_ac()) throw Error(Errc::OracleFail, run.verdict.detail);
    return run.output;
}

Verdict Judge::run_on(const CompiledArtifact& bin, std::string_view input, std::string_view answer,
                      std::optional<std::size_t> index, TestRecord* record) {
    ExecutionResult r = sandbox_.execute(bin, input, pkg_.limits);
    RunStatus st = classify_run(r, pkg_.limits);
    if (record) record->status = st;
    if (st != RunStatus::OK) {
        std::string detail = std::string(to_string(st)) + ": cpu " + std::to_string(r.cpu_time_ms) + " ms, peak " +
                             std::to_string(static_cast<long long>(r.peak_memory_mib)) + " MiB, " + r.exit.describe();
        return Verdict::failed(verdict_for(st), detail, index);
    }
    CheckerResult c = check(input, r.stdout_data, answer);
    if (record) record->checker = c;
    switch (c.outcome) {
        case CheckerOutcome::Accepted: return Verdict::accepted();
        case CheckerOutcome::Rejected: return Verdict::failed(VerdictKind::WA, c.reason, index);
        case CheckerOutcome::CheckerFail: return Verdict::failed(VerdictKind::JudgeFail, "checker: " + c.reason, index);
    }
    return Verdict::failed(VerdictKind::JudgeFail, "unreachable", index);
}

JudgeOutcome Judge::judge_submission(const Submission& s, std::span<const TestCase> suite) {
    JudgeOutcome out;
    out.used_suite_size = suite.size();
    CompiledArtifact bin;
    try {
        bin = compiled(s);
    } catch (const Error& e) {
        out.verdict = Verdict::failed(VerdictKind::CE, e.detail());
        return out;
    }
    for (std::size_t i = 0; i < suite.size(); ++i) {
        TestRecord rec;
        Verdict v;
        try {
            Bytes answer = jury_answer(suite[i]);
            v = run_on(bin, suite[i].input, answer, i, &rec);
        } catch (const Error& e) {
            v = Verdict::failed(VerdictKind::JudgeFail, e.what(), i);
        }
        out.per_test.push_back(std::move(rec));
        if (!v.is_ac()) {
            out.verdict = std::move(v);
            return out;
        }
    }
    out.verdict = Verdict::accepted(std::to_string(suite.size()) + " tests");
    return out;
}

HackAttempt Judge::is_successful_hack(const TestCase& x, const Submission& target) {
    HackAttempt a;
    a.target_id = target.id;
    a.input = x;
    a.strategy = x.provenance();

    ValidatorResult vr = validate(x.input);
    a.validator_ok = vr.valid;
    a.validator_reason = vr.reason;
    if (!vr.valid) {
        a.note = "INVALID: " + vr.reason;
        return a;
    }

    OracleRun oracle_run = oracle(x.input);
    a.std_verdict = oracle_run.verdict;
    if (!oracle_run.verdict.is_ac()) {
        a.note = "ORACLE_FAIL: " + oracle_run.verdict.detail;
        return a;
    }

    try {
        CompiledArtifact bin = compiled(target);
        a.target_verdict = run_on(bin, x.input, oracle_run.output, std::nullopt);
    } catch (const Error& e) {
        if (e.code() == Errc::CompileError)
            a.target_verdict = Verdict::failed(VerdictKind::CE, e.detail());
        else
            a.target_verdict = Verdict::failed(VerdictKind::JudgeFail, e.what());
    }
    // A judging-infrastructure fault is not a target failure.
    if (a.target_verdict->kind == VerdictKind::JudgeFail) {
        a.note = "JUDGE_FAIL: " + a.target_verdict->detail;
        return a;
    }
    a.success = hack_succeeded(a.validator_ok, a.std_verdict, a.target_verdict);
    return a;
}

std::vector<Submission> Judge::identify_targets() {
    bool any_label = false;
    for (const auto& s : pkg_.submissions) any_label |= s.ground_truth.has_value();
    if (!any_label && !pkg_.official_suite) throw Error(Errc::NoAuthoritativeSignal, pkg_.id);

    std::vector<Submission> targets;
    for (const auto& s : pkg_.submissions) {
        if (!judge_submission(s, pkg_.local_suite).verdict.is_ac()) continue;
        bool flagged = s.ground_truth == GroundTruth::Incorrect;
        if (!flagged && pkg_.official_suite)
            flagged = !judge_submission(s, *pkg_.official_suite).verdict.is_ac();
        if (flagged) targets.push_back(s);
    }
    return targets;
}

}  // namespace hackforge
