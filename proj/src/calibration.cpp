#include "hackforge/calibration.hpp"

#include <functional>

#include "hackforge/error.hpp"
#include "hackforge/genforge.hpp"

namespace hackforge {

using nlohmann::json;

std::string_view to_string(Flaw f) {
    switch (f) {
        case Flaw::FalsePositive: return "FALSE_POSITIVE";
        case Flaw::FalseNegative: return "FALSE_NEGATIVE";
        case Flaw::None: return "NONE";
    }
    return "?";
}

std::string_view to_string(ToolKind t) { return t == ToolKind::Validator ? "VALIDATOR" : "CHECKER"; }

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::CleanStreak: return "CLEAN_STREAK";
        case Termination::IterationCap: return "ITERATION_CAP";
        case Termination::ProviderExhausted: return "PROVIDER_EXHAUSTED";
    }
    return "?";
}

void ValidatorProbe::validate() const {
    if (x_valid.empty() || x_invalid.empty()) throw Error(Errc::InvariantViolation, "validator probe needs both inputs");
    if (x_valid == x_invalid) throw Error(Errc::InvariantViolation, "validator probe inputs are identical");
}

json ValidatorProbe::to_json() const {
    return {{"x_valid", x_valid}, {"x_invalid", x_invalid}, {"rationale", rationale}};
}

void CheckerProbe::validate() const {
    if (y_wrong == y_true) throw Error(Errc::InvariantViolation, "checker probe outputs are identical");
}

json CheckerProbe::to_json() const {
    return {{"x_cand", x_cand}, {"y_wrong", y_wrong}, {"y_true", y_true}, {"reasoning", reasoning}};
}

json FlawReport::to_json() const {
    json j = {{"flaw", to_string(flaw)}, {"tool", to_string(tool)}, {"detail", detail}};
    j["witness"] = witness ? json(*witness) : json(nullptr);
    return j;
}

namespace {

template <class Fn>
auto infra_guard(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == Errc::SandboxFailure) throw Error(Errc::CalibrationInfraFail, e.detail());
        throw;
    }
}

}  // namespace

FlawReport classify_validator_probe(const Sandbox& sandbox, const CompiledArtifact& validator,
                                    const ValidatorProbe& probe) {
    return infra_guard([&] {
        FlawReport r;
        r.tool = ToolKind::Validator;
        ValidatorResult inv = run_validator(sandbox, validator, probe.x_invalid);
        if (inv.valid) {
            r.flaw = Flaw::FalsePositive;
            r.witness = probe.x_invalid;
            r.detail = "validator accepted an input that violates the constraints";
            return r;
        }
        ValidatorResult val = run_validator(sandbox, validator, probe.x_valid);
        if (!val.valid) {
            r.flaw = Flaw::FalseNegative;
            r.witness = probe.x_valid;
            r.detail = "validator rejected a valid input: " + val.reason;
        }
        return r;
    });
}

FlawReport classify_checker_probe(const Sandbox& sandbox, const CompiledArtifact& checker, const CheckerProbe& probe,
                                  std::string_view jury_answer) {
    return infra_guard([&] {
        FlawReport r;
        r.tool = ToolKind::Checker;
        CheckerResult wrong = run_checker(sandbox, &checker, probe.x_cand, probe.y_wrong, jury_answer);
        if (wrong.outcome == CheckerOutcome::Accepted) {
            r.flaw = Flaw::FalsePositive;
            r.witness = probe.y_wrong;
            r.detail = "checker accepted a wrong output";
            return r;
        }
        CheckerResult right = run_checker(sandbox, &checker, probe.x_cand, probe.y_true, jury_answer);
        if (right.outcome != CheckerOutcome::Accepted) {
            r.flaw = Flaw::FalseNegative;
            r.witness = probe.y_true;
            r.detail = "checker " + std::string(right.outcome == CheckerOutcome::Rejected ? "rejected" : "failed on") +
                       " a correct output: " + right.reason;
        }
        return r;
    });
}

CrossVerifyResult cross_verify_probe(const CheckerProbe& probe, const ProblemPackage& pkg, Provider& judge_provider,
                                     std::size_t small_scale_bytes) {
    if (probe.x_cand.size() > small_scale_bytes)
        return {false, "SMALL_SCALE",
                std::to_string(probe.x_cand.size()) + " byte input exceeds " + std::to_string(small_scale_bytes)};
    if (probe.reasoning.find_first_not_of(" \t\r\n") == std::string::npos)
        return {false, "EXPLICIT_REASONING", "probe carries no reasoning"};
    ProviderRequest req{RequestKind::CrossVerify,
                        {{"statement", pkg.statement},
                         {"test_input", probe.x_cand},
                         {"output", "output A:\n" + probe.y_wrong + "\noutput B:\n" + probe.y_true},
                         {"claim", "output A is incorrect for this input and output B is correct"},
                         {"reasoning", probe.reasoning}}};
    ProviderResponse resp;
    try {
        resp = judge_provider.respond(req);
    } catch (const Error& e) {
        if (e.code() == Errc::InvariantViolation) throw;
        return {false, "PROVIDER_ERROR", e.what()};
    }
    if (resp.content["verdict"] != "approve")
        return {false, "CROSS_VERIFICATION", resp.content.value("reason", std::string())};
    return {true, "", resp.content.value("reason", std::string())};
}

void CalibrationConfig::validate() const {
    if (K < 1) throw Error(Errc::InvariantViolation, "K must be >= 1");
    if (max_iter < 1) throw Error(Errc::InvariantViolation, "max_iter must be >= 1");
}

json CalibrationLog::to_json() const {
    json its = json::array();
    for (const auto& it : iterations) {
        json j = {{"index", it.index},
                  {"probe", it.probe},
                  {"tool_sha256", it.tool_sha256},
                  {"consecutive_clean", it.consecutive_clean}};
        j["report"] = it.report ? it.report->to_json() : json(nullptr);
        j["rejected"] = it.rejected.empty() ? json(nullptr) : json(it.rejected);
        its.push_back(std::move(j));
    }
    return {{"tool", to_string(tool)},
            {"package", package_id},
            {"K", K},
            {"max_iter", max_iter},
            {"iterations", its},
            {"consecutive_clean", consecutive_clean},
            {"terminated_by", to_string(terminated_by)},
            {"initial_sha256", initial_sha256},
            {"final_sha256", final_sha256},
            {"fixes", fixes},
            {"notes", notes}};
}

namespace {

bool ends_provider(const Error& e) {
    return e.code() == Errc::TranscriptExhausted || e.code() == Errc::KindMismatch || e.code() == Errc::TransportError;
}

std::string show(std::string_view bytes) {
    return bytes.size() > 2048 ? std::string(bytes.substr(0, 2048)) + "\n[truncated]" : std::string(bytes);
}

// Everything the two refinement loops do not share.
struct LoopHooks {
    ToolKind kind;
    RequestKind probe_kind;
    RequestKind fix_kind;
    const char* source_field;
    // Turns provider content into a classified report, or returns a rejection
    // reason via `rejected` (report empty).
    std::function<std::optional<FlawReport>(const json& content, const CompiledArtifact& tool, json& probe_out,
                                            std::string& rejected)>
        probe;
    // One failure case for the fix request.
    std::function<std::string(const json& probe, const FlawReport& r)> describe;
};

CalibrationResult refine_loop(Judge& judge, Provider& provider, const CalibrationConfig& cfg, ToolSource tool,
                              const LoopHooks& hooks) {
    cfg.validate();
    const ProblemPackage& pkg = judge.package();
    CalibrationResult out;
    CalibrationLog& log = out.log;
    log.tool = hooks.kind;
    log.package_id = pkg.id;
    log.K = cfg.K;
    log.max_iter = cfg.max_iter;
    log.initial_sha256 = sha256_hex(tool.source);
    if (hooks.kind == ToolKind::Checker)
        log.notes.push_back("reference answers for checker probes come from the package's std solution");

    if (tool.frozen) {
        log.notes.push_back("source is frozen; returned unchanged");
        log.terminated_by = Termination::IterationCap;
        log.final_sha256 = log.initial_sha256;
        out.tool = std::move(tool);
        return out;
    }

    CompiledArtifact bin = judge.compiled_tool(tool);
    std::string failures;
    int clean = 0;
    bool done = false;
    log.terminated_by = Termination::IterationCap;

    for (int i = 1; i <= cfg.max_iter && !done; ++i) {
        CalibrationIteration it;
        it.index = i;
        it.tool_sha256 = sha256_hex(tool.source);
        ProviderRequest req{hooks.probe_kind, {{"statement", pkg.statement}, {hooks.source_field, tool.source}}};
        ProviderResponse resp;
        try {
            resp = provider.respond(req);
        } catch (const Error& e) {
            if (e.code() == Errc::InvariantViolation) throw;
            if (ends_provider(e)) {
                log.notes.push_back(std::string("probe request ") + std::to_string(i) + ": " + e.what());
                log.terminated_by = Termination::ProviderExhausted;
                break;
            }
            it.rejected = std::string("MALFORMED_RESPONSE: ") + e.detail();
            it.consecutive_clean = clean;
            log.iterations.push_back(std::move(it));
            continue;
        }
        std::optional<FlawReport> report = hooks.probe(resp.content, bin, it.probe, it.rejected);
        if (!report) {
            it.consecutive_clean = clean;
            log.iterations.push_back(std::move(it));
            continue;
        }
        it.report = report;
        if (report->flaw == Flaw::None) {
            it.consecutive_clean = ++clean;
            log.iterations.push_back(std::move(it));
            if (clean == cfg.K) {
                log.terminated_by = Termination::CleanStreak;
                done = true;
            }
            continue;
        }
        clean = 0;
        it.consecutive_clean = 0;
        failures += "case " + std::to_string(i) + " (" + std::string(to_string(report->flaw)) + "): " +
                    hooks.describe(it.probe, *report) + "\n";
        log.iterations.push_back(std::move(it));

        // Fix: one retry with the compile log appended.
        std::string compile_log;
        bool fixed = false;
        for (int attempt = 1; attempt <= 2 && !fixed; ++attempt) {
            ProviderRequest fix{hooks.fix_kind,
                                {{"statement", pkg.statement}, {hooks.source_field, tool.source}, {"failures", failures}}};
            if (!compile_log.empty()) fix.payload["compile_log"] = compile_log;
            ProviderResponse fr;
            try {
                fr = provider.respond(fix);
            } catch (const Error& e) {
                if (e.code() == Errc::InvariantViolation) throw;
                if (ends_provider(e)) {
                    log.notes.push_back(std::string("fix request after iteration ") + std::to_string(i) + ": " +
                                        e.what());
                    log.terminated_by = Termination::ProviderExhausted;
                    done = true;
                    break;
                }
                compile_log = std::string("unusable response: ") + e.detail();
                continue;
            }
            ToolSource candidate{fr.content["source"].get<std::string>(), tool.toolchain_id, "", false};
            try {
                bin = judge.compiled_tool(candidate);
            } catch (const Error& e) {
                if (e.code() != Errc::CompileError) throw;
                compile_log = e.detail();
                continue;
            }
            tool = std::move(candidate);
            fixed = true;
            log.fixes.push_back({{"after_iteration", i}, {"attempts", attempt}, {"sha256", sha256_hex(tool.source)}});
        }
        if (!fixed && !done)
            throw Error(Errc::FixDoesNotCompile, "fix after iteration " + std::to_string(i) + ": " + compile_log);
    }
    log.consecutive_clean = clean;
    log.final_sha256 = sha256_hex(tool.source);
    out.tool = std::move(tool);
    return out;
}

// Picks the first case of each bug type; inputs may be generator programs.
struct CaseSplit {
    const json* fp = nullptr;
    const json* fn = nullptr;
};

CaseSplit split_cases(const json& content) {
    CaseSplit s;
    for (const auto& c : content["test_cases"]) {
        if (c["bug_type"] == "false_positive" && !s.fp) s.fp = &c;
        if (c["bug_type"] == "false_negative" && !s.fn) s.fn = &c;
    }
    return s;
}

}  // namespace

CalibrationResult refine_validator(Judge& judge, Provider& provider, const CalibrationConfig& cfg) {
    const ProblemPackage& pkg = judge.package();
    if (!pkg.validator) throw Error(Errc::NotApplicable, "package has no validator");
    LoopHooks hooks;
    hooks.kind = ToolKind::Validator;
    hooks.probe_kind = RequestKind::ValidatorProbe;
    hooks.fix_kind = RequestKind::ValidatorFix;
    hooks.source_field = "validator_source";
    hooks.probe = [&](const json& content, const CompiledArtifact& bin, json& probe_out,
                      std::string& rejected) -> std::optional<FlawReport> {
        CaseSplit cs = split_cases(content);
        ValidatorProbe p;
        try {
            p.x_invalid = materialize_input(judge, *cs.fp, cfg.literal_limit_bytes);
            p.x_valid = materialize_input(judge, *cs.fn, cfg.literal_limit_bytes);
            p.rationale = cs.fp->value("strategy", "") + " / " + cs.fn->value("strategy", "");
            probe_out = p.to_json();
            p.validate();
        } catch (const Error& e) {
            if (e.code() == Errc::SandboxFailure) throw Error(Errc::CalibrationInfraFail, e.detail());
            rejected = std::string(to_string(e.code())) + ": " + e.detail();
            return std::nullopt;
        }
        return classify_validator_probe(judge.sandbox(), bin, p);
    };
    hooks.describe = [](const json& probe, const FlawReport& r) {
        const std::string& x = r.flaw == Flaw::FalsePositive ? probe["x_invalid"].get_ref<const std::string&>()
                                                             : probe["x_valid"].get_ref<const std::string&>();
        return std::string(r.flaw == Flaw::FalsePositive ? "accepted this invalid input"
                                                         : "rejected this valid input") +
               "\n" + show(x) + "\n" + r.detail;
    };
    return refine_loop(judge, provider, cfg, *pkg.validator, hooks);
}

CalibrationResult refine_checker(Judge& judge, Provider& provider, Provider& judge_provider,
                                 const CalibrationConfig& cfg) {
    const ProblemPackage& pkg = judge.package();
    if (pkg.checker_mode == CheckerMode::TokenDiff || !pkg.checker)
        throw Error(Errc::NotApplicable, "package uses token diff; there is no checker source to refine");
    LoopHooks hooks;
    hooks.kind = ToolKind::Checker;
    hooks.probe_kind = RequestKind::CheckerProbe;
    hooks.fix_kind = RequestKind::CheckerFix;
    hooks.source_field = "checker_source";
    hooks.probe = [&](const json& content, const CompiledArtifact& bin, json& probe_out,
                      std::string& rejected) -> std::optional<FlawReport> {
        CaseSplit cs = split_cases(content);
        CheckerProbe p;
        p.x_cand = (*cs.fp)["test_input"].get<std::string>();
        p.y_wrong = (*cs.fp)["fake_output"].get<std::string>();
        p.y_true = (*cs.fn)["fake_output"].get<std::string>();
        p.reasoning = content.value("reasoning", "");
        probe_out = p.to_json();
        try {
            p.validate();
        } catch (const Error& e) {
            rejected = std::string(to_string(e.code())) + ": " + e.detail();
            return std::nullopt;
        }
        CrossVerifyResult cv = cross_verify_probe(p, pkg, judge_provider, cfg.small_scale_bytes);
        if (!cv.accepted) {
            rejected = cv.reason + (cv.detail.empty() ? "" : ": " + cv.detail);
            return std::nullopt;
        }
        Judge::OracleRun gt = infra_guard([&] { return judge.oracle(p.x_cand); });
        if (!gt.verdict.is_ac()) throw Error(Errc::OracleFail, "std solution on probe input: " + gt.verdict.detail);
        probe_out["y_gt"] = gt.output;
        return classify_checker_probe(judge.sandbox(), bin, p, gt.output);
    };
    hooks.describe = [](const json& probe, const FlawReport& r) {
        return std::string(r.flaw == Flaw::FalsePositive ? "accepted this wrong output"
                                                         : "did not accept this correct output") +
               "\ninput:\n" + show(probe["x_cand"].get<std::string>()) + "\noutput:\n" + show(*r.witness) +
               "\nreference answer from the std solution:\n" + show(probe["y_gt"].get<std::string>()) + "\n" +
               r.detail;
    };
    return refine_loop(judge, provider, cfg, *pkg.checker, hooks);
}

std::vector<FlawReport> reclassify_log(Judge& judge, const ToolSource& tool, const CalibrationLog& log) {
    CompiledArtifact bin = judge.compiled_tool(tool);
    std::vector<FlawReport> out;
    for (const auto& it : log.iterations) {
        if (!it.report) continue;
        if (log.tool == ToolKind::Validator) {
            ValidatorProbe p{it.probe["x_valid"], it.probe["x_invalid"], it.probe.value("rationale", "")};
            out.push_back(classify_validator_probe(judge.sandbox(), bin, p));
        } else {
            CheckerProbe p{it.probe["x_cand"], it.probe["y_wrong"], it.probe["y_true"], it.probe.value("reasoning", "")};
            out.push_back(classify_checker_probe(judge.sandbox(), bin, p, it.probe["y_gt"].get<std::string>()));
        }
    }
    return out;
}

}  // namespace hackforge
