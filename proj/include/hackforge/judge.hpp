#pragma once

// Verdict pipeline: validator -> submission -> checker, the successful-hack
// predicate and target mining.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hackforge/model.hpp"
#include "hackforge/sandbox.hpp"

namespace hackforge {

struct ValidatorResult {
    bool valid = false;
    std::string reason;
};

enum class CheckerOutcome { Accepted, Rejected, CheckerFail };

std::string_view to_string(CheckerOutcome o);

struct CheckerResult {
    CheckerOutcome outcome = CheckerOutcome::CheckerFail;
    std::string reason;
};

/// testlib exit protocol: 0 -> ACCEPTED, 1/2 -> REJECTED, everything else
/// (3, other codes, signals) -> CHECKER_FAIL.
CheckerOutcome checker_outcome_from_exit(const ExitStatus& exit);

/// Whitespace-delimited, case-sensitive token comparison.
CheckerResult token_diff(std::string_view contestant, std::string_view jury);

/// Limits applied to validators, checkers and generators.
ResourceLimits tool_limits();

/// Feeds input on stdin; exit 0 means VALID, anything else INVALID with stderr
/// as reason. Sandbox faults propagate as SANDBOX_FAILURE.
ValidatorResult run_validator(const Sandbox& sandbox, const CompiledArtifact& validator, std::string_view input);

/// checker == nullptr selects TOKEN_DIFF. Custom checkers get argv
/// [input_file, contestant_output_file, jury_answer_file].
CheckerResult run_checker(const Sandbox& sandbox, const CompiledArtifact* checker, std::string_view input,
                          std::string_view contestant_out, std::string_view jury_answer);

struct TestRecord {
    RunStatus status = RunStatus::OK;
    std::optional<CheckerResult> checker;
};

struct JudgeOutcome {
    Verdict verdict;
    std::vector<TestRecord> per_test;
    std::size_t used_suite_size = 0;
};

struct HackAttempt {
    std::string target_id;
    TestCase input{Bytes{}, Provenance::Probe};
    bool validator_ok = false;
    std::string validator_reason;
    std::optional<Verdict> std_verdict;
    std::optional<Verdict> target_verdict;
    bool success = false;
    Provenance strategy = Provenance::Provider;
    int turn = 1;
    std::string note;
};

/// The three-condition predicate: valid input, oracle AC, target not AC.
bool hack_succeeded(bool validator_ok, const std::optional<Verdict>& std_verdict,
                    const std::optional<Verdict>& target_verdict);

/// Judging context for one package. Compiled artifacts and oracle answers are
/// cached; all methods are safe to call from several threads.
class Judge {
  public:
    Judge(Sandbox& sandbox, ProblemPackage pkg);

    const ProblemPackage& package() const { return pkg_; }
    Sandbox& sandbox() { return sandbox_; }

    /// Throws COMPILE_ERROR / TOOLCHAIN_UNAVAILABLE.
    CompiledArtifact compiled(const Submission& s);
    CompiledArtifact compiled_tool(const ToolSource& tool);

    /// Uses the refined validator when present; no validator means VALID.
    ValidatorResult validate(std::string_view input);
    CheckerResult check(std::string_view input, std::string_view contestant_out, std::string_view jury_answer);

    struct OracleRun {
        Verdict verdict;
        Bytes output;
    };
    /// Runs S_std on input (cached per input).
    OracleRun oracle(std::string_view input);

    /// Jury answer for a suite test: stored .ans for original tests, else the oracle.
    /// Throws ORACLE_FAIL when the std solution fails.
    Bytes jury_answer(const TestCase& test);

    /// Verdict of s on a single test given its jury answer.
    Verdict run_on(const CompiledArtifact& bin, std::string_view input, std::string_view answer,
                   std::optional<std::size_t> index, TestRecord* record = nullptr);

    JudgeOutcome judge_submission(const Submission& s, std::span<const TestCase> suite);

    HackAttempt is_successful_hack(const TestCase& x, const Submission& target);

    /// S_target: AC locally and (labeled incorrect or not AC on the official suite).
    std::vector<Submission> identify_targets();

  private:
    Sandbox& sandbox_;
    ProblemPackage pkg_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<std::once_flag>> compile_once_;
    std::map<std::string, CompiledArtifact> artifacts_;
    std::map<std::string, std::string> compile_errors_;
    std::map<std::string, OracleRun> oracle_cache_;
};

}  // namespace hackforge
