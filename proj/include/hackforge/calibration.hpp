#pragma once

// Validator and checker hardening: probe, classify, fix, repeat until K clean
// probes in a row.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hackforge/judge.hpp"
#include "hackforge/provider.hpp"

namespace hackforge {

enum class Flaw { FalsePositive, FalseNegative, None };
enum class ToolKind { Validator, Checker };
enum class Termination { CleanStreak, IterationCap, ProviderExhausted };

std::string_view to_string(Flaw f);
std::string_view to_string(ToolKind t);
std::string_view to_string(Termination t);

struct ValidatorProbe {
    Bytes x_valid;
    Bytes x_invalid;
    std::string rationale;

    /// Both inputs present and distinct; INVARIANT_VIOLATION otherwise.
    void validate() const;
    nlohmann::json to_json() const;
};

struct CheckerProbe {
    Bytes x_cand;
    Bytes y_wrong;
    Bytes y_true;
    std::string reasoning;

    /// y_wrong != y_true. Empty reasoning is left to cross-verification.
    void validate() const;
    nlohmann::json to_json() const;
};

struct FlawReport {
    Flaw flaw = Flaw::None;
    ToolKind tool = ToolKind::Validator;
    /// The probe element that tripped the tool; set iff flaw != None.
    std::optional<Bytes> witness;
    std::string detail;

    nlohmann::json to_json() const;
};

/// FP is decided before FN. Sandbox faults throw CALIBRATION_INFRA_FAIL.
FlawReport classify_validator_probe(const Sandbox& sandbox, const CompiledArtifact& validator,
                                    const ValidatorProbe& probe);

/// A checker crash on y_true counts as rejecting it.
FlawReport classify_checker_probe(const Sandbox& sandbox, const CompiledArtifact& checker, const CheckerProbe& probe,
                                  std::string_view jury_answer);

struct CrossVerifyResult {
    bool accepted = false;
    /// SMALL_SCALE, EXPLICIT_REASONING, CROSS_VERIFICATION or PROVIDER_ERROR.
    std::string reason;
    std::string detail;
};

CrossVerifyResult cross_verify_probe(const CheckerProbe& probe, const ProblemPackage& pkg, Provider& judge_provider,
                                     std::size_t small_scale_bytes = 256);

struct CalibrationConfig {
    int K = 3;
    int max_iter = 10;
    std::size_t small_scale_bytes = 256;
    std::size_t literal_limit_bytes = 64 * 1024;

    void validate() const;
};

struct CalibrationIteration {
    int index = 0;
    /// Probe as received (validator or checker shape); null if unusable.
    nlohmann::json probe;
    /// Set when the probe was classified.
    std::optional<FlawReport> report;
    /// Why the probe never reached classification.
    std::string rejected;
    /// sha256 of the tool source the probe was classified against.
    std::string tool_sha256;
    int consecutive_clean = 0;
};

struct CalibrationLog {
    ToolKind tool = ToolKind::Validator;
    std::string package_id;
    int K = 3;
    int max_iter = 10;
    std::vector<CalibrationIteration> iterations;
    int consecutive_clean = 0;
    Termination terminated_by = Termination::IterationCap;
    std::string initial_sha256;
    std::string final_sha256;
    /// Fix requests: iteration index, attempts used, resulting source hash.
    std::vector<nlohmann::json> fixes;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

struct CalibrationResult {
    ToolSource tool;
    CalibrationLog log;
};

/// Starts from the package's original validator. FROZEN sources come back
/// unchanged with zero iterations. Throws NOT_APPLICABLE without a validator,
/// FIX_DOES_NOT_COMPILE when a fix and its retry both fail to compile.
CalibrationResult refine_validator(Judge& judge, Provider& provider, const CalibrationConfig& cfg = {});

/// Like refine_validator; every probe must pass cross_verify_probe (asked of
/// judge_provider) before classification. Jury answers come from the std
/// solution. Throws NOT_APPLICABLE for TOKEN_DIFF packages, ORACLE_FAIL if the
/// std solution fails on a probe input.
CalibrationResult refine_checker(Judge& judge, Provider& provider, Provider& judge_provider,
                                 const CalibrationConfig& cfg = {});

/// Re-runs classification of every classified probe in log against tool.
std::vector<FlawReport> reclassify_log(Judge& judge, const ToolSource& tool, const CalibrationLog& log);

}  // namespace hackforge
