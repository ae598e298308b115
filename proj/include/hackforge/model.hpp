#pragma once

// Canonical data model: verdicts, limits, toolchains, tests, submissions and
// problem packages.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hackforge/util.hpp"

namespace hackforge {

enum class VerdictKind { AC, WA, RE, TLE, MLE, CE, JudgeFail };

std::string_view to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(std::string_view s);

struct Verdict {
    VerdictKind kind = VerdictKind::AC;
    std::string detail;
    /// 0-based index of the first failing test. Never set for AC.
    std::optional<std::size_t> test_index;

    static Verdict accepted(std::string detail = {}) { return {VerdictKind::AC, std::move(detail), std::nullopt}; }
    static Verdict failed(VerdictKind kind, std::string detail, std::optional<std::size_t> index = std::nullopt);

    bool is_ac() const { return kind == VerdictKind::AC; }
    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct ResourceLimits {
    std::int64_t time_limit_ms = 1000;
    std::int64_t memory_limit_mib = 256;
    /// Hard wall-clock kill happens at multiplier * time_limit_ms.
    double wall_clock_multiplier = 2.0;
    std::int64_t output_limit_bytes = 64LL << 20;

    void validate() const;
    std::int64_t wall_cap_ms() const;
    ResourceLimits scaled_time(double factor) const;
    friend bool operator==(const ResourceLimits&, const ResourceLimits&) = default;
};

struct ToolchainSpec {
    std::string id;
    std::string compile_template;  ///< contains {src} and {out} exactly once
    std::string run_template = "{bin}";
    std::string source_extension = ".cpp";

    void validate() const;
};

/// Host adaptations of the four Codeforces GNU C++ configurations.
std::vector<ToolchainSpec> default_toolchains();

enum class Provenance { Original, Stress, Provider, Antihash, Probe };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

class TestCase {
  public:
    TestCase(Bytes input, Provenance provenance, std::optional<Bytes> jury_answer = std::nullopt,
             std::map<std::string, std::string> metadata = {})
        : input(std::move(input)),
          jury_answer(std::move(jury_answer)),
          metadata(std::move(metadata)),
          provenance_(provenance) {}

    Bytes input;
    std::optional<Bytes> jury_answer;
    std::map<std::string, std::string> metadata;

    Provenance provenance() const { return provenance_; }

  private:
    Provenance provenance_;
};

enum class GroundTruth { Correct, Incorrect };

struct Submission {
    std::string id;
    std::string source;
    std::string toolchain_id;
    std::optional<GroundTruth> ground_truth;
    /// Path relative to the package root; used when saving.
    std::string source_path;
};

/// A validator, checker or generator source shipped with a package.
struct ToolSource {
    std::string source;
    std::string toolchain_id = "gpp17";
    std::string path;
    /// Pinned by a human expert; calibration returns it unchanged.
    bool frozen = false;
};

enum class CheckerMode { TokenDiff, Custom };

enum class SeedStrategy { SelfSeeded, ArgvSeed };

struct GeneratorProgram {
    std::string source;
    std::string toolchain_id = "gpp17";
    SeedStrategy seed_strategy = SeedStrategy::ArgvSeed;
    std::string path;
};

struct ProblemPackage {
    std::string id;
    std::string statement;
    ResourceLimits limits;
    Submission std_solution;
    std::optional<ToolSource> validator;
    CheckerMode checker_mode = CheckerMode::TokenDiff;
    std::optional<ToolSource> checker;
    std::vector<TestCase> local_suite;
    std::optional<std::vector<TestCase>> official_suite;
    std::vector<Submission> submissions;

    /// Outputs of calibration, picked up from calibration/ when present.
    std::optional<ToolSource> refined_validator;
    std::optional<ToolSource> refined_checker;

    std::optional<GeneratorProgram> stress_generator;
    /// Input template for collision inputs; {a} and {b} are replaced.
    std::optional<std::string> antihash_template;
    bool allow_empty_input = false;

    const ToolSource* effective_validator() const;
    const ToolSource* effective_checker() const;
    const Submission* find_submission(std::string_view id) const;

    /// Throws INVARIANT_VIOLATION when a type invariant does not hold.
    void validate() const;
};

struct LabelPartition {
    std::vector<Submission> positives;
    std::vector<Submission> negatives;
    std::vector<Submission> unlabeled;
};

LabelPartition partition_by_label(const ProblemPackage& pkg);

}  // namespace hackforge
