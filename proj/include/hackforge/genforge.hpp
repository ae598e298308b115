#pragma once

// Generator execution, stress campaigns, the ANTIHASH -> PROVIDER -> STRESS
// cascade, cross-application of hacks and suite augmentation.

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hackforge/analyst.hpp"
#include "hackforge/antihash.hpp"
#include "hackforge/judge.hpp"
#include "hackforge/provider.hpp"

namespace hackforge {

struct CampaignConfig {
    int trial_budget_T = 5;
    int stress_iterations = 200;
    bool dedup = true;
    /// Stress seeds are seed, seed + 1, ...
    std::uint64_t seed = 0;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::size_t literal_limit_bytes = 64 * 1024;
    AntihashConfig antihash;
    AnalystBudget analyst;

    void validate() const;
};

enum class Stage { Provider, Stress, Antihash, None };

std::string_view to_string(Stage s);

struct CascadeResult {
    std::string target_id;
    std::vector<HackAttempt> attempts;
    Stage winning_stage = Stage::None;
    int turns_used = 0;
    std::optional<HackPlan> plan;
    /// Stage and provider errors, in order of occurrence.
    std::vector<std::string> errors;
    /// Human-readable trace of stage decisions.
    std::vector<std::string> notes;

    const HackAttempt* winning_attempt() const;
};

/// Compiles and runs gen (argv seed per strategy), then validates the output
/// with the effective validator. Throws GENERATOR_CE, GENERATOR_RE,
/// GENERATOR_INVALID_OUTPUT.
TestCase run_generator(Judge& judge, const GeneratorProgram& gen, std::int64_t seed, Provenance provenance);

/// Provider content {test_input} or {generator} as test bytes. Literals over
/// the limit throw LITERAL_TOO_LARGE. The result is not validated.
Bytes materialize_input(Judge& judge, const nlohmann::json& content, std::size_t literal_limit);

/// Seeds cfg.seed + i for i < stress_iterations; stops at the first success.
/// Generation failures are collected in errors; if every iteration failed,
/// throws CAMPAIGN_STALLED.
std::vector<HackAttempt> stress_campaign(Judge& judge, const Submission& target, const GeneratorProgram& gen,
                                         const CampaignConfig& cfg, std::vector<std::string>* errors = nullptr);

CascadeResult cascade_hack(Judge& judge, const Submission& target, Provider& provider, const CampaignConfig& cfg);

/// matrix[case][submission]; per-cell errors are recorded in the attempt note.
std::vector<std::vector<HackAttempt>> cross_apply(Judge& judge, const std::vector<TestCase>& cases,
                                                  const std::vector<Submission>& submissions, std::size_t workers);

struct AugmentResult {
    ProblemPackage package;
    std::vector<std::string> dropped;
    std::size_t added = 0;
};

/// Drops original tests the effective validator rejects, appends hack inputs
/// (deduplicated by bytes) with answers from the std solution. Throws
/// INVARIANT_VIOLATION if an attempt is not a success.
AugmentResult augment_suite(Judge& judge, const std::vector<HackAttempt>& successful, bool dedup = true);

/// "{a}"/"{b}" substitution; default template "{a}\n{b}\n".
Bytes render_collision_input(const std::string& tmpl, const CollisionPair& pair);

}  // namespace hackforge
