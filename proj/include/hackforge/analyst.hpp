#pragma once

// Behavioral probing of a target, exact numeric helpers, and the multi-turn
// CODE_ANALYSIS dialogue that turns both into a hack plan.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "hackforge/antihash.hpp"
#include "hackforge/judge.hpp"
#include "hackforge/provider.hpp"

namespace hackforge {

struct Observation {
    Bytes probe_input;
    RunStatus run_status = RunStatus::OK;
    /// First 4 KiB of stdout.
    Bytes output_prefix;
    std::string note;
};

constexpr std::size_t kObservationPrefix = 4096;

Observation behavioral_probe(const Sandbox& sandbox, const CompiledArtifact& target, std::string_view probe_input,
                             const ResourceLimits& limits);

/// sum_{i=1}^{N} floor(N / i), exact, O(sqrt N).
u128 harmonic_operation_count(std::uint64_t N);

/// C(n, k) > bound, exact. Throws INVARIANT_VIOLATION unless 0 <= k <= n.
bool binomial_exceeds_bound(std::uint64_t n, std::uint64_t k, const mpz_class& bound);

enum class HackStrategy { Provider, Stress, Antihash };

std::string_view to_string(HackStrategy s);

struct HackPlan {
    std::string hypothesis;
    VerdictKind target_verdict = VerdictKind::WA;
    HackStrategy strategy = HackStrategy::Provider;
    std::map<std::string, std::string> parameters;

    nlohmann::json to_json() const;
};

struct AnalystBudget {
    int max_probes = 8;
    /// Probe time limit as a fraction of the problem time limit.
    double probe_time_fraction = 0.1;
    /// CODE_ANALYSIS requests per plan, including the final one.
    int max_turns = 12;
};

/// With hash candidates the plan is ANTIHASH and no provider call is made.
/// Otherwise runs the CODE_ANALYSIS dialogue; probes issued by the provider
/// are appended to observations. Any provider failure or unusable finish
/// report surfaces as MALFORMED_PLAN.
HackPlan build_hack_plan(Judge& judge, const Submission& target, std::vector<Observation>& observations,
                         Provider& provider, const std::vector<HashCandidate>& hash_candidates = {},
                         const AnalystBudget& budget = {});

std::string render_observations(const std::vector<Observation>& observations);

}  // namespace hackforge
