#pragma once

// Suite-quality and campaign metrics as exact rationals.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hackforge/genforge.hpp"
#include "hackforge/judge.hpp"

namespace hackforge {

/// Reduced fraction with positive denominator.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Ratio of(std::int64_t num, std::int64_t den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    /// Decimal with two places, half away from zero, computed exactly.
    std::string fixed2() const;

    friend bool operator==(const Ratio& a, const Ratio& b) { return a.num == b.num && a.den == b.den; }
    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);
};

/// nullopt means UNDEFINED (empty denominator population).
using Rate = std::optional<Ratio>;

/// {"numerator", "denominator", "decimal"} or the string "UNDEFINED".
nlohmann::json rate_to_json(const Rate& r);

struct LabeledOutcome {
    std::string submission_id;
    GroundTruth ground_truth = GroundTruth::Correct;
    Verdict new_verdict;
};

struct Classification {
    Rate tpr;
    Rate tnr;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

Classification compute_classification(const std::vector<LabeledOutcome>& outcomes);

/// Fraction of suite inputs the validator accepts. Throws EMPTY_SUITE.
Ratio compute_vpr(const Sandbox& sandbox, const CompiledArtifact& validator, const std::vector<TestCase>& suite);
/// Same, through the judge's effective validator.
Ratio compute_vpr(Judge& judge, const std::vector<TestCase>& suite);

struct HsrResult {
    Rate hsr;
    /// Over successful PROVIDER-stage hacks only.
    Rate avg_turns;
    std::size_t targets = 0;
    std::size_t successes = 0;
};

HsrResult compute_hsr(const std::vector<CascadeResult>& results);

/// Judges every labeled submission on suite.
std::vector<LabeledOutcome> evaluate_suite(Judge& judge, const std::vector<TestCase>& suite);

struct MetricsReport {
    std::string package_id;
    std::string suite;
    Classification classification;
    std::optional<Ratio> vpr;
    HsrResult hsr;
    std::size_t suite_size = 0;

    nlohmann::json to_json() const;
};

}  // namespace hackforge
