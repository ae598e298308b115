#include "hackforge/metrics.hpp"

#include <numeric>

#include "hackforge/error.hpp"

namespace hackforge {

using nlohmann::json;

Ratio Ratio::of(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(Errc::InvariantViolation, "zero denominator");
    if (den < 0) num = -num, den = -den;
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
}

std::string Ratio::fixed2() const {
    bool neg = num < 0;
    std::int64_t a = neg ? -num : num;
    std::int64_t hundredths = (200 * a + den) / (2 * den);
    std::string frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac = "0" + frac;
    return std::string(neg && hundredths ? "-" : "") + std::to_string(hundredths / 100) + "." + frac;
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    __int128 l = static_cast<__int128>(a.num) * b.den, r = static_cast<__int128>(b.num) * a.den;
    return l < r ? std::strong_ordering::less : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
}

json rate_to_json(const Rate& r) {
    if (!r) return "UNDEFINED";
    return {{"numerator", r->num}, {"denominator", r->den}, {"decimal", r->fixed2()}};
}

namespace {

Rate rate(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return Ratio::of(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Classification compute_classification(const std::vector<LabeledOutcome>& outcomes) {
    Classification c;
    std::size_t accepted_pos = 0, rejected_neg = 0;
    for (const auto& o : outcomes) {
        if (o.ground_truth == GroundTruth::Correct) {
            ++c.positives;
            accepted_pos += o.new_verdict.is_ac();
        } else {
            ++c.negatives;
            rejected_neg += !o.new_verdict.is_ac();
        }
    }
    c.tpr = rate(accepted_pos, c.positives);
    c.tnr = rate(rejected_neg, c.negatives);
    return c;
}

Ratio compute_vpr(const Sandbox& sandbox, const CompiledArtifact& validator, const std::vector<TestCase>& suite) {
    if (suite.empty()) throw Error(Errc::EmptySuite, "VPR needs at least one test");
    std::size_t ok = 0;
    for (const auto& t : suite) ok += run_validator(sandbox, validator, t.input).valid;
    return *rate(ok, suite.size());
}

Ratio compute_vpr(Judge& judge, const std::vector<TestCase>& suite) {
    if (suite.empty()) throw Error(Errc::EmptySuite, "VPR needs at least one test");
    std::size_t ok = 0;
    for (const auto& t : suite) ok += judge.validate(t.input).valid;
    return *rate(ok, suite.size());
}

HsrResult compute_hsr(const std::vector<CascadeResult>& results) {
    HsrResult h;
    h.targets = results.size();
    std::size_t provider_wins = 0;
    std::int64_t turns = 0;
    for (const auto& r : results) {
        if (r.winning_stage == Stage::None) continue;
        ++h.successes;
        if (r.winning_stage == Stage::Provider) {
            ++provider_wins;
            turns += r.turns_used;
        }
    }
    h.hsr = rate(h.successes, h.targets);
    if (provider_wins) h.avg_turns = Ratio::of(turns, static_cast<std::int64_t>(provider_wins));
    return h;
}

std::vector<LabeledOutcome> evaluate_suite(Judge& judge, const std::vector<TestCase>& suite) {
    std::vector<LabeledOutcome> out;
    for (const auto& s : judge.package().submissions) {
        if (!s.ground_truth) continue;
        out.push_back({s.id, *s.ground_truth, judge.judge_submission(s, suite).verdict});
    }
    return out;
}

json MetricsReport::to_json() const {
    return {{"package", package_id},
            {"suite", suite},
            {"tpr", rate_to_json(classification.tpr)},
            {"tnr", rate_to_json(classification.tnr)},
            {"vpr", rate_to_json(vpr)},
            {"hsr", rate_to_json(hsr.hsr)},
            {"avg_turns", rate_to_json(hsr.avg_turns)},
            {"counts",
             {{"positives", classification.positives},
              {"negatives", classification.negatives},
              {"tests", suite_size},
              {"targets", hsr.targets},
              {"successes", hsr.successes}}}};
}

}  // namespace hackforge
