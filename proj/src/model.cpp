#include "hackforge/model.hpp"

#include <cmath>

#include "hackforge/error.hpp"

namespace hackforge {

std::string_view to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::AC: return "AC";
        case VerdictKind::WA: return "WA";
        case VerdictKind::RE: return "RE";
        case VerdictKind::TLE: return "TLE";
        case VerdictKind::MLE: return "MLE";
        case VerdictKind::CE: return "CE";
        case VerdictKind::JudgeFail: return "JUDGE_FAIL";
    }
    return "?";
}

VerdictKind verdict_kind_from_string(std::string_view s) {
    for (auto k : {VerdictKind::AC, VerdictKind::WA, VerdictKind::RE, VerdictKind::TLE, VerdictKind::MLE,
                   VerdictKind::CE, VerdictKind::JudgeFail})
        if (to_string(k) == s) return k;
    throw Error(Errc::InvariantViolation, "unknown verdict '" + std::string(s) + "'");
}

Verdict Verdict::failed(VerdictKind kind, std::string detail, std::optional<std::size_t> index) {
    if (kind == VerdictKind::AC) throw Error(Errc::InvariantViolation, "Verdict::failed with AC");
    return {kind, std::move(detail), index};
}

void ResourceLimits::validate() const {
    if (time_limit_ms <= 0) throw Error(Errc::InvariantViolation, "time_limit_ms must be positive");
    if (memory_limit_mib <= 0) throw Error(Errc::InvariantViolation, "memory_limit_mib must be positive");
    if (output_limit_bytes <= 0) throw Error(Errc::InvariantViolation, "output_limit_bytes must be positive");
    if (!(wall_clock_multiplier >= 1.0)) throw Error(Errc::InvariantViolation, "wall_clock_multiplier must be >= 1");
}

std::int64_t ResourceLimits::wall_cap_ms() const {
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(time_limit_ms) * wall_clock_multiplier));
}

ResourceLimits ResourceLimits::scaled_time(double factor) const {
    ResourceLimits out = *this;
    out.time_limit_ms = std::max<std::int64_t>(1, static_cast<std::int64_t>(static_cast<double>(time_limit_ms) * factor));
    return out;
}

namespace {
std::size_t count_occurrences(std::string_view s, std::string_view needle) {
    std::size_t n = 0;
    for (std::size_t pos = s.find(needle); pos != std::string_view::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}
}  // namespace

void ToolchainSpec::validate() const {
    if (id.empty()) throw Error(Errc::InvariantViolation, "toolchain id is empty");
    if (count_occurrences(compile_template, "{src}") != 1 || count_occurrences(compile_template, "{out}") != 1)
        throw Error(Errc::InvariantViolation, "toolchain " + id + ": compile_template needs {src} and {out} exactly once");
    if (count_occurrences(run_template, "{bin}") != 1)
        throw Error(Errc::InvariantViolation, "toolchain " + id + ": run_template needs {bin}");
}

std::vector<ToolchainSpec> default_toolchains() {
    // The PE-only linker flag -Wl,--stack=268435456 is replaced by a 256 MiB
    // RLIMIT_STACK applied at execution time.
    return {
        {"gpp14", "g++ -static -DONLINE_JUDGE -O2 -std=c++14 {src} -o {out}", "{bin}", ".cpp"},
        {"gpp17", "g++ -static -DONLINE_JUDGE -O2 -std=c++17 {src} -o {out}", "{bin}", ".cpp"},
        {"gpp20", "g++ -Wall -Wextra -Wconversion -static -DONLINE_JUDGE -O2 -std=c++20 {src} -o {out}", "{bin}", ".cpp"},
        {"gpp23", "g++ -Wall -Wextra -Wconversion -static -DONLINE_JUDGE -O2 -std=c++23 {src} -o {out} -lstdc++exp", "{bin}",
         ".cpp"},
    };
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Original: return "ORIGINAL";
        case Provenance::Stress: return "STRESS";
        case Provenance::Provider: return "PROVIDER";
        case Provenance::Antihash: return "ANTIHASH";
        case Provenance::Probe: return "PROBE";
    }
    return "?";
}

Provenance provenance_from_string(std::string_view s) {
    for (auto p : {Provenance::Original, Provenance::Stress, Provenance::Provider, Provenance::Antihash, Provenance::Probe})
        if (to_string(p) == s) return p;
    throw Error(Errc::InvariantViolation, "unknown provenance '" + std::string(s) + "'");
}

const ToolSource* ProblemPackage::effective_validator() const {
    if (refined_validator) return &*refined_validator;
    return validator ? &*validator : nullptr;
}

const ToolSource* ProblemPackage::effective_checker() const {
    if (checker_mode == CheckerMode::TokenDiff) return nullptr;
    if (refined_checker) return &*refined_checker;
    return checker ? &*checker : nullptr;
}

const Submission* ProblemPackage::find_submission(std::string_view sid) const {
    if (std_solution.id == sid) return &std_solution;
    for (const auto& s : submissions)
        if (s.id == sid) return &s;
    return nullptr;
}

void ProblemPackage::validate() const {
    limits.validate();
    if (id.empty()) throw Error(Errc::InvariantViolation, "package id is empty");
    if (std_solution.ground_truth != GroundTruth::Correct)
        throw Error(Errc::InvariantViolation, "std solution must be labeled correct");
    if (checker_mode == CheckerMode::Custom && !checker)
        throw Error(Errc::InvariantViolation, "custom checker mode without checker source");
    if (checker_mode == CheckerMode::TokenDiff) {
        for (std::size_t i = 0; i < local_suite.size(); ++i)
            if (!local_suite[i].jury_answer)
                throw Error(Errc::InvariantViolation, "token_diff package: local test " + std::to_string(i) + " has no answer");
    }
    if (!allow_empty_input) {
        for (std::size_t i = 0; i < local_suite.size(); ++i)
            if (local_suite[i].input.empty())
                throw Error(Errc::InvariantViolation, "local test " + std::to_string(i) + " has empty input");
    }
    std::map<std::string, int> seen;
    for (const auto& s : submissions)
        if (++seen[s.id] > 1) throw Error(Errc::InvariantViolation, "duplicate submission id " + s.id);
}

LabelPartition partition_by_label(const ProblemPackage& pkg) {
    LabelPartition out;
    for (const auto& s : pkg.submissions) {
        if (!s.ground_truth)
            out.unlabeled.push_back(s);
        else if (*s.ground_truth == GroundTruth::Correct)
            out.positives.push_back(s);
        else
            out.negatives.push_back(s);
    }
    return out;
}

}  // namespace hackforge
