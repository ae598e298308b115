#include "hackforge/analyst.hpp"

#include <algorithm>

#include "hackforge/error.hpp"

namespace hackforge {

using nlohmann::json;

Observation behavioral_probe(const Sandbox& sandbox, const CompiledArtifact& target, std::string_view probe_input,
                             const ResourceLimits& limits) {
    ExecutionResult r = sandbox.execute(target, probe_input, limits);
    Observation o;
    o.probe_input = Bytes(probe_input);
    o.run_status = classify_run(r, limits);
    o.output_prefix = r.stdout_data.substr(0, kObservationPrefix);
    o.note = r.exit.describe() + ", cpu " + std::to_string(r.cpu_time_ms) + " ms";
    if (!r.stderr_data.empty()) o.note += ", stderr: " + r.stderr_data.substr(0, 512);
    return o;
}

u128 harmonic_operation_count(std::uint64_t N) {
    u128 sum = 0;
    for (std::uint64_t i = 1; i <= N;) {
        std::uint64_t v = N / i;
        std::uint64_t j = N / v;
        sum += static_cast<u128>(v) * (j - i + 1);
        if (j == N) break;
        i = j + 1;
    }
    return sum;
}

bool binomial_exceeds_bound(std::uint64_t n, std::uint64_t k, const mpz_class& bound) {
    if (k > n) throw Error(Errc::InvariantViolation, "binomial needs 0 <= k <= n");
    const std::uint64_t kk = std::min(k, n - k);
    mpz_class c = 1;
    // C(n-kk+i, i) grows with i, so the first excess is final.
    for (std::uint64_t i = 1; i <= kk; ++i) {
        c *= static_cast<unsigned long>(n - kk + i);
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(i));
        if (c > bound) return true;
    }
    return c > bound;
}

std::string_view to_string(HackStrategy s) {
    switch (s) {
        case HackStrategy::Provider: return "PROVIDER";
        case HackStrategy::Stress: return "STRESS";
        case HackStrategy::Antihash: return "ANTIHASH";
    }
    return "?";
}

json HackPlan::to_json() const {
    json p = json::object();
    for (const auto& [k, v] : parameters) p[k] = v;
    return {{"hypothesis", hypothesis},
            {"target_verdict", to_string(target_verdict)},
            {"strategy", to_string(strategy)},
            {"parameters", p}};
}

std::string render_observations(const std::vector<Observation>& observations) {
    std::string out;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& o = observations[i];
        out += "probe " + std::to_string(i + 1) + ": status " + std::string(to_string(o.run_status)) + " (" + o.note +
               ")\ninput:\n" + o.probe_input.substr(0, 1024) + "\noutput:\n" + o.output_prefix.substr(0, 1024) + "\n";
    }
    return out;
}

namespace {

std::uint64_t parse_u64(const json& v, const char* what) {
    auto x = parse_uint_expression(v.get<std::string>());
    if (!x || *x > static_cast<u128>(UINT64_MAX)) throw Error(Errc::MalformedPlan, std::string("bad integer ") + what);
    return static_cast<std::uint64_t>(*x);
}

/// Decimal of any size, or an expression such as "2^63-1".
mpz_class parse_bound(const std::string& text) {
    mpz_class v;
    if (!text.empty() && v.set_str(text, 10) == 0) return v;
    if (auto x = parse_uint_expression(text)) return mpz_class(to_decimal(*x));
    throw Error(Errc::MalformedPlan, "bad integer bound " + text);
}

}  // namespace

HackPlan build_hack_plan(Judge& judge, const Submission& target, std::vector<Observation>& observations,
                         Provider& provider, const std::vector<HashCandidate>& hash_candidates,
                         const AnalystBudget& budget) {
    if (!hash_candidates.empty()) {
        HackPlan plan;
        plan.hypothesis = "equality decided by a polynomial rolling hash; two colliding strings give a wrong answer";
        plan.target_verdict = VerdictKind::WA;
        plan.strategy = HackStrategy::Antihash;
        const RollingHashSpec& spec = hash_candidates.front().spec;
        json j = spec.to_json();
        plan.parameters["spec"] = j.dump();
        plan.parameters["verified"] = hash_candidates.front().verified ? "true" : "false";
        return plan;
    }

    const ProblemPackage& pkg = judge.package();
    ResourceLimits probe_limits = pkg.limits.scaled_time(budget.probe_time_fraction);
    int probes_used = static_cast<int>(observations.size());
    std::string history;
    std::optional<CompiledArtifact> bin;

    for (int turn = 1; turn <= budget.max_turns; ++turn) {
        ProviderRequest req{RequestKind::CodeAnalysis,
                            {{"statement", pkg.statement}, {"target_source", target.source}}};
        if (!observations.empty()) req.payload["observations"] = render_observations(observations);
        if (!history.empty()) req.payload["history"] = history;
        ProviderResponse resp;
        try {
            resp = provider.respond(req);
        } catch (const Error& e) {
            if (e.code() == Errc::InvariantViolation) throw;
            throw Error(Errc::MalformedPlan, std::string("analysis dialogue failed: ") + e.what());
        }
        const json& c = resp.content;
        const std::string action = c["action"].get<std::string>();
        std::string tool_output;
        if (action == "run_cpp") {
            if (probes_used >= budget.max_probes) {
                tool_output = "probe budget exhausted";
            } else {
                if (!bin) bin = judge.compiled(target);
                ++probes_used;
                observations.push_back(behavioral_probe(judge.sandbox(), *bin, c["input"].get<std::string>(), probe_limits));
                const Observation& o = observations.back();
                tool_output = "status " + std::string(to_string(o.run_status)) + ", " + o.note + "\nstdout:\n" +
                              o.output_prefix;
            }
        } else if (action == "harmonic_operation_count") {
            std::uint64_t n = parse_u64(c["n"], "n");
            if (n < 1) throw Error(Errc::MalformedPlan, "harmonic_operation_count needs n >= 1");
            tool_output = to_decimal(harmonic_operation_count(n));
        } else if (action == "binomial_exceeds_bound") {
            std::uint64_t n = parse_u64(c["n"], "n"), k = parse_u64(c["k"], "k");
            if (k > n) throw Error(Errc::MalformedPlan, "binomial_exceeds_bound needs k <= n");
            mpz_class bound = parse_bound(c["bound"].get<std::string>());
            tool_output = binomial_exceeds_bound(n, k, bound) ? "true" : "false";
        } else {  // finish
            HackPlan plan;
            plan.hypothesis = c["report"].get<std::string>();
            if (plan.hypothesis.empty()) throw Error(Errc::MalformedPlan, "empty report");
            std::string v = c["target_verdict"].get<std::string>();
            if (v == "WA" || v == "RE" || v == "TLE" || v == "MLE")
                plan.target_verdict = verdict_kind_from_string(v);
            else
                throw Error(Errc::MalformedPlan, "target_verdict must be WA, RE, TLE or MLE");
            std::string s = c["strategy"].get<std::string>();
            if (s.empty() || s == "PROVIDER")
                plan.strategy = HackStrategy::Provider;
            else if (s == "STRESS")
                plan.strategy = HackStrategy::Stress;
            else
                throw Error(Errc::MalformedPlan, "strategy " + s + " not available without a detected hash");
            for (const auto& [k, val] : c["parameters"].items()) plan.parameters[k] = val.get<std::string>();
            return plan;
        }
        history += "[" + action + "] " + c["thought"].get<std::string>() + "\n[tool output] " + tool_output + "\n";
    }
    throw Error(Errc::MalformedPlan, "no finish report within " + std::to_string(budget.max_turns) + " turns");
}

}  // namespace hackforge
