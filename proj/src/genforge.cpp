#include "hackforge/genforge.hpp"

#include <set>

#include "hackforge/error.hpp"

namespace hackforge {

using nlohmann::json;

void CampaignConfig::validate() const {
    if (trial_budget_T < 1) throw Error(Errc::InvariantViolation, "trial_budget_T must be >= 1");
    if (stress_iterations < 0) throw Error(Errc::InvariantViolation, "stress_iterations must be >= 0");
}

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::Provider: return "PROVIDER";
        case Stage::Stress: return "STRESS";
        case Stage::Antihash: return "ANTIHASH";
        case Stage::None: return "NONE";
    }
    return "?";
}

const HackAttempt* CascadeResult::winning_attempt() const {
    for (const auto& a : attempts)
        if (a.success) return &a;
    return nullptr;
}

TestCase run_generator(Judge& judge, const GeneratorProgram& gen, std::int64_t seed, Provenance provenance) {
    CompiledArtifact bin;
    try {
        bin = judge.compiled_tool(ToolSource{gen.source, gen.toolchain_id, gen.path, false});
    } catch (const Error& e) {
        if (e.code() == Errc::CompileError) throw Error(Errc::GeneratorCE, e.detail());
        throw;
    }
    ExecOptions opts;
    if (gen.seed_strategy == SeedStrategy::ArgvSeed) opts.args = {std::to_string(seed)};
    ExecutionResult r = judge.sandbox().execute(bin, "", tool_limits(), opts);
    if (r.wall_killed || !r.exit.is_clean_exit())
        throw Error(Errc::GeneratorRE, "seed " + std::to_string(seed) + ": " +
                                           (r.wall_killed ? std::string("timed out") : r.exit.describe()));
    if (r.truncated) throw Error(Errc::GeneratorRE, "seed " + std::to_string(seed) + ": output limit exceeded");
    ValidatorResult v = judge.validate(r.stdout_data);
    if (!v.valid) throw Error(Errc::GeneratorInvalidOutput, "seed " + std::to_string(seed) + ": " + v.reason);
    return TestCase(std::move(r.stdout_data), provenance, std::nullopt, {{"seed", std::to_string(seed)}});
}

Bytes materialize_input(Judge& judge, const json& content, std::size_t literal_limit) {
    if (content.contains("test_input")) {
        Bytes input = content["test_input"].get<std::string>();
        if (input.size() > literal_limit)
            throw Error(Errc::LiteralTooLarge, std::to_string(input.size()) + " bytes; emit a generator program instead");
        return input;
    }
    GeneratorProgram gen;
    gen.source = content.at("generator").get<std::string>();
    gen.seed_strategy = SeedStrategy::SelfSeeded;
    CompiledArtifact bin;
    try {
        bin = judge.compiled_tool(ToolSource{gen.source, gen.toolchain_id, "", false});
    } catch (const Error& e) {
        if (e.code() == Errc::CompileError) throw Error(Errc::GeneratorCE, e.detail());
        throw;
    }
    ExecutionResult r = judge.sandbox().execute(bin, "", tool_limits());
    if (r.wall_killed || !r.exit.is_clean_exit() || r.truncated)
        throw Error(Errc::GeneratorRE, r.wall_killed ? std::string("timed out") : r.exit.describe());
    return std::move(r.stdout_data);
}

std::vector<HackAttempt> stress_campaign(Judge& judge, const Submission& target, const GeneratorProgram& gen,
                                         const CampaignConfig& cfg, std::vector<std::string>* errors) {
    cfg.validate();
    std::vector<HackAttempt> attempts;
    int generated = 0;
    for (int i = 0; i < cfg.stress_iterations; ++i) {
        std::int64_t seed = static_cast<std::int64_t>(cfg.seed) + i;
        TestCase tc(Bytes{}, Provenance::Stress);
        try {
            tc = run_generator(judge, gen, seed, Provenance::Stress);
        } catch (const Error& e) {
            if (e.code() == Errc::GeneratorCE) throw;
            if (errors) errors->push_back(e.what());
            continue;
        }
        ++generated;
        HackAttempt a = judge.is_successful_hack(tc, target);
        a.turn = i + 1;
        attempts.push_back(std::move(a));
        if (attempts.back().success) break;
    }
    if (generated == 0 && cfg.stress_iterations > 0)
        throw Error(Errc::CampaignStalled, "no generator run produced a valid test in " +
                                               std::to_string(cfg.stress_iterations) + " iterations");
    return attempts;
}

Bytes render_collision_input(const std::string& tmpl, const CollisionPair& pair) {
    return replace_all(replace_all(tmpl.empty() ? "{a}\n{b}\n" : tmpl, "{a}", pair.a), "{b}", pair.b);
}

namespace {

std::string summarize_attempt(const HackAttempt& a) {
    std::string in = a.input.input.size() > 200 ? a.input.input.substr(0, 200) + "..." : a.input.input;
    std::string out = "turn " + std::to_string(a.turn) + ": input\n" + in + "\n";
    if (!a.validator_ok) return out + "rejected by the validator: " + a.validator_reason + "\n";
    if (a.std_verdict && !a.std_verdict->is_ac()) return out + "reference solution failed: " + a.std_verdict->detail + "\n";
    if (a.target_verdict) return out + "target verdict " + std::string(to_string(a.target_verdict->kind)) + "\n";
    return out + a.note + "\n";
}

bool provider_stage_over(const Error& e) {
    return e.code() == Errc::TranscriptExhausted || e.code() == Errc::KindMismatch || e.code() == Errc::TransportError;
}

}  // namespace

CascadeResult cascade_hack(Judge& judge, const Submission& target, Provider& provider, const CampaignConfig& cfg) {
    cfg.validate();
    const ProblemPackage& pkg = judge.package();
    CascadeResult result;
    result.target_id = target.id;

    // Hash detection only runs on sources with a recognizable mul-add loop.
    std::vector<HashCandidate> candidates;
    if (has_hash_pattern(target.source)) {
        try {
            candidates = detect_hash_spec(target.source, &provider, pkg.statement);
            result.notes.push_back("hash candidates: " + std::to_string(candidates.size()));
        } catch (const Error& e) {
            result.errors.push_back(std::string("hash detection: ") + e.what());
        }
    }

    std::vector<Observation> observations;
    try {
        CompiledArtifact bin = judge.compiled(target);
        if (!pkg.local_suite.empty()) {
            const TestCase* smallest = &pkg.local_suite.front();
            for (const auto& t : pkg.local_suite)
                if (t.input.size() < smallest->input.size()) smallest = &t;
            observations.push_back(
                behavioral_probe(judge.sandbox(), bin, smallest->input, pkg.limits.scaled_time(cfg.analyst.probe_time_fraction)));
        }
    } catch (const Error& e) {
        result.errors.push_back(std::string("initial probe: ") + e.what());
    }

    try {
        result.plan = build_hack_plan(judge, target, observations, provider, candidates, cfg.analyst);
        result.notes.push_back("plan: " + std::string(to_string(result.plan->strategy)) + ", " + result.plan->hypothesis);
    } catch (const Error& e) {
        if (e.code() != Errc::MalformedPlan) throw;
        result.errors.push_back(e.what());
        result.notes.push_back("no usable plan; falling back to STRESS");
    }
    HackStrategy strategy = result.plan ? result.plan->strategy : HackStrategy::Stress;

    std::optional<CollisionPair> collision;
    if (strategy == HackStrategy::Antihash) {
        std::string tmpl = pkg.antihash_template.value_or("{a}\n{b}\n");
        if (result.plan->parameters.count("input_template")) tmpl = result.plan->parameters.at("input_template");
        for (const auto& cand : candidates) {
            std::vector<RollingHashSpec> specs{cand.spec};
            if (!cand.verified) {
                RollingHashSpec flipped = cand.spec;
                flipped.orientation =
                    cand.spec.orientation == Orientation::LowFirst ? Orientation::HighFirst : Orientation::LowFirst;
                specs.push_back(flipped);
            }
            for (const auto& spec : specs) {
                try {
                    CollisionPair pair = find_collision(spec, cfg.antihash);
                    collision = pair;
                    TestCase tc(render_collision_input(tmpl, pair), Provenance::Antihash, std::nullopt,
                                {{"spec", spec.to_json().dump()}});
                    HackAttempt a = judge.is_successful_hack(tc, target);
                    result.attempts.push_back(a);
                    if (a.success) {
                        result.winning_stage = Stage::Antihash;
                        return result;
                    }
                } catch (const Error& e) {
                    result.errors.push_back(std::string("antihash: ") + e.what());
                }
            }
        }
        result.notes.push_back("ANTIHASH stage exhausted");
    }

    if (strategy != HackStrategy::Stress) {
        std::string prior;
        for (int turn = 1; turn <= cfg.trial_budget_T; ++turn) {
            ProviderRequest req{RequestKind::HackGenerator,
                                {{"statement", pkg.statement}, {"target_source", target.source}}};
            if (result.plan) req.payload["analysis"] = result.plan->hypothesis;
            if (!prior.empty()) req.payload["prior_attempts"] = prior;
            if (collision) req.payload["hash_collision"] = collision->a + "\n" + collision->b;
            ProviderResponse resp;
            try {
                resp = provider.respond(req);
            } catch (const Error& e) {
                if (e.code() == Errc::InvariantViolation) throw;
                result.errors.push_back("turn " + std::to_string(turn) + ": " + e.what());
                if (provider_stage_over(e)) break;
                result.turns_used = turn;
                continue;
            }
            result.turns_used = turn;
            Bytes input;
            try {
                input = materialize_input(judge, resp.content, cfg.literal_limit_bytes);
            } catch (const Error& e) {
                result.errors.push_back("turn " + std::to_string(turn) + ": " + e.what());
                prior += "turn " + std::to_string(turn) + ": " + e.what() + "\n";
                continue;
            }
            TestCase tc(std::move(input), Provenance::Provider, std::nullopt, {{"turn", std::to_string(turn)}});
            HackAttempt a = judge.is_successful_hack(tc, target);
            a.turn = turn;
            result.attempts.push_back(a);
            if (a.success) {
                result.winning_stage = Stage::Provider;
                return result;
            }
            prior += summarize_attempt(a);
        }
        result.notes.push_back("PROVIDER stage exhausted after " + std::to_string(result.turns_used) + " turns");
    }

    if (!pkg.stress_generator) {
        result.errors.push_back("stress: package has no stress generator");
        return result;
    }
    try {
        std::vector<std::string> errors;
        auto attempts = stress_campaign(judge, target, *pkg.stress_generator, cfg, &errors);
        for (auto& e : errors) result.errors.push_back("stress: " + e);
        for (auto& a : attempts) {
            bool win = a.success;
            result.attempts.push_back(std::move(a));
            if (win) {
                result.winning_stage = Stage::Stress;
                return result;
            }
        }
        result.notes.push_back("STRESS stage exhausted after " + std::to_string(attempts.size()) + " attempts");
    } catch (const Error& e) {
        result.errors.push_back(std::string("stress: ") + e.what());
    }
    return result;
}

std::vector<std::vector<HackAttempt>> cross_apply(Judge& judge, const std::vector<TestCase>& cases,
                                                  const std::vector<Submission>& submissions, std::size_t workers) {
    std::vector<std::vector<HackAttempt>> matrix(cases.size(), std::vector<HackAttempt>(submissions.size()));
    if (cases.empty() || submissions.empty()) return matrix;
    // Warm the oracle cache once per case so cells never race on the same input.
    parallel_for(cases.size(), workers, [&](std::size_t i) { judge.oracle(cases[i].input); });
    const std::size_t cols = submissions.size();
    parallel_for(cases.size() * cols, workers, [&](std::size_t cell) {
        std::size_t i = cell / cols, j = cell % cols;
        try {
            matrix[i][j] = judge.is_successful_hack(cases[i], submissions[j]);
        } catch (const std::exception& e) {
            HackAttempt a;
            a.target_id = submissions[j].id;
            a.input = cases[i];
            a.note = std::string("ERROR: ") + e.what();
            matrix[i][j] = std::move(a);
        }
    });
    return matrix;
}

AugmentResult augment_suite(Judge& judge, const std::vector<HackAttempt>& successful, bool dedup) {
    for (const auto& a : successful)
        if (!a.success) throw Error(Errc::InvariantViolation, "augment_suite takes successful attempts only");
    AugmentResult out;
    out.package = judge.package();
    std::vector<TestCase> suite;
    std::set<Bytes> seen;
    for (std::size_t i = 0; i < judge.package().local_suite.size(); ++i) {
        const TestCase& t = judge.package().local_suite[i];
        ValidatorResult v = judge.validate(t.input);
        std::string name = t.metadata.count("file") ? t.metadata.at("file") : zero_pad(i + 1, 3) + ".in";
        if (!v.valid) {
            out.dropped.push_back(name + ": " + v.reason);
            continue;
        }
        if (dedup && !seen.insert(t.input).second) {
            out.dropped.push_back(name + ": duplicate input");
            continue;
        }
        suite.push_back(t);
    }
    for (const auto& a : successful) {
        if (dedup && !seen.insert(a.input.input).second) continue;
        Judge::OracleRun run = judge.oracle(a.input.input);
        if (!run.verdict.is_ac()) throw Error(Errc::OracleFail, run.verdict.detail);
        auto meta = a.input.metadata;
        meta["target"] = a.target_id;
        suite.emplace_back(a.input.input, a.input.provenance(), run.output, std::move(meta));
        ++out.added;
    }
    out.package.local_suite = std::move(suite);
    return out;
}

}  // namespace hackforge
