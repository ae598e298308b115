#include "hackforge/report.hpp"

namespace hackforge {

using nlohmann::json;

json to_json(const Verdict& v) {
    json j = {{"kind", to_string(v.kind)}, {"detail", v.detail}};
    j["test_index"] = v.test_index ? json(*v.test_index) : json(nullptr);
    return j;
}

json to_json(const JudgeOutcome& o) {
    json tests = json::array();
    for (const auto& t : o.per_test) {
        json r = {{"status", to_string(t.status)}};
        if (t.checker) r["checker"] = {{"outcome", to_string(t.checker->outcome)}, {"reason", t.checker->reason}};
        tests.push_back(std::move(r));
    }
    return {{"verdict", to_json(o.verdict)}, {"suite_size", o.used_suite_size}, {"tests", tests}};
}

json to_json(const HackAttempt& a, bool with_input) {
    json j = {{"target", a.target_id},
              {"strategy", to_string(a.strategy)},
              {"turn", a.turn},
              {"input_bytes", a.input.input.size()},
              {"input_sha256", sha256_hex(a.input.input)},
              {"validator_ok", a.validator_ok},
              {"validator_reason", a.validator_reason},
              {"success", a.success},
              {"note", a.note}};
    j["std_verdict"] = a.std_verdict ? to_json(*a.std_verdict) : json(nullptr);
    j["target_verdict"] = a.target_verdict ? to_json(*a.target_verdict) : json(nullptr);
    json meta = json::object();
    for (const auto& [k, v] : a.input.metadata) meta[k] = v;
    j["metadata"] = meta;
    if (with_input) j["input"] = a.input.input;
    return j;
}

json to_json(const CascadeResult& r) {
    json attempts = json::array();
    for (const auto& a : r.attempts) attempts.push_back(to_json(a));
    return {{"target", r.target_id},
            {"winning_stage", to_string(r.winning_stage)},
            {"success", r.winning_stage != Stage::None},
            {"turns_used", r.turns_used},
            {"plan", r.plan ? r.plan->to_json() : json(nullptr)},
            {"attempts", attempts},
            {"errors", r.errors},
            {"notes", r.notes}};
}

}  // namespace hackforge
