#include "hackforge/provider.hpp"

#include <condition_variable>
#include <cstdlib>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "hackforge/error.hpp"
#include "hackforge/util.hpp"

namespace hackforge {

using nlohmann::json;

namespace {

constexpr std::pair<RequestKind, std::string_view> kKindNames[] = {
    {RequestKind::ValidatorProbe, "VALIDATOR_PROBE"}, {RequestKind::ValidatorFix, "VALIDATOR_FIX"},
    {RequestKind::CheckerProbe, "CHECKER_PROBE"},     {RequestKind::CheckerFix, "CHECKER_FIX"},
    {RequestKind::CodeAnalysis, "CODE_ANALYSIS"},     {RequestKind::HackGenerator, "HACK_GENERATOR"},
    {RequestKind::HashSpecExtract, "HASH_SPEC_EXTRACT"}, {RequestKind::CrossVerify, "CROSS_VERIFY"},
};

[[noreturn]] void malformed(const std::string& why, const std::string& raw) {
    throw Error(Errc::MalformedResponse, why + "\n--- raw ---\n" + raw);
}

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Contents of fenced blocks, with their language tags.
std::vector<std::pair<std::string, std::string>> fenced_blocks(const std::string& raw) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t pos = 0;
    while ((pos = raw.find("```", pos)) != std::string::npos) {
        std::size_t eol = raw.find('\n', pos);
        if (eol == std::string::npos) break;
        std::string lang = trim(std::string_view(raw).substr(pos + 3, eol - pos - 3));
        std::size_t end = raw.find("```", eol + 1);
        if (end == std::string::npos) break;
        out.emplace_back(lang, raw.substr(eol + 1, end - eol - 1));
        pos = end + 3;
    }
    return out;
}

std::optional<json> extract_json(const std::string& raw) {
    auto try_parse = [](const std::string& text) -> std::optional<json> {
        json j = json::parse(text, nullptr, false, true);
        if (j.is_discarded() || !j.is_object()) return std::nullopt;
        return j;
    };
    if (auto j = try_parse(trim(raw))) return j;
    for (const auto& [lang, body] : fenced_blocks(raw))
        if (lang.empty() || lang == "json")
            if (auto j = try_parse(body)) return j;
    std::size_t b = raw.find('{'), e = raw.rfind('}');
    if (b != std::string::npos && e != std::string::npos && e > b)
        if (auto j = try_parse(raw.substr(b, e - b + 1))) return j;
    return std::nullopt;
}

std::optional<std::string> extract_code(const std::string& raw) {
    for (const auto& [lang, body] : fenced_blocks(raw))
        if (lang == "cpp" || lang == "c++" || lang == "cc" || lang == "C++") return body;
    return std::nullopt;
}

std::string string_field(const json& obj, const char* name, const std::string& raw, bool required = true) {
    if (!obj.contains(name) || obj[name].is_null()) {
        if (required) malformed(std::string("missing field \"") + name + "\"", raw);
        return {};
    }
    if (!obj[name].is_string()) malformed(std::string("field \"") + name + "\" must be a string", raw);
    return obj[name].get<std::string>();
}

std::string bug_type(const json& c, const std::string& raw) {
    std::string t = string_field(c, "bug_type", raw);
    for (auto& ch : t) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    t = replace_all(t, " ", "_");
    if (t != "false_positive" && t != "false_negative") malformed("bug_type must be false_positive or false_negative", raw);
    return t;
}

json parse_validator_probe(const json& j, const std::string& raw) {
    if (!j.contains("test_cases") || !j["test_cases"].is_array() || j["test_cases"].empty())
        malformed("missing non-empty \"test_cases\" array", raw);
    json cases = json::array();
    bool fp = false, fn = false;
    for (const auto& c : j["test_cases"]) {
        if (!c.is_object()) malformed("test case must be an object", raw);
        json out = {{"bug_type", bug_type(c, raw)}, {"strategy", string_field(c, "strategy", raw, false)}};
        bool has_input = c.contains("test_input") && !c["test_input"].is_null();
        bool has_gen = c.contains("generator") && !c["generator"].is_null();
        if (has_input == has_gen) malformed("each test case needs exactly one of \"test_input\" or \"generator\"", raw);
        if (has_input)
            out["test_input"] = string_field(c, "test_input", raw);
        else
            out["generator"] = string_field(c, "generator", raw);
        (out["bug_type"] == "false_positive" ? fp : fn) = true;
        cases.push_back(std::move(out));
    }
    if (!fp || !fn) malformed("probe needs one false_positive and one false_negative case", raw);
    return {{"test_cases", cases}};
}

json parse_checker_probe(const json& j, const std::string& raw) {
    if (!j.contains("test_cases") || !j["test_cases"].is_array() || j["test_cases"].empty())
        malformed("missing non-empty \"test_cases\" array", raw);
    json cases = json::array();
    bool fp = false, fn = false;
    std::optional<std::string> input;
    std::string reasoning = string_field(j, "reasoning", raw, false);
    for (const auto& c : j["test_cases"]) {
        if (!c.is_object()) malformed("test case must be an object", raw);
        json out = {{"bug_type", bug_type(c, raw)},
                    {"strategy", string_field(c, "strategy", raw, false)},
                    {"test_input", string_field(c, "test_input", raw)},
                    {"fake_output", string_field(c, "fake_output", raw)}};
        if (input && *input != out["test_input"]) malformed("both probe halves must share one test_input", raw);
        input = out["test_input"].get<std::string>();
        if (reasoning.empty()) reasoning = string_field(c, "reasoning", raw, false);
        (out["bug_type"] == "false_positive" ? fp : fn) = true;
        cases.push_back(std::move(out));
    }
    if (!fp || !fn) malformed("probe needs one false_positive and one false_negative case", raw);
    return {{"test_cases", cases}, {"reasoning", reasoning}};
}

json parse_source(const std::optional<json>& j, const std::string& raw) {
    if (j && j->contains("source")) return {{"source", string_field(*j, "source", raw)}};
    if (auto code = extract_code(raw)) return {{"source", *code}};
    malformed("expected {\"source\": ...} or a fenced C++ block", raw);
}

json parse_code_analysis(const json& j, const std::string& raw) {
    std::string action = string_field(j, "action", raw);
    json out = {{"action", action}, {"thought", string_field(j, "thought", raw, false)}};
    auto need_int = [&](const char* f) {
        if (!j.contains(f) || !(j[f].is_number_integer() || j[f].is_string()))
            malformed(std::string("action ") + action + " needs integer \"" + f + "\"", raw);
        out[f] = j[f].is_string() ? j[f] : json(j[f].dump());
    };
    if (action == "run_cpp") {
        out["input"] = string_field(j, "input", raw);
    } else if (action == "harmonic_operation_count") {
        need_int("n");
    } else if (action == "binomial_exceeds_bound") {
        need_int("n");
        need_int("k");
        need_int("bound");
    } else if (action == "finish") {
        out["report"] = string_field(j, "report", raw);
        out["target_verdict"] = string_field(j, "target_verdict", raw);
        out["strategy"] = string_field(j, "strategy", raw, false);
        json params = json::object();
        if (j.contains("parameters")) {
            if (!j["parameters"].is_object()) malformed("\"parameters\" must be an object", raw);
            for (const auto& [k, v] : j["parameters"].items()) params[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        out["parameters"] = params;
    } else {
        malformed("unknown action \"" + action + "\"", raw);
    }
    return out;
}

json parse_hack_generator(const std::optional<json>& j, const std::string& raw) {
    if (j) {
        bool has_input = j->contains("test_input"), has_gen = j->contains("generator");
        if (has_input && has_gen) malformed("give either \"test_input\" or \"generator\", not both", raw);
        if (has_input) return {{"test_input", string_field(*j, "test_input", raw)}};
        if (has_gen) return {{"generator", string_field(*j, "generator", raw)}};
    }
    if (auto code = extract_code(raw)) return {{"generator", *code}};
    malformed("missing field \"test_input\" (or \"generator\", or a fenced C++ block)", raw);
}

std::string eval_int_expr(const std::string& expr, const std::string& raw) {
    auto v = parse_uint_expression(expr);
    if (!v) malformed("cannot parse integer expression \"" + expr + "\" (values above 2^64 are rejected)", raw);
    return to_decimal(*v);
}

json int_list(const json& v, const char* name, const std::string& raw) {
    json out = json::array();
    auto one = [&](const json& x) {
        if (x.is_number_unsigned() || x.is_number_integer())
            out.push_back(eval_int_expr(x.dump(), raw));
        else if (x.is_string())
            out.push_back(eval_int_expr(x.get<std::string>(), raw));
        else
            malformed(std::string("\"") + name + "\" entries must be integers or expressions", raw);
    };
    if (v.is_array()) {
        for (const auto& x : v) one(x);
    } else if (v.is_string() && v.get<std::string>().find(',') != std::string::npos) {
        std::string s = v.get<std::string>();
        s.erase(std::remove(s.begin(), s.end(), '['), s.end());
        s.erase(std::remove(s.begin(), s.end(), ']'), s.end());
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) one(json(item));
    } else {
        one(v);
    }
    if (out.empty()) malformed(std::string("\"") + name + "\" is empty", raw);
    return out;
}

json parse_hash_params(const json& hp, const std::string& raw) {
    if (!hp.is_object()) malformed("\"hash_parameters\" must be an object", raw);
    // Singular keys come from the extraction prompt, plural ones from hash spec files.
    const char* base_key = hp.contains("base") ? "base" : "bases";
    const char* mod_key = hp.contains("modulus") ? "modulus" : "moduli";
    if (!hp.contains(base_key) || !hp.contains(mod_key)) malformed("hash_parameters needs \"base\" and \"modulus\"", raw);
    json c;
    c["bases"] = int_list(hp[base_key], base_key, raw);
    c["moduli"] = int_list(hp[mod_key], mod_key, raw);
    if (c["bases"].size() != c["moduli"].size()) malformed("base and modulus lists differ in length", raw);

    char first = 'a', last = 'z';
    const char* cs_key = hp.contains("character set") ? "character set" : (hp.contains("charset") ? "charset" : nullptr);
    if (cs_key) {
        const json& cs = hp[cs_key];
        if (cs.is_array() && cs.size() == 2 && cs[0].is_string() && cs[1].is_string() &&
            cs[0].get<std::string>().size() == 1 && cs[1].get<std::string>().size() == 1) {
            first = cs[0].get<std::string>()[0];
            last = cs[1].get<std::string>()[0];
        } else if (cs.is_string()) {
            std::string s = cs.get<std::string>();
            std::vector<char> chars;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (s.compare(i, 3, "...") == 0) {
                    i += 2;
                    continue;
                }
                if (s[i] == ',' || std::isspace(static_cast<unsigned char>(s[i]))) continue;
                if (s[i] == '-' && !chars.empty() && i + 1 < s.size()) continue;
                chars.push_back(s[i]);
            }
            if (chars.empty()) malformed("empty character set", raw);
            first = chars.front();
            last = chars.back();
        } else {
            malformed("unrecognized character set", raw);
        }
        if (first > last) malformed("character set range is reversed", raw);
    }
    c["charset"] = {std::string(1, first), std::string(1, last)};

    long long offset = 1;
    if (hp.contains("offset") && hp["offset"].is_number_integer()) {
        offset = hp["offset"].get<long long>();
    } else if (hp.contains("mapping")) {
        const json& mp = hp["mapping"];
        if (mp.is_number_integer()) {
            offset = mp.get<long long>();
        } else if (mp.is_string()) {
            std::string s = mp.get<std::string>();
            static const std::regex entry_re(R"(['"](.)['"]\s*:\s*(-?\d+))");
            std::smatch m;
            std::string lower = s;
            for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (std::regex_search(s, m, entry_re)) {
                offset = std::stoll(m[2].str()) - (m[1].str()[0] - first);
            } else if (lower.find("ascii") != std::string::npos) {
                offset = static_cast<unsigned char>(first);
            } else {
                static const std::regex minus_re(R"(-\s*'(.)'\s*(?:\+\s*(\d+))?)");
                if (std::regex_search(s, m, minus_re))
                    offset = (first - m[1].str()[0]) + (m[2].matched ? std::stoll(m[2].str()) : 0);
                else
                    malformed("unrecognized mapping \"" + s + "\"", raw);
            }
        } else {
            malformed("unrecognized mapping", raw);
        }
    }
    c["offset"] = offset;
    if (hp.contains("orientation")) {
        std::string o = string_field(hp, "orientation", raw);
        if (o != "low_first" && o != "high_first") malformed("orientation must be low_first or high_first", raw);
        c["orientation"] = o;
    }
    return c;
}

json parse_hash_spec(const json& j, const std::string& raw) {
    json candidates = json::array();
    if (j.contains("hash_parameters")) {
        json c = parse_hash_params(j["hash_parameters"], raw);
        if (j.contains("orientation") && !c.contains("orientation")) {
            json tmp = j["hash_parameters"];
            tmp["orientation"] = j["orientation"];
            c = parse_hash_params(tmp, raw);
        }
        candidates.push_back(c);
    } else if (j.contains("candidates") && j["candidates"].is_array()) {
        for (const auto& hp : j["candidates"]) candidates.push_back(parse_hash_params(hp, raw));
    } else {
        malformed("missing field \"hash_parameters\"", raw);
    }
    return {{"candidates", candidates}};
}

json parse_cross_verify(const json& j, const std::string& raw) {
    std::string v = string_field(j, "verdict", raw);
    for (auto& ch : v) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (v != "approve" && v != "reject") malformed("verdict must be approve or reject", raw);
    return {{"verdict", v}, {"reason", string_field(j, "reason", raw, false)}};
}

}  // namespace

std::string_view to_string(RequestKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "?";
}

RequestKind request_kind_from_string(std::string_view s) {
    for (const auto& [kind, name] : kKindNames)
        if (name == s) return kind;
    throw Error(Errc::MalformedResponse, "unknown request kind " + std::string(s));
}

std::vector<std::string> ProviderRequest::required_fields(RequestKind kind) {
    switch (kind) {
        case RequestKind::ValidatorProbe: return {"statement", "validator_source"};
        case RequestKind::ValidatorFix: return {"statement", "validator_source", "failures"};
        case RequestKind::CheckerProbe: return {"statement", "checker_source"};
        case RequestKind::CheckerFix: return {"statement", "checker_source", "failures"};
        case RequestKind::CodeAnalysis: return {"statement", "target_source"};
        case RequestKind::HackGenerator: return {"statement", "target_source"};
        case RequestKind::HashSpecExtract: return {"target_source"};
        case RequestKind::CrossVerify: return {"statement", "test_input", "output", "claim", "reasoning"};
    }
    return {};
}

void ProviderRequest::validate() const {
    for (const auto& f : required_fields(kind)) {
        auto it = payload.find(f);
        if (it == payload.end() || it->second.empty())
            throw Error(Errc::InvariantViolation, std::string(to_string(kind)) + " request needs non-empty " + f);
    }
}

json ProviderRequest::to_json() const {
    json p = json::object();
    for (const auto& [k, v] : payload) p[k] = v;
    return p;
}

ProviderResponse parse_response(RequestKind kind, const std::string& raw) {
    ProviderResponse r;
    r.kind = kind;
    r.raw = raw;
    std::optional<json> j = extract_json(raw);
    auto need_json = [&]() -> const json& {
        if (!j) malformed("response is not a JSON object", raw);
        return *j;
    };
    switch (kind) {
        case RequestKind::ValidatorProbe: r.content = parse_validator_probe(need_json(), raw); break;
        case RequestKind::CheckerProbe: r.content = parse_checker_probe(need_json(), raw); break;
        case RequestKind::ValidatorFix:
        case RequestKind::CheckerFix: r.content = parse_source(j, raw); break;
        case RequestKind::CodeAnalysis: r.content = parse_code_analysis(need_json(), raw); break;
        case RequestKind::HackGenerator: r.content = parse_hack_generator(j, raw); break;
        case RequestKind::HashSpecExtract: r.content = parse_hash_spec(need_json(), raw); break;
        case RequestKind::CrossVerify: r.content = parse_cross_verify(need_json(), raw); break;
    }
    return r;
}

// ---------------------------------------------------------------- transcripts

json transcript_to_json(const std::vector<TranscriptEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries)
        arr.push_back({{"kind", to_string(e.kind)}, {"request", e.request}, {"response", e.response}, {"timestamp", e.timestamp}});
    return arr;
}

std::vector<TranscriptEntry> transcript_from_json(const json& j) {
    if (!j.is_array()) throw Error(Errc::TranscriptIo, "transcript must be a JSON array");
    std::vector<TranscriptEntry> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        std::string where = "entry " + std::to_string(i);
        if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string() || !e.contains("response"))
            throw Error(Errc::TranscriptIo, where + ": needs kind and response");
        TranscriptEntry t;
        try {
            t.kind = request_kind_from_string(e["kind"].get<std::string>());
        } catch (const Error&) {
            throw Error(Errc::TranscriptIo, where + ": unknown kind " + e["kind"].get<std::string>());
        }
        if (e.contains("request")) t.request = e["request"];
        t.response = e["response"].is_string() ? e["response"].get<std::string>() : e["response"].dump();
        if (e.contains("timestamp") && e["timestamp"].is_string()) t.timestamp = e["timestamp"].get<std::string>();
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<TranscriptEntry> load_transcript(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw Error(Errc::TranscriptIo, "cannot read transcript " + path);
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw Error(Errc::TranscriptIo, "transcript " + path + " is not valid JSON");
    return transcript_from_json(j);
}

void save_transcript(const std::vector<TranscriptEntry>& entries, const std::string& path) {
    try {
        write_file(path, transcript_to_json(entries).dump(2) + "\n");
    } catch (const std::exception& e) {
        throw Error(Errc::TranscriptIo, e.what());
    }
}

// ---------------------------------------------------------------- scripted

ScriptedProvider::ScriptedProvider(std::vector<TranscriptEntry> script, std::string origin)
    : script_(std::move(script)), origin_(std::move(origin)) {}

ProviderResponse ScriptedProvider::respond(const ProviderRequest& req) {
    req.validate();
    std::lock_guard lock(mutex_);
    if (cursor_ >= script_.size())
        throw Error(Errc::TranscriptExhausted, "call " + std::to_string(cursor_ + 1) + " (" + std::string(to_string(req.kind)) +
                                                   ") but transcript has " + std::to_string(script_.size()) + " entries");
    const TranscriptEntry& next = script_[cursor_];
    if (next.kind != req.kind)
        throw Error(Errc::KindMismatch, "call " + std::to_string(cursor_ + 1) + ": requested " +
                                            std::string(to_string(req.kind)) + ", transcript has " +
                                            std::string(to_string(next.kind)));
    ++cursor_;
    log_.push_back({req.kind, req.to_json(), next.response, next.timestamp});
    return parse_response(req.kind, next.response);
}

std::vector<TranscriptEntry> ScriptedProvider::transcript() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t ScriptedProvider::consumed() const {
    std::lock_guard lock(mutex_);
    return cursor_;
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard lock(mutex_);
    return script_.size() - cursor_;
}

// ---------------------------------------------------------------- remote

void RemoteProviderConfig::validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw Error(Errc::InvariantViolation, "temperature must be in [0, 2]");
    if (max_retries < 0) throw Error(Errc::InvariantViolation, "max_retries must be >= 0");
    if (max_in_flight < 1) throw Error(Errc::InvariantViolation, "max_in_flight must be >= 1");
    if (endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0)
        throw Error(Errc::InvariantViolation, "endpoint must be an http(s) URL");
}

namespace {

class InFlightGate {
  public:
    static InFlightGate& instance() {
        static InFlightGate gate;
        return gate;
    }
    void acquire(int cap) {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return active_ < cap; });
        ++active_;
    }
    void release() {
        {
            std::lock_guard lock(mutex_);
            --active_;
        }
        cv_.notify_one();
    }

  private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int active_ = 0;
};

struct GateGuard {
    explicit GateGuard(int cap) { InFlightGate::instance().acquire(cap); }
    ~GateGuard() { InFlightGate::instance().release(); }
};

}  // namespace

RemoteProvider::RemoteProvider(RemoteProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.token.empty())
        if (const char* t = std::getenv("HACKFORGE_PROVIDER_TOKEN")) cfg_.token = t;
}

json RemoteProvider::build_body(const ProviderRequest& req) const {
    return {{"model", cfg_.model},
            {"temperature", cfg_.temperature},
            {"messages",
             json::array({{{"role", "system"}, {"content", system_prompt(req.kind)}},
                          {{"role", "user"}, {"content", render_user_prompt(req)}}})}};
}

std::string RemoteProvider::post(const json& body) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(cfg_.endpoint, m, url_re)) throw Error(Errc::TransportError, "bad endpoint " + cfg_.endpoint);
    std::string origin = m[1].str();
    std::string path = m[2].matched ? m[2].str() : "/";

    httplib::Client client(origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.request_timeout).count();
    client.set_connection_timeout(static_cast<time_t>(std::max<long long>(1, secs)));
    client.set_read_timeout(static_cast<time_t>(std::max<long long>(1, secs)));
    httplib::Headers headers;
    if (!cfg_.token.empty()) headers.emplace("Authorization", "Bearer " + cfg_.token);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(cfg_.retry_backoff * attempt);
        httplib::Result res;
        {
            GateGuard gate(cfg_.max_in_flight);
            res = client.Post(path, headers, body.dump(), "application/json");
        }
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw Error(Errc::TransportError, "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 512));
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty())
            throw Error(Errc::TransportError, "unexpected completion body: " + res->body.substr(0, 512));
        const json& msg = reply["choices"][0]["message"];
        if (!msg.is_object() || !msg.contains("content") || !msg["content"].is_string())
            throw Error(Errc::TransportError, "completion has no message content");
        return msg["content"].get<std::string>();
    }
    throw Error(Errc::TransportError, last_error + " after " + std::to_string(cfg_.max_retries + 1) + " attempts");
}

ProviderResponse RemoteProvider::respond(const ProviderRequest& req) {
    req.validate();
    std::string raw = post(build_body(req));
    {
        // Recorded before parsing so a malformed reply is replayed identically.
        std::lock_guard lock(mutex_);
        log_.push_back({req.kind, req.to_json(), raw, utc_timestamp()});
    }
    return parse_response(req.kind, raw);
}

std::vector<TranscriptEntry> RemoteProvider::transcript() const {
    std::lock_guard lock(mutex_);
    return log_;
}

// ---------------------------------------------------------------- prompts

std::string system_prompt(RequestKind kind) {
    switch (kind) {
        case RequestKind::ValidatorProbe:
            return "You audit input validators for competitive programming problems. Find constraints the "
                   "validator enforces wrongly. Return JSON {\"test_cases\": [...]} with exactly one case of "
                   "bug_type \"false_positive\" (an input that breaks the stated constraints but that the "
                   "validator would accept) and one of bug_type \"false_negative\" (an input that satisfies "
                   "every constraint but that the validator would reject). Each case has \"strategy\" and "
                   "either \"test_input\" (the literal input) or \"generator\" (a C++ program printing it).";
        case RequestKind::ValidatorFix:
        case RequestKind::CheckerFix:
            return "You repair testlib-based tools for competitive programming problems. Given the current "
                   "source and the inputs it misjudged, return the complete corrected program as JSON "
                   "{\"source\": \"...\"} or as a single ```cpp fenced block.";
        case RequestKind::CheckerProbe:
            return "You audit output checkers for competitive programming problems. Return JSON with "
                   "\"reasoning\" (your step-by-step argument) and \"test_cases\": one case of bug_type "
                   "\"false_positive\" whose fake_output is wrong yet accepted, and one of bug_type "
                   "\"false_negative\" whose fake_output is a correct answer that differs from the reference "
                   "and is rejected. Both cases share the same small \"test_input\".";
        case RequestKind::CodeAnalysis:
            return "You look for bugs (WA, TLE, RE, MLE) in a C++ submission. Reply each turn with one JSON "
                   "object {\"thought\", \"action\", ...}. Actions: run_cpp {input}; harmonic_operation_count "
                   "{n}; binomial_exceeds_bound {n, k, bound}; finish {report, target_verdict, strategy "
                   "(PROVIDER or STRESS), parameters}. Tool results arrive in the next request.";
        case RequestKind::HackGenerator:
            return "You write failing tests for a buggy competitive programming submission. The test must "
                   "satisfy every constraint and make the submission fail while a correct solution passes. "
                   "Return JSON {\"test_input\": \"...\"} for short inputs or a complete C++ generator program "
                   "(JSON {\"generator\": \"...\"} or a ```cpp block) that prints the input.";
        case RequestKind::HashSpecExtract:
            return "You identify polynomial rolling hashes in C++ code. Return JSON {\"hash_parameters\": "
                   "{\"base\": [...], \"modulus\": [...], \"character set\": \"a,...,z\", \"mapping\": "
                   "\"{'a':1,...}\", \"orientation\": \"low_first\" or \"high_first\"}}. Use 2^64 as the "
                   "modulus for unsigned 64-bit arithmetic without an explicit reduction.";
        case RequestKind::CrossVerify:
            return "You independently check a claim about a checker. Given the problem, an input, an output and "
                   "the claimed status of that output, decide whether the claim is right. Return JSON "
                   "{\"verdict\": \"approve\" or \"reject\", \"reason\": \"...\"}.";
    }
    return {};
}

std::string render_user_prompt(const ProviderRequest& req) {
    std::string out;
    for (const auto& [k, v] : req.payload) {
        out += "## " + k + "\n";
        bool code = k.size() > 7 && k.compare(k.size() - 7, 7, "_source") == 0;
        out += code ? "```cpp\n" + v + "\n```\n\n" : v + "\n\n";
    }
    return out;
}

}  // namespace hackforge
