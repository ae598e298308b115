#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "hackforge/error.hpp"
#include "hackforge/provider.hpp"
#include "test_support.hpp"

namespace hf = hackforge;
using nlohmann::json;
using hf::RequestKind;

namespace {

hf::Errc parse_error(RequestKind kind, const std::string& raw) {
    try {
        hf::parse_response(kind, raw);
    } catch (const hf::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed: " << raw;
    return hf::Errc::Io;
}

hf::ProviderRequest request(RequestKind kind) {
    hf::ProviderRequest r{kind, {}};
    for (const auto& f : hf::ProviderRequest::required_fields(kind)) r.payload[f] = "<" + f + ">";
    return r;
}

hf::TranscriptEntry entry(RequestKind kind, std::string response) {
    return {kind, json::object(), std::move(response), "2025-01-01T00:00:00Z"};
}

json completion(const std::string& content) {
    return {{"id", "cmpl-1"}, {"choices", json::array({{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}})}};
}

/// Local chat-completion endpoint. The handler sees every request body.
class FakeEndpoint {
  public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    explicit FakeEndpoint(Handler h) : handler_(std::move(h)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            handler_(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }

    hf::RemoteProviderConfig config() const {
        hf::RemoteProviderConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
        c.model = "test-model";
        c.temperature = 0.2;
        c.retry_backoff = std::chrono::milliseconds(1);
        c.request_timeout = std::chrono::milliseconds(5000);
        c.token = "secret";
        return c;
    }

    std::atomic<int> hits{0};

  private:
    Handler handler_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST(ParseResponse, HackGeneratorShapes) {
    auto lit = hf::parse_response(RequestKind::HackGenerator, "```json\n{\"test_input\": \"1\\n36\\n\"}\n```");
    EXPECT_EQ(lit.content, json({{"test_input", "1\n36\n"}}));
    auto gen = hf::parse_response(RequestKind::HackGenerator, "Here:\n```cpp\nint main(){}\n```\n");
    EXPECT_EQ(gen.content["generator"], "int main(){}\n");
    EXPECT_EQ(parse_error(RequestKind::HackGenerator, "no idea"), hf::Errc::MalformedResponse);
    EXPECT_EQ(parse_error(RequestKind::HackGenerator, R"({"test_input": "1", "generator": "x"})"),
              hf::Errc::MalformedResponse);
}

TEST(ParseResponse, ValidatorProbeNeedsBothBugTypes) {
    std::string ok = R"({"test_cases": [
        {"bug_type": "False Positive", "strategy": "s", "test_input": "0\n"},
        {"bug_type": "false_negative", "strategy": "s", "generator": "int main(){}"}]})";
    auto r = hf::parse_response(RequestKind::ValidatorProbe, ok);
    ASSERT_EQ(r.content["test_cases"].size(), 2u);
    EXPECT_EQ(r.content["test_cases"][0]["bug_type"], "false_positive");
    EXPECT_EQ(r.content["test_cases"][1]["generator"], "int main(){}");
    EXPECT_EQ(parse_error(RequestKind::ValidatorProbe,
                          R"({"test_cases": [{"bug_type": "false_positive", "test_input": "0"}]})"),
              hf::Errc::MalformedResponse);
    EXPECT_EQ(parse_error(RequestKind::ValidatorProbe,
                          R"({"test_cases": [{"bug_type": "false_positive", "test_input": "0", "generator": "x"},
                                             {"bug_type": "false_negative", "test_input": "1"}]})"),
              hf::Errc::MalformedResponse);
    EXPECT_EQ(parse_error(RequestKind::ValidatorProbe,
                          R"({"test_cases": [{"bug_type": "bogus", "test_input": "0"},
                                             {"bug_type": "false_negative", "test_input": "1"}]})"),
              hf::Errc::MalformedResponse);
}

TEST(ParseResponse, CheckerProbeSharesInput) {
    std::string ok = R"({"reasoning": "r", "test_cases": [
        {"bug_type": "false_positive", "test_input": "6\n549871\n", "fake_output": "54-98 -71"},
        {"bug_type": "false_negative", "test_input": "6\n549871\n", "fake_output": "549-871"}]})";
    auto r = hf::parse_response(RequestKind::CheckerProbe, ok);
    EXPECT_EQ(r.content["reasoning"], "r");
    std::string split = R"({"test_cases": [
        {"bug_type": "false_positive", "test_input": "a", "fake_output": "x"},
        {"bug_type": "false_negative", "test_input": "b", "fake_output": "y"}]})";
    EXPECT_EQ(parse_error(RequestKind::CheckerProbe, split), hf::Errc::MalformedResponse);
}

TEST(ParseResponse, FixAcceptsJsonOrFencedSource) {
    EXPECT_EQ(hf::parse_response(RequestKind::ValidatorFix, R"({"source": "int main(){}"})").content["source"],
              "int main(){}");
    EXPECT_EQ(hf::parse_response(RequestKind::CheckerFix, "```c++\nint main(){return 0;}\n```").content["source"],
              "int main(){return 0;}\n");
    EXPECT_EQ(parse_error(RequestKind::CheckerFix, "sorry"), hf::Errc::MalformedResponse);
}

TEST(ParseResponse, CodeAnalysisActions) {
    auto run = hf::parse_response(RequestKind::CodeAnalysis, R"({"action": "run_cpp", "input": "5\n", "thought": "t"})");
    EXPECT_EQ(run.content["input"], "5\n");
    auto h = hf::parse_response(RequestKind::CodeAnalysis, R"({"action": "harmonic_operation_count", "n": 100000})");
    EXPECT_EQ(h.content["n"], "100000");
    auto fin = hf::parse_response(RequestKind::CodeAnalysis,
                                  R"({"action": "finish", "report": "r", "target_verdict": "TLE", "parameters": {"n": 7}})");
    EXPECT_EQ(fin.content["parameters"]["n"], "7");
    EXPECT_EQ(parse_error(RequestKind::CodeAnalysis, R"({"action": "python", "code": "1"})"), hf::Errc::MalformedResponse);
    EXPECT_EQ(parse_error(RequestKind::CodeAnalysis, R"({"action": "binomial_exceeds_bound", "n": 5})"),
              hf::Errc::MalformedResponse);
}

TEST(ParseResponse, HashParameterForms) {
    auto a = hf::parse_response(RequestKind::HashSpecExtract, R"({"hash_parameters": {
        "base": "[131, 137]", "modulus": ["1e9+7", "10^9 + 9"], "character set": "a...z", "mapping": "c - 'a' + 1"}})");
    const json& c = a.content["candidates"][0];
    EXPECT_EQ(c["bases"], json({"131", "137"}));
    EXPECT_EQ(c["moduli"], json({"1000000007", "1000000009"}));
    EXPECT_EQ(c["charset"], json({"a", "z"}));
    EXPECT_EQ(c["offset"], 1);

    auto b = hf::parse_response(RequestKind::HashSpecExtract,
                                R"({"hash_parameters": {"base": 31, "modulus": "2^64", "charset": ["a", "z"],
                                    "mapping": "ASCII"}, "orientation": "high_first"})");
    EXPECT_EQ(b.content["candidates"][0]["moduli"][0], "18446744073709551616");
    EXPECT_EQ(b.content["candidates"][0]["offset"], 97);
    EXPECT_EQ(b.content["candidates"][0]["orientation"], "high_first");

    EXPECT_EQ(parse_error(RequestKind::HashSpecExtract, R"({"hash_parameters": {"base": 31, "modulus": "2^65"}})"),
              hf::Errc::MalformedResponse);
    EXPECT_EQ(parse_error(RequestKind::HashSpecExtract, R"({"hash_parameters": {"base": [1, 2], "modulus": 7}})"),
              hf::Errc::MalformedResponse);
}

TEST(ParseResponse, CrossVerify) {
    EXPECT_EQ(hf::parse_response(RequestKind::CrossVerify, R"({"verdict": "Approve"})").content["verdict"], "approve");
    EXPECT_EQ(parse_error(RequestKind::CrossVerify, R"({"verdict": "maybe"})"), hf::Errc::MalformedResponse);
}

TEST(Request, RequiredFieldsEnforced) {
    hf::ProviderRequest r{RequestKind::CrossVerify, {{"statement", "s"}, {"test_input", "x"}}};
    EXPECT_THROW(r.validate(), hf::Error);
    EXPECT_NO_THROW(request(RequestKind::CrossVerify).validate());
    for (auto k : {RequestKind::ValidatorProbe, RequestKind::ValidatorFix, RequestKind::CheckerProbe,
                   RequestKind::CheckerFix, RequestKind::CodeAnalysis, RequestKind::HackGenerator,
                   RequestKind::HashSpecExtract, RequestKind::CrossVerify})
        EXPECT_EQ(hf::request_kind_from_string(hf::to_string(k)), k);
}

TEST(Scripted, ReplaysInOrderAndLogs) {
    hf::ScriptedProvider p({entry(RequestKind::HackGenerator, R"({"test_input": "1"})"),
                            entry(RequestKind::CrossVerify, R"({"verdict": "reject", "reason": "no"})")});
    EXPECT_EQ(p.respond(request(RequestKind::HackGenerator)).content["test_input"], "1");
    EXPECT_EQ(p.remaining(), 1u);
    EXPECT_EQ(p.respond(request(RequestKind::CrossVerify)).content["verdict"], "reject");
    auto log = p.transcript();
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log[0].request["statement"], "<statement>");
    try {
        p.respond(request(RequestKind::HackGenerator));
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::TranscriptExhausted);
    }
}

TEST(Scripted, KindMismatchDoesNotConsume) {
    hf::ScriptedProvider p({entry(RequestKind::CheckerProbe, "{}")});
    try {
        p.respond(request(RequestKind::ValidatorProbe));
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::KindMismatch);
    }
    EXPECT_EQ(p.consumed(), 0u);
}

TEST(Scripted, MalformedReplyIsConsumedAndLogged) {
    hf::ScriptedProvider p({entry(RequestKind::HackGenerator, "garbage")});
    EXPECT_THROW(p.respond(request(RequestKind::HackGenerator)), hf::Error);
    EXPECT_EQ(p.consumed(), 1u);
    ASSERT_EQ(p.transcript().size(), 1u);
    EXPECT_EQ(p.transcript()[0].response, "garbage");
}

TEST(Transcript, FileRoundTrip) {
    hf::testing::TempDir tmp;
    std::vector<hf::TranscriptEntry> t = {entry(RequestKind::HackGenerator, "```cpp\nint main(){}\n```"),
                                          entry(RequestKind::CrossVerify, R"({"verdict":"approve"})")};
    t[0].request = {{"target", "x"}};
    auto path = (tmp.path() / "t.json").string();
    hf::save_transcript(t, path);
    auto back = hf::load_transcript(path);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back[i].kind, t[i].kind);
        EXPECT_EQ(back[i].request, t[i].request);
        EXPECT_EQ(back[i].response, t[i].response);
        EXPECT_EQ(back[i].timestamp, t[i].timestamp);
    }
}

TEST(Transcript, ObjectResponsesAreStoredAsDump) {
    auto t = hf::transcript_from_json(json::parse(R"([{"kind": "CROSS_VERIFY", "response": {"verdict": "approve"}}])"));
    EXPECT_EQ(json::parse(t[0].response)["verdict"], "approve");
}

TEST(Transcript, IoErrors) {
    auto code = [](auto fn) {
        try {
            fn();
        } catch (const hf::Error& e) {
            return e.code();
        }
        return hf::Errc::Io;
    };
    EXPECT_EQ(code([] { hf::load_transcript("/nonexistent/t.json"); }), hf::Errc::TranscriptIo);
    EXPECT_EQ(code([] { hf::transcript_from_json(json::object()); }), hf::Errc::TranscriptIo);
    EXPECT_EQ(code([] { hf::transcript_from_json(json::parse(R"([{"kind": "POEM", "response": ""}])")); }),
              hf::Errc::TranscriptIo);
}

TEST(Remote, ConfigValidation) {
    hf::RemoteProviderConfig c;
    EXPECT_NO_THROW(c.validate());
    c.temperature = 3;
    EXPECT_THROW(c.validate(), hf::Error);
    c = {};
    c.endpoint = "ftp://x";
    EXPECT_THROW(c.validate(), hf::Error);
    c = {};
    c.max_in_flight = 0;
    EXPECT_THROW(c.validate(), hf::Error);
}

TEST(Remote, SendsChatCompletionAndParses) {
    json seen;
    std::string auth;
    FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(completion("```json\n{\"test_input\": \"1\\n36\\n\"}\n```").dump(), "application/json");
    });
    hf::RemoteProvider p(ep.config());
    auto req = request(RequestKind::HackGenerator);
    auto r = p.respond(req);
    EXPECT_EQ(r.content["test_input"], "1\n36\n");
    EXPECT_EQ(seen["model"], "test-model");
    EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.2);
    ASSERT_EQ(seen["messages"].size(), 2u);
    EXPECT_EQ(seen["messages"][0]["role"], "system");
    EXPECT_EQ(seen["messages"][0]["content"], hf::system_prompt(RequestKind::HackGenerator));
    EXPECT_EQ(seen["messages"][1]["content"], hf::render_user_prompt(req));
    EXPECT_EQ(auth, "Bearer secret");
    EXPECT_EQ(p.transcript().size(), 1u);
}

TEST(Remote, RetriesServerErrorsThenSucceeds) {
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
        static std::atomic<int> calls{0};
        if (calls++ < 2) {
            res.status = 503;
            return;
        }
        res.set_content(completion(R"({"verdict": "approve"})").dump(), "application/json");
    });
    auto cfg = ep.config();
    cfg.max_retries = 3;
    hf::RemoteProvider p(cfg);
    EXPECT_EQ(p.respond(request(RequestKind::CrossVerify)).content["verdict"], "approve");
    EXPECT_EQ(ep.hits.load(), 3);
}

TEST(Remote, GivesUpAfterRetries) {
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    auto cfg = ep.config();
    cfg.max_retries = 2;
    hf::RemoteProvider p(cfg);
    try {
        p.respond(request(RequestKind::CrossVerify));
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::TransportError);
    }
    EXPECT_EQ(ep.hits.load(), 3);
}

TEST(Remote, ClientErrorIsNotRetried) {
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
        res.status = 401;
        res.set_content("nope", "text/plain");
    });
    hf::RemoteProvider p(ep.config());
    EXPECT_THROW(p.respond(request(RequestKind::CrossVerify)), hf::Error);
    EXPECT_EQ(ep.hits.load(), 1);
}

TEST(Remote, UnreachableEndpointIsTransportError) {
    hf::RemoteProviderConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.max_retries = 0;
    cfg.request_timeout = std::chrono::milliseconds(1000);
    hf::RemoteProvider p(cfg);
    try {
        p.respond(request(RequestKind::CrossVerify));
        FAIL();
    } catch (const hf::Error& e) {
        EXPECT_EQ(e.code(), hf::Errc::TransportError);
    }
}

TEST(Remote, InFlightCapIsRespected) {
    std::atomic<int> active{0}, peak{0};
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
        int now = ++active;
        int prev = peak.load();
        while (now > prev && !peak.compare_exchange_weak(prev, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        --active;
        res.set_content(completion(R"({"verdict": "approve"})").dump(), "application/json");
    });
    auto cfg = ep.config();
    cfg.max_in_flight = 2;
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i)
        threads.emplace_back([&] {
            hf::RemoteProvider p(cfg);
            p.respond(request(RequestKind::CrossVerify));
        });
    for (auto& t : threads) t.join();
    EXPECT_EQ(ep.hits.load(), 6);
    EXPECT_LE(peak.load(), 2);
}

TEST(Remote, RecordedSessionReplaysIdentically) {
    std::vector<std::string> replies = {R"({"test_input": "5\n"})", "not json at all",
                                        "```cpp\nint main(){puts(\"7\");}\n```"};
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
        static std::atomic<int> i{0};
        res.set_content(completion(replies[i++ % 3]).dump(), "application/json");
    });
    hf::RemoteProvider live(ep.config());
    std::vector<std::optional<json>> live_out;
    for (int i = 0; i < 3; ++i) {
        try {
            live_out.push_back(live.respond(request(RequestKind::HackGenerator)).content);
        } catch (const hf::Error& e) {
            EXPECT_EQ(e.code(), hf::Errc::MalformedResponse);
            live_out.push_back(std::nullopt);
        }
    }
    hf::testing::TempDir tmp;
    auto path = (tmp.path() / "rec.json").string();
    hf::save_transcript(live.transcript(), path);

    hf::ScriptedProvider replay(hf::load_transcript(path), path);
    for (int i = 0; i < 3; ++i) {
        std::optional<json> got;
        try {
            got = replay.respond(request(RequestKind::HackGenerator)).content;
        } catch (const hf::Error&) {
        }
        EXPECT_EQ(got, live_out[i]) << "call " << i;
    }
    EXPECT_EQ(hf::transcript_to_json(replay.transcript()), hf::transcript_to_json(live.transcript()));
}
