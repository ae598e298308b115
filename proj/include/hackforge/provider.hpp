#pragma once

// Sources of adversarial proposals. A provider session answers typed requests;
// the scripted implementation replays a transcript, the remote one talks to an
// OpenAI-style chat-completion endpoint.

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hackforge {

enum class RequestKind {
    ValidatorProbe,
    ValidatorFix,
    CheckerProbe,
    CheckerFix,
    CodeAnalysis,
    HackGenerator,
    HashSpecExtract,
    CrossVerify,
};

std::string_view to_string(RequestKind k);
RequestKind request_kind_from_string(std::string_view s);

struct ProviderRequest {
    RequestKind kind = RequestKind::HackGenerator;
    std::map<std::string, std::string> payload;

    /// Fields the kind needs; each must be present and non-empty.
    static std::vector<std::string> required_fields(RequestKind kind);
    /// Throws INVARIANT_VIOLATION naming the first missing field.
    void validate() const;
    nlohmann::json to_json() const;
};

struct ProviderResponse {
    RequestKind kind = RequestKind::HackGenerator;
    /// Normalized content; see parse_response for the shape per kind.
    nlohmann::json content;
    std::string raw;
};

/// Parses raw provider text under the kind's schema. Accepts bare JSON, a fenced
/// ```json block, or (for source-bearing kinds) a fenced code block. Throws
/// MALFORMED_RESPONSE carrying the raw text.
///
/// Normalized shapes:
///   VALIDATOR_PROBE  {test_cases:[{bug_type, strategy, test_input|generator}]}
///   CHECKER_PROBE    {test_cases:[{bug_type, strategy, test_input, fake_output}], reasoning}
///   *_FIX            {source}
///   CODE_ANALYSIS    {action, thought, ...action fields}
///   HACK_GENERATOR   {test_input} | {generator}
///   HASH_SPEC_EXTRACT {candidates:[{bases:[str], moduli:[str], charset:[first,last], offset, orientation?}]}
///   CROSS_VERIFY     {verdict: approve|reject, reason}
ProviderResponse parse_response(RequestKind kind, const std::string& raw);

struct TranscriptEntry {
    RequestKind kind = RequestKind::HackGenerator;
    nlohmann::json request = nlohmann::json::object();
    /// Raw response text (objects in transcript files are stored as their dump).
    std::string response;
    std::string timestamp;
};

/// Throws TRANSCRIPT_IO on missing/unreadable/ill-formed files.
std::vector<TranscriptEntry> load_transcript(const std::string& path);
void save_transcript(const std::vector<TranscriptEntry>& entries, const std::string& path);
nlohmann::json transcript_to_json(const std::vector<TranscriptEntry>& entries);
std::vector<TranscriptEntry> transcript_from_json(const nlohmann::json& j);

class Provider {
  public:
    virtual ~Provider() = default;
    /// Throws TRANSCRIPT_EXHAUSTED, KIND_MISMATCH, MALFORMED_RESPONSE, TRANSPORT_ERROR.
    virtual ProviderResponse respond(const ProviderRequest& req) = 0;
    /// Every answered call so far, in order, malformed replies included.
    virtual std::vector<TranscriptEntry> transcript() const = 0;
    virtual std::string describe() const = 0;
};

class ScriptedProvider : public Provider {
  public:
    explicit ScriptedProvider(std::vector<TranscriptEntry> script, std::string origin = "inline");

    ProviderResponse respond(const ProviderRequest& req) override;
    std::vector<TranscriptEntry> transcript() const override;
    std::string describe() const override { return "scripted:" + origin_; }

    std::size_t consumed() const;
    std::size_t remaining() const;

  private:
    std::vector<TranscriptEntry> script_;
    std::string origin_;
    std::size_t cursor_ = 0;
    std::vector<TranscriptEntry> log_;
    mutable std::mutex mutex_;
};

struct RemoteProviderConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    double temperature = 0.7;
    std::chrono::milliseconds request_timeout{120'000};
    int max_retries = 3;
    std::chrono::milliseconds retry_backoff{500};
    /// Process-wide cap on concurrent requests.
    int max_in_flight = 4;
    /// Bearer token; defaults to $HACKFORGE_PROVIDER_TOKEN when empty.
    std::string token;

    void validate() const;
};

class RemoteProvider : public Provider {
  public:
    explicit RemoteProvider(RemoteProviderConfig cfg);

    ProviderResponse respond(const ProviderRequest& req) override;
    std::vector<TranscriptEntry> transcript() const override;
    std::string describe() const override { return "remote:" + cfg_.model; }

    /// Chat-completion body sent for req.
    nlohmann::json build_body(const ProviderRequest& req) const;

  private:
    std::string post(const nlohmann::json& body);

    RemoteProviderConfig cfg_;
    std::vector<TranscriptEntry> log_;
    mutable std::mutex mutex_;
};

/// System and user messages for a request.
std::string system_prompt(RequestKind kind);
std::string render_user_prompt(const ProviderRequest& req);

}  // namespace hackforge
