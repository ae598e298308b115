#include "hackforge/util.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hackforge/error.hpp"

namespace hackforge {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::MissingManifest: return "MISSING_MANIFEST";
        case Errc::MalformedManifest: return "MALFORMED_MANIFEST";
        case Errc::DanglingReference: return "DANGLING_REFERENCE";
        case Errc::InvariantViolation: return "INVARIANT_VIOLATION";
        case Errc::CompileError: return "COMPILE_ERROR";
        case Errc::ToolchainUnavailable: return "TOOLCHAIN_UNAVAILABLE";
        case Errc::CompileTimeout: return "COMPILE_TIMEOUT";
        case Errc::SandboxFailure: return "SANDBOX_FAILURE";
        case Errc::JudgeFail: return "JUDGE_FAIL";
        case Errc::OracleFail: return "ORACLE_FAIL";
        case Errc::NoAuthoritativeSignal: return "NO_AUTHORITATIVE_SIGNAL";
        case Errc::TranscriptExhausted: return "TRANSCRIPT_EXHAUSTED";
        case Errc::KindMismatch: return "KIND_MISMATCH";
        case Errc::MalformedResponse: return "MALFORMED_RESPONSE";
        case Errc::TransportError: return "TRANSPORT_ERROR";
        case Errc::TranscriptIo: return "TRANSCRIPT_IO";
        case Errc::CalibrationInfraFail: return "CALIBRATION_INFRA_FAIL";
        case Errc::FixDoesNotCompile: return "FIX_DOES_NOT_COMPILE";
        case Errc::NotApplicable: return "NOT_APPLICABLE";
        case Errc::MalformedPlan: return "MALFORMED_PLAN";
        case Errc::GeneratorCE: return "GENERATOR_CE";
        case Errc::GeneratorRE: return "GENERATOR_RE";
        case Errc::GeneratorInvalidOutput: return "GENERATOR_INVALID_OUTPUT";
        case Errc::CampaignStalled: return "CAMPAIGN_STALLED";
        case Errc::LiteralTooLarge: return "LITERAL_TOO_LARGE";
        case Errc::CharsetViolation: return "CHARSET_VIOLATION";
        case Errc::NoSpecFound: return "NO_SPEC_FOUND";
        case Errc::CollisionUnreachable: return "COLLISION_UNREACHABLE";
        case Errc::EmptySuite: return "EMPTY_SUITE";
        case Errc::Usage: return "USAGE";
        case Errc::WorkspaceBusy: return "WORKSPACE_BUSY";
        case Errc::Io: return "IO";
    }
    return "UNKNOWN";
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::string_view data) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(Errc::Io, "short write " + path.string());
}

std::string normalize_newlines(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) tokens.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::vector<std::string> split_command(std::string_view cmd) {
    std::vector<std::string> argv;
    std::string cur;
    bool in_quotes = false;
    bool have = false;
    for (char c : cmd) {
        if (c == '"') {
            in_quotes = !in_quotes;
            have = true;
        } else if (!in_quotes && (c == ' ' || c == '\t')) {
            if (have) argv.push_back(std::move(cur));
            cur.clear();
            have = false;
        } else {
            cur.push_back(c);
            have = true;
        }
    }
    if (have) argv.push_back(std::move(cur));
    return argv;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string zero_pad(std::size_t value, int width) {
    std::string digits = std::to_string(value);
    if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
    return digits;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::optional<u128> parse_uint_expression(std::string_view text) {
    std::string e;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) e += c;
    const u128 cap = static_cast<u128>(1) << 64;
    std::size_t pos = 0;
    auto digits = [&]() -> std::optional<u128> {
        std::size_t start = pos;
        u128 v = 0;
        while (pos < e.size() && std::isdigit(static_cast<unsigned char>(e[pos]))) {
            v = v * 10 + static_cast<unsigned>(e[pos++] - '0');
            if (v > cap) return std::nullopt;
        }
        if (pos == start) return std::nullopt;
        return v;
    };
    __int128 total = 0;
    bool first = true;
    while (pos < e.size() || first) {
        int sign = 1;
        if (!first) {
            if (e[pos] != '+' && e[pos] != '-') return std::nullopt;
            sign = e[pos++] == '-' ? -1 : 1;
        }
        first = false;
        auto base = digits();
        if (!base) return std::nullopt;
        u128 value = *base;
        bool power = false, sci = false;
        if (pos < e.size() && e[pos] == '^') {
            power = true;
            ++pos;
        } else if (e.compare(pos, 2, "**") == 0) {
            power = true;
            pos += 2;
        } else if (pos < e.size() && (e[pos] == 'e' || e[pos] == 'E')) {
            sci = true;
            ++pos;
        }
        if (power || sci) {
            auto exp = digits();
            if (!exp || *exp > 200) return std::nullopt;
            u128 mult = sci ? 10 : *base;
            value = sci ? *base : 1;
            for (unsigned i = 0; i < static_cast<unsigned>(*exp); ++i) {
                value *= mult;
                if (value > cap) return std::nullopt;
            }
        }
        total += sign * static_cast<__int128>(value);
        if (total > static_cast<__int128>(cap) || total < -static_cast<__int128>(cap)) return std::nullopt;
    }
    if (total < 0) return std::nullopt;
    return static_cast<u128>(total);
}

std::string to_decimal(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

}  // namespace hackforge
