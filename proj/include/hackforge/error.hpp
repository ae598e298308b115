#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hackforge {

/// Error taxonomy shared by every module. The CLI maps these onto exit codes.
enum class Errc {
    // core-model
    MissingManifest,
    MalformedManifest,
    DanglingReference,
    InvariantViolation,
    // sandbox
    CompileError,
    ToolchainUnavailable,
    CompileTimeout,
    SandboxFailure,
    // judge
    JudgeFail,
    OracleFail,
    NoAuthoritativeSignal,
    // adversary-provider
    TranscriptExhausted,
    KindMismatch,
    MalformedResponse,
    TransportError,
    TranscriptIo,
    // calibration
    CalibrationInfraFail,
    FixDoesNotCompile,
    NotApplicable,
    // analyst
    MalformedPlan,
    // genforge
    GeneratorCE,
    GeneratorRE,
    GeneratorInvalidOutput,
    CampaignStalled,
    LiteralTooLarge,
    // antihash
    CharsetViolation,
    NoSpecFound,
    CollisionUnreachable,
    // metrics
    EmptySuite,
    // cli-persistence
    Usage,
    WorkspaceBusy,
    Io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, std::string detail)
        : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
          code_(code),
          detail_(std::move(detail)) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    Errc code_;
    std::string detail_;
};

}  // namespace hackforge
