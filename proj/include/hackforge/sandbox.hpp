#pragma once

// Compilation under configured toolchains and limited execution of binaries.

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hackforge/model.hpp"

namespace hackforge {

struct CompiledArtifact {
    std::filesystem::path binary_path;
    std::string toolchain_id;
    std::string compile_log;
    std::string run_template = "{bin}";
};

/// Exit status of a finished process: either a normal exit code or the
/// terminating signal.
struct ExitStatus {
    bool signaled = false;
    int value = 0;

    static ExitStatus exited(int code) { return {false, code}; }
    static ExitStatus killed_by(int sig) { return {true, sig}; }
    bool is_clean_exit() const { return !signaled && value == 0; }
    std::string describe() const;
    friend bool operator==(const ExitStatus&, const ExitStatus&) = default;
};

struct ExecutionResult {
    ExitStatus exit;
    std::int64_t cpu_time_ms = 0;
    std::int64_t wall_time_ms = 0;
    double peak_memory_mib = 0;
    Bytes stdout_data;
    Bytes stderr_data;
    /// stdout exceeded output_limit_bytes; stdout_data holds exactly the limit.
    bool truncated = false;
    /// The sandbox killed the process at the wall-clock cap.
    bool wall_killed = false;
};

enum class RunStatus { OK, TLE, MLE, RE };

std::string_view to_string(RunStatus s);

/// Priority TLE > MLE > RE > OK. Pure.
RunStatus classify_run(const ExecutionResult& r, const ResourceLimits& limits);

struct ExecOptions {
    /// Extra argv entries after the run template.
    std::vector<std::string> args;
    /// Files written into the fresh run directory before start (name -> bytes).
    std::vector<std::pair<std::string, Bytes>> files;
};

struct SandboxOptions {
    /// Root for run directories and the compile cache. Defaults to
    /// $HACKFORGE_WORKDIR or <tmp>/hackforge.
    std::filesystem::path workspace;
    std::vector<ToolchainSpec> toolchains = default_toolchains();
    /// Address-space ceiling = memory limit + max(slack, limit / 4).
    std::int64_t address_space_slack_mib = 64;
    std::int64_t compile_timeout_ms = 60'000;
    std::int64_t stack_limit_mib = 256;
    bool use_compile_cache = true;
};

/// Default workspace root from the environment.
std::filesystem::path default_workspace();

class Sandbox {
  public:
    explicit Sandbox(SandboxOptions options = {});

    const SandboxOptions& options() const { return options_; }
    const ToolchainSpec& toolchain(const std::string& id) const;
    bool has_toolchain(const std::string& id) const;

    /// Compiles once per (toolchain, source) and probes the toolchain on first
    /// use. Throws COMPILE_ERROR, TOOLCHAIN_UNAVAILABLE or COMPILE_TIMEOUT.
    CompiledArtifact compile(std::string_view source, const std::string& toolchain_id);
    CompiledArtifact compile(std::string_view source, const ToolchainSpec& toolchain,
                             const std::filesystem::path& workdir);

    /// Runs the artifact in a fresh temporary directory. Throws SANDBOX_FAILURE
    /// only for infrastructure faults.
    ExecutionResult execute(const CompiledArtifact& artifact, std::string_view input, const ResourceLimits& limits,
                            const ExecOptions& opts = {}) const;

    /// Compiler identity string (first line of `<compiler> --version`).
    std::string toolchain_identity(const std::string& id);

  private:
    bool probe(const ToolchainSpec& tc);
    std::filesystem::path fresh_dir(std::string_view prefix) const;

    SandboxOptions options_;
    std::mutex mutex_;
    std::map<std::string, bool> available_;
    std::map<std::string, std::string> identity_;
    std::map<std::string, std::shared_ptr<std::mutex>> compile_locks_;
};

/// Bundled testlib-compatible header placed next to sources that include it.
std::string_view bundled_testlib_header();

}  // namespace hackforge
