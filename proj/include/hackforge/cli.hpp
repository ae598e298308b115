#pragma once

// Command-line front end: hackforge.json config, workspace lock, run records.

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hackforge/calibration.hpp"
#include "hackforge/genforge.hpp"
#include "hackforge/provider.hpp"

namespace hackforge {

/// Parsed hackforge.json. Every field is optional in the file.
struct WorkspaceConfig {
    std::vector<ToolchainSpec> toolchains = default_toolchains();
    /// Keys time_limit_ms, memory_limit_mib, wall_clock_multiplier, output_limit_bytes.
    nlohmann::json limits = nlohmann::json::object();
    /// "scripted", "scripted:FILE", "remote", or {"kind": "remote", endpoint, model, ...}.
    nlohmann::json provider = "scripted";
    std::uint64_t seed = 0;
    int K = 3;
    int max_iter = 10;
    int trial_budget_T = 5;
    int stress_iterations = 200;
    AntihashConfig antihash;

    /// Throws USAGE on unknown keys or ill-typed values.
    static WorkspaceConfig from_json(const nlohmann::json& j);
    /// Missing file gives the defaults.
    static WorkspaceConfig load(const std::filesystem::path& file);
    nlohmann::json to_json() const;

    CampaignConfig campaign() const;
    CalibrationConfig calibration() const;
    void apply_limits(ProblemPackage& pkg) const;
};

/// Builds the provider named by spec ("scripted:FILE", "remote", ...).
/// default_transcript is used for a bare "scripted".
std::unique_ptr<Provider> make_provider(const nlohmann::json& spec, const std::filesystem::path& default_transcript);

/// Exclusive advisory lock on <workspace>/.lock; WORKSPACE_BUSY if held.
class WorkspaceLock {
  public:
    explicit WorkspaceLock(const std::filesystem::path& workspace);
    ~WorkspaceLock();
    WorkspaceLock(const WorkspaceLock&) = delete;
    WorkspaceLock& operator=(const WorkspaceLock&) = delete;

  private:
    int fd_ = -1;
};

/// Entry point; returns the process exit status (0 ok, 1 domain error, 2 usage).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hackforge
