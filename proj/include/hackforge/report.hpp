#pragma once

// JSON renderings of judge and campaign results, shared by the CLI and tests.

#include <nlohmann/json.hpp>

#include "hackforge/genforge.hpp"

namespace hackforge {

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const JudgeOutcome& o);
/// The input bytes are omitted; they live in a separate .in file.
nlohmann::json to_json(const HackAttempt& a, bool with_input = false);
nlohmann::json to_json(const CascadeResult& r);

}  // namespace hackforge
