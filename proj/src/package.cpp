#include "hackforge/package.hpp"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>

#include "hackforge/error.hpp"

namespace hackforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& field, const std::string& why = "") {
    throw Error(Errc::MalformedManifest, field + (why.empty() ? "" : " (" + why + ")"));
}

const json& require(const json& obj, const char* field, const std::string& prefix = "") {
    if (!obj.is_object() || !obj.contains(field)) malformed(prefix + field, "missing");
    return obj.at(field);
}

std::string require_string(const json& obj, const char* field, const std::string& prefix = "") {
    const json& v = require(obj, field, prefix);
    if (!v.is_string()) malformed(prefix + field, "expected string");
    return v.get<std::string>();
}

std::int64_t require_int(const json& obj, const char* field) {
    const json& v = require(obj, field);
    if (!v.is_number_integer()) malformed(field, "expected integer");
    return v.get<std::int64_t>();
}

std::string read_ref(const fs::path& root, const std::string& rel) {
    fs::path p = root / rel;
    if (!fs::is_regular_file(p)) throw Error(Errc::DanglingReference, rel);
    return read_file(p);
}

ToolSource read_tool(const fs::path& root, const json& j, const std::string& field) {
    ToolSource tool;
    if (j.is_string()) {
        tool.path = j.get<std::string>();
    } else if (j.is_object()) {
        tool.path = require_string(j, "source", field + ".");
        if (j.contains("toolchain")) tool.toolchain_id = require_string(j, "toolchain", field + ".");
        if (j.contains("frozen")) {
            if (!j["frozen"].is_boolean()) malformed(field + ".frozen", "expected boolean");
            tool.frozen = j["frozen"].get<bool>();
        }
    } else {
        malformed(field, "expected path or object");
    }
    tool.source = read_ref(root, tool.path);
    return tool;
}

Submission read_submission(const fs::path& root, const json& j, const std::string& field) {
    Submission s;
    s.source_path = require_string(j, "source", field + ".");
    s.toolchain_id = j.contains("toolchain") ? require_string(j, "toolchain", field + ".") : "gpp17";
    s.source = read_ref(root, s.source_path);
    return s;
}

std::optional<std::size_t> test_index_of(const fs::path& p) {
    std::string stem = p.stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    return static_cast<std::size_t>(std::stoull(stem));
}

json tool_json(const ToolSource& t) {
    json j = {{"source", t.path}, {"toolchain", t.toolchain_id}};
    if (t.frozen) j["frozen"] = true;
    return j;
}

}  // namespace

std::vector<TestCase> load_suite(const fs::path& dir, Provenance provenance) {
    std::vector<std::pair<std::size_t, fs::path>> inputs;
    if (!fs::is_directory(dir)) return {};
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".in") continue;
        auto idx = test_index_of(entry.path());
        if (!idx) continue;
        inputs.emplace_back(*idx, entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    std::vector<TestCase> suite;
    suite.reserve(inputs.size());
    for (const auto& [idx, path] : inputs) {
        fs::path ans = path;
        ans.replace_extension(".ans");
        std::optional<Bytes> answer;
        if (fs::is_regular_file(ans)) answer = read_file(ans);
        suite.emplace_back(read_file(path), provenance, std::move(answer),
                           std::map<std::string, std::string>{{"file", path.filename().string()}});
    }
    return suite;
}

void save_suite(const std::vector<TestCase>& suite, const fs::path& dir) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        std::string stem = zero_pad(i + 1, 3);
        write_file(dir / (stem + ".in"), suite[i].input);
        if (suite[i].jury_answer) write_file(dir / (stem + ".ans"), *suite[i].jury_answer);
    }
}

ProblemPackage load_package(const fs::path& dir) {
    fs::path manifest_path = dir / "manifest.json";
    if (!fs::is_regular_file(manifest_path)) throw Error(Errc::MissingManifest, manifest_path.string());
    json m;
    try {
        m = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
        malformed("manifest.json", e.what());
    }
    if (!m.is_object()) malformed("manifest.json", "expected object");

    ProblemPackage pkg;
    pkg.id = require_string(m, "id");
    pkg.limits.time_limit_ms = require_int(m, "time_limit_ms");
    pkg.limits.memory_limit_mib = require_int(m, "memory_limit_mib");
    if (m.contains("wall_clock_multiplier")) {
        if (!m["wall_clock_multiplier"].is_number()) malformed("wall_clock_multiplier", "expected number");
        pkg.limits.wall_clock_multiplier = m["wall_clock_multiplier"].get<double>();
    }
    if (m.contains("output_limit_bytes")) pkg.limits.output_limit_bytes = require_int(m, "output_limit_bytes");

    if (fs::is_regular_file(dir / "statement.md")) pkg.statement = read_file(dir / "statement.md");

    const json& checker = require(m, "checker");
    std::string mode = require_string(checker, "mode", "checker.");
    if (mode == "token_diff") {
        pkg.checker_mode = CheckerMode::TokenDiff;
    } else if (mode == "custom") {
        pkg.checker_mode = CheckerMode::Custom;
        pkg.checker = read_tool(dir, checker, "checker");
    } else {
        malformed("checker.mode", "expected token_diff or custom");
    }

    if (m.contains("validator") && !m["validator"].is_null()) pkg.validator = read_tool(dir, m["validator"], "validator");

    pkg.std_solution = read_submission(dir, require(m, "std"), "std");
    pkg.std_solution.id = "std";
    pkg.std_solution.ground_truth = GroundTruth::Correct;

    if (m.contains("submissions")) {
        const json& subs = m["submissions"];
        if (!subs.is_array()) malformed("submissions", "expected array");
        for (std::size_t i = 0; i < subs.size(); ++i) {
            std::string field = "submissions[" + std::to_string(i) + "]";
            Submission s = read_submission(dir, subs[i], field);
            s.id = require_string(subs[i], "id", field + ".");
            if (subs[i].contains("label") && !subs[i]["label"].is_null()) {
                std::string label = require_string(subs[i], "label", field + ".");
                if (label == "correct")
                    s.ground_truth = GroundTruth::Correct;
                else if (label == "incorrect")
                    s.ground_truth = GroundTruth::Incorrect;
                else
                    malformed(field + ".label", "expected correct, incorrect or null");
            }
            pkg.submissions.push_back(std::move(s));
        }
    }

    if (m.contains("stress_generator")) {
        const json& g = m["stress_generator"];
        GeneratorProgram gen;
        gen.path = require_string(g, "source", "stress_generator.");
        if (g.contains("toolchain")) gen.toolchain_id = require_string(g, "toolchain", "stress_generator.");
        if (g.contains("seed")) {
            std::string seed = require_string(g, "seed", "stress_generator.");
            if (seed == "argv")
                gen.seed_strategy = SeedStrategy::ArgvSeed;
            else if (seed == "self")
                gen.seed_strategy = SeedStrategy::SelfSeeded;
            else
                malformed("stress_generator.seed", "expected argv or self");
        }
        gen.source = read_ref(dir, gen.path);
        pkg.stress_generator = std::move(gen);
    }
    if (m.contains("antihash_template")) pkg.antihash_template = require_string(m, "antihash_template");
    if (m.contains("allow_empty_input")) pkg.allow_empty_input = m["allow_empty_input"].get<bool>();

    pkg.local_suite = load_suite(dir / "tests" / "local", Provenance::Original);
    if (fs::is_directory(dir / "tests" / "official"))
        pkg.official_suite = load_suite(dir / "tests" / "official", Provenance::Original);

    if (pkg.validator && fs::is_regular_file(dir / "calibration" / "refined_validator.cpp")) {
        ToolSource refined = *pkg.validator;
        refined.path = "calibration/refined_validator.cpp";
        refined.source = read_file(dir / refined.path);
        pkg.refined_validator = std::move(refined);
    }
    if (pkg.checker && fs::is_regular_file(dir / "calibration" / "refined_checker.cpp")) {
        ToolSource refined = *pkg.checker;
        refined.path = "calibration/refined_checker.cpp";
        refined.source = read_file(dir / refined.path);
        pkg.refined_checker = std::move(refined);
    }

    pkg.validate();
    return pkg;
}

void save_package(const ProblemPackage& pkg, const fs::path& dir) {
    fs::create_directories(dir);
    json m;
    m["id"] = pkg.id;
    m["time_limit_ms"] = pkg.limits.time_limit_ms;
    m["memory_limit_mib"] = pkg.limits.memory_limit_mib;
    m["wall_clock_multiplier"] = pkg.limits.wall_clock_multiplier;
    m["output_limit_bytes"] = pkg.limits.output_limit_bytes;

    auto put_tool = [&](const ToolSource& t, const std::string& default_path) {
        ToolSource copy = t;
        if (copy.path.empty()) copy.path = default_path;
        write_file(dir / copy.path, copy.source);
        return tool_json(copy);
    };

    if (pkg.checker_mode == CheckerMode::TokenDiff) {
        m["checker"] = {{"mode", "token_diff"}};
    } else {
        json c = put_tool(*pkg.checker, "checker/check.cpp");
        c["mode"] = "custom";
        m["checker"] = c;
    }
    if (pkg.validator) m["validator"] = put_tool(*pkg.validator, "validator/validator.cpp");

    auto put_submission = [&](const Submission& s, const std::string& default_path) {
        std::string path = s.source_path.empty() ? default_path : s.source_path;
        write_file(dir / path, s.source);
        return json{{"source", path}, {"toolchain", s.toolchain_id}};
    };
    m["std"] = put_submission(pkg.std_solution, "std/std.cpp");
    json subs = json::array();
    for (const auto& s : pkg.submissions) {
        json j = put_submission(s, "submissions/" + s.id + ".cpp");
        j["id"] = s.id;
        if (!s.ground_truth)
            j["label"] = nullptr;
        else
            j["label"] = *s.ground_truth == GroundTruth::Correct ? "correct" : "incorrect";
        subs.push_back(std::move(j));
    }
    m["submissions"] = subs;

    if (pkg.stress_generator) {
        const auto& g = *pkg.stress_generator;
        std::string path = g.path.empty() ? "generators/stress.cpp" : g.path;
        write_file(dir / path, g.source);
        m["stress_generator"] = {{"source", path},
                                 {"toolchain", g.toolchain_id},
                                 {"seed", g.seed_strategy == SeedStrategy::ArgvSeed ? "argv" : "self"}};
    }
    if (pkg.antihash_template) m["antihash_template"] = *pkg.antihash_template;
    if (pkg.allow_empty_input) m["allow_empty_input"] = true;

    write_file(dir / "manifest.json", m.dump(2) + "\n");
    write_file(dir / "statement.md", pkg.statement);
    save_suite(pkg.local_suite, dir / "tests" / "local");
    if (pkg.official_suite) save_suite(*pkg.official_suite, dir / "tests" / "official");
    if (pkg.refined_validator) write_file(dir / "calibration" / "refined_validator.cpp", pkg.refined_validator->source);
    if (pkg.refined_checker) write_file(dir / "calibration" / "refined_checker.cpp", pkg.refined_checker->source);
}

}  // namespace hackforge
