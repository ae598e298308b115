#pragma once

// Problem package directory layout:
//
//   manifest.json
//   statement.md
//   tests/local/NNN.in [NNN.ans]
//   tests/official/NNN.in [NNN.ans]
//   calibration/refined_validator.cpp, calibration/refined_checker.cpp (optional)

#include <filesystem>
#include <vector>

#include "hackforge/model.hpp"

namespace hackforge {

ProblemPackage load_package(const std::filesystem::path& dir);

/// Writes manifest, statement, sources and suites. Test inputs and sources are
/// written byte-for-byte.
void save_package(const ProblemPackage& pkg, const std::filesystem::path& dir);

/// Reads tests/<name>/NNN.in (+ .ans) in index order. Missing dir -> empty.
std::vector<TestCase> load_suite(const std::filesystem::path& dir, Provenance provenance);
void save_suite(const std::vector<TestCase>& suite, const std::filesystem::path& dir);

}  // namespace hackforge
