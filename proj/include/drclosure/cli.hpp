#pragma once

// Command-line front end. Every subcommand writes one JSON document to the
// output stream; errors are reported as {"error": {...}} with exit code 2.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "drclosure/json_io.hpp"

namespace drclosure::cli {

/// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Deterministic summary of a fixture document (graph, levels, decoration,
/// mu, cover); the keys produced depend on which members are present.
json_io::Json fixture_summary(const json_io::Json& fixture);

struct FixtureCheck {
  std::string name;
  bool passed = false;
  std::vector<std::string> mismatches;  // JSON pointers into "expected"
  json_io::Json summary;
};

/// Compares the summary against the fixture's "expected" member; keys absent
/// from "expected" are not compared.
FixtureCheck check_fixture(const json_io::Json& fixture);

std::vector<std::filesystem::path> fixture_files(const std::filesystem::path& dir);
json_io::Json load_json(const std::filesystem::path& path);

/// Indented "key: value" rendering of a document.
std::string render_text(const json_io::Json& j);

}  // namespace drclosure::cli
