#pragma once

// Command-line front end: parses flags and an optional JSON config into a
// RunConfig, runs one command and writes its artifact.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qudit_wells/serialization.hpp"

namespace qw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;

struct RunConfig {
  std::string command;
  Json params = Json::object();
  std::string output_path;    // empty: standard output
  std::string output_format;  // json or csv
  std::uint64_t seed = 0;

  Json to_json() const;
  static RunConfig from_json(const Json& j);
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string artifact;
};

/// Runs the configured command. Throws std::invalid_argument (and json errors) on bad configuration.
CommandResult execute(const RunConfig& config);

/// Full CLI: parse, merge --config under explicit flags, execute, write output.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qw::cli
