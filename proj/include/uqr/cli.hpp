#pragma once

// Command-line driver. Parameters come from built-in defaults, an optional
// `key = value` config file and command-line flags, in increasing priority;
// UQRLAB_OUTPUT_DIR may replace the output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace uqr::cli {

inline constexpr const char* kOutputDirEnv = "UQRLAB_OUTPUT_DIR";

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> params;  // every key of the command, resolved
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "uqrlab-out";
    unsigned threads = 0;  // 0 = machine parallelism
};

/// Throws InvalidParameter for unknown keys, malformed values or a missing
/// subcommand. Returns nullopt when help was requested (and printed to `out`).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Runs the command and writes its artifacts plus manifest.json. Returns the
/// process exit code; library errors propagate as exceptions.
int execute(const RunConfig& config, std::ostream& out);

/// parse_args + execute with error reporting: 2 and a JSON error on `err` for
/// invalid parameters, 1 for internal failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uqr::cli
