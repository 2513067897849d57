#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ergokit::cli {

// Resolved configuration of one run: flat string key=value map. Defaults,
// then config-file entries, then command-line flags (flags win). The map is
// echoed verbatim into the run manifest, so re-running a manifest replays
// exactly this state.
using Config = std::map<std::string, std::string>;

// Exit codes: 0 success, 2 configuration error, 3 runtime estimator failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Typed access with ConfigError on malformed values.
std::string get_string(const Config& cfg, const std::string& key);
double get_double(const Config& cfg, const std::string& key);
long long get_int(const Config& cfg, const std::string& key);
std::uint64_t get_seed(const Config& cfg);
bool get_bool(const Config& cfg, const std::string& key);
std::vector<double> get_double_list(const Config& cfg, const std::string& key);

// Parses a flat key=value config file ('#' comments, blank lines ignored).
Config parse_config_file(const std::string& path);

// Runs one subcommand against a fully resolved config; writes outputs and
// the manifest under the config's "out" directory. Exceptions are mapped to
// the exit-code contract and the message stored in *error when given.
int run_command(const std::string& subcommand, const Config& cfg,
                std::string* error = nullptr);

// Re-runs the subcommand recorded in a manifest file with its echoed config.
int run_manifest(const std::string& manifest_path, std::string* error = nullptr);

// Full argv entry point (parses flags, dispatches, prints errors to stderr).
int run_main(int argc, const char* const* argv);

// Reads the "outputs" section of a manifest: file name -> content hash.
std::map<std::string, std::string> manifest_hashes(const std::string& manifest_path);

}  // namespace ergokit::cli
