#pragma once

#include <string>
#include <vector>

#include "cli.hpp"

namespace ergokit::cli {

// One output artifact produced by a command: file name relative to the out
// directory, recorded in the manifest with its content hash.
struct Artifact {
    std::string name;
};

// Each command returns the artifacts it wrote; the dispatcher hashes them
// into the manifest. Commands throw ConfigError for bad parameters and any
// other Error subclass for estimator failures.
std::vector<Artifact> cmd_simulate(const Config& cfg);
std::vector<Artifact> cmd_classify(const Config& cfg);
std::vector<Artifact> cmd_theorem_demo(const Config& cfg);
std::vector<Artifact> cmd_counterexample(const Config& cfg);
std::vector<Artifact> cmd_cover(const Config& cfg);
std::vector<Artifact> cmd_emit_plotdata(const Config& cfg);

// Default configuration (all keys present) for each subcommand.
Config default_config(const std::string& subcommand);

}  // namespace ergokit::cli
