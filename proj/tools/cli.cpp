#include "cli.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/numeric.hpp"
#include "json.hpp"

namespace ergokit::cli {

namespace fs = std::filesystem;

std::string get_string(const Config& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) {
        throw ConfigError("missing config key '" + key + "'");
    }
    return it->second;
}

double get_double(const Config& cfg, const std::string& key) {
    const std::string raw = get_string(cfg, key);
    try {
        return parse_double(raw);
    } catch (const Error&) {
        throw ConfigError("config key '" + key + "' is not a number: '" + raw + "'");
    }
}

long long get_int(const Config& cfg, const std::string& key) {
    const std::string raw = get_string(cfg, key);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc() || ptr != raw.data() + raw.size()) {
        throw ConfigError("config key '" + key + "' is not an integer: '" + raw + "'");
    }
    return value;
}

std::uint64_t get_seed(const Config& cfg) {
    const std::string raw = get_string(cfg, "seed");
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc() || ptr != raw.data() + raw.size()) {
        throw ConfigError("config key 'seed' is not an unsigned integer: '" + raw + "'");
    }
    return value;
}

bool get_bool(const Config& cfg, const std::string& key) {
    const std::string raw = get_string(cfg, key);
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + raw + "'");
}

std::vector<double> get_double_list(const Config& cfg, const std::string& key) {
    const std::string raw = get_string(cfg, key);
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t comma = raw.find(',', start);
        if (comma == std::string::npos) comma = raw.size();
        std::string field = raw.substr(start, comma - start);
        if (!field.empty()) {
            try {
                values.push_back(parse_double(field));
            } catch (const Error&) {
                throw ConfigError("config key '" + key + "' has a bad entry: '" + field + "'");
            }
        }
        start = comma + 1;
    }
    return values;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    Config cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos || line[begin] == '#') continue;
        std::size_t eq = line.find('=', begin);
        if (eq == std::string::npos) {
            throw ConfigError("config file " + path + ":" + std::to_string(line_no) +
                              ": expected key=value");
        }
        std::string key = line.substr(begin, eq - begin);
        std::size_t key_end = key.find_last_not_of(" \t");
        key = key.substr(0, key_end == std::string::npos ? 0 : key_end + 1);
        std::string value = line.substr(eq + 1);
        std::size_t vbegin = value.find_first_not_of(" \t");
        std::size_t vend = value.find_last_not_of(" \t");
        value = vbegin == std::string::npos ? "" : value.substr(vbegin, vend - vbegin + 1);
        if (key.empty()) {
            throw ConfigError("config file " + path + ":" + std::to_string(line_no) +
                              ": empty key");
        }
        cfg[key] = value;
    }
    return cfg;
}

namespace {

// Output directory: config "out" if set, else ERGOKIT_OUT, else cwd.
fs::path output_root(const Config& cfg) {
    auto it = cfg.find("out");
    if (it != cfg.end() && !it->second.empty()) return fs::path(it->second);
    if (const char* env = std::getenv("ERGOKIT_OUT"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::current_path();
}

// Guards an output directory against concurrent runs via an O_EXCL lockfile.
class DirLock {
  public:
    explicit DirLock(const fs::path& dir) : path_(dir / ".ergokit.lock") {
        int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) {
            if (errno == EEXIST) {
                throw ConfigError("output directory is locked by another run: " +
                                  path_.string());
            }
            throw ConfigError("cannot create lockfile " + path_.string());
        }
        ::close(fd);
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    fs::path path_;
};

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const Config& cfg, const std::vector<Artifact>& artifacts) {
    nlohmann::ordered_json doc;
    doc["toolkit"] = "ergokit";
    doc["version"] = "0.1.0";
    doc["subcommand"] = subcommand;
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    for (const auto& [key, value] : cfg) conf[key] = value;
    doc["config"] = conf;
    nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
    for (const Artifact& artifact : artifacts) {
        const std::uint64_t hash = fnv1a64_file((dir / artifact.name).string());
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
        outputs[artifact.name] = std::string(buf);
    }
    doc["outputs"] = outputs;
    write_file((dir / "manifest.json").string(), doc.dump(2) + "\n");
}

std::vector<Artifact> dispatch(const std::string& subcommand, const Config& cfg) {
    if (subcommand == "simulate") return cmd_simulate(cfg);
    if (subcommand == "classify") return cmd_classify(cfg);
    if (subcommand == "theorem-demo") return cmd_theorem_demo(cfg);
    if (subcommand == "counterexample") return cmd_counterexample(cfg);
    if (subcommand == "cover") return cmd_cover(cfg);
    if (subcommand == "emit-plotdata") return cmd_emit_plotdata(cfg);
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

}  // namespace

int run_command(const std::string& subcommand, const Config& cfg, std::string* error) {
    try {
        const fs::path dir = output_root(cfg);
        fs::create_directories(dir);
        DirLock lock(dir);
        std::vector<Artifact> artifacts = dispatch(subcommand, cfg);
        write_manifest(dir, subcommand, cfg, artifacts);
        return kExitOk;
    } catch (const ConfigError& e) {
        if (error != nullptr) *error = e.what();
        return kExitConfig;
    } catch (const std::exception& e) {
        if (error != nullptr) *error = e.what();
        return kExitRuntime;
    }
}

int run_manifest(const std::string& manifest_path, std::string* error) {
    std::string subcommand;
    Config cfg;
    try {
        nlohmann::json doc = nlohmann::json::parse(read_file(manifest_path));
        subcommand = doc.at("subcommand").get<std::string>();
        for (const auto& [key, value] : doc.at("config").items()) {
            cfg[key] = value.get<std::string>();
        }
    } catch (const std::exception& e) {
        if (error != nullptr) *error = std::string("bad manifest: ") + e.what();
        return kExitConfig;
    }
    return run_command(subcommand, cfg, error);
}

std::map<std::string, std::string> manifest_hashes(const std::string& manifest_path) {
    nlohmann::json doc = nlohmann::json::parse(read_file(manifest_path));
    std::map<std::string, std::string> hashes;
    for (const auto& [name, hash] : doc.at("outputs").items()) {
        hashes[name] = hash.get<std::string>();
    }
    return hashes;
}

namespace {

// Declarative option list per subcommand so defaults, config files, and
// flags resolve through one code path.
struct SubSpec {
    std::string name;
    std::string help;
};

const std::vector<SubSpec>& subcommands() {
    static const std::vector<SubSpec> specs = {
        {"simulate", "evolve a trajectory or particle ensemble and write CSV snapshots"},
        {"classify", "run a measure-classification experiment and write series + summary"},
        {"theorem-demo", "run the cover/coarse-graining pipeline end to end"},
        {"counterexample", "emit diagnostics for the slow-spiral skew-product flow"},
        {"cover", "build a bi-separated Bowen cover and write its centers"},
        {"emit-plotdata", "merge series CSVs into a gnuplot .dat file and an SVG chart"},
    };
    return specs;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
    CLI::App app{"ergokit: particle-ensemble estimators for semiflow invariant measures"};
    app.require_subcommand(0, 1);

    std::string manifest_path;
    app.add_option("--manifest", manifest_path,
                   "re-run the subcommand recorded in a manifest file");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default 1)");

    struct SubState {
        CLI::App* sub = nullptr;
        std::string config_path;
        std::map<std::string, std::string> flag_values;
        std::map<std::string, CLI::Option*> flag_options;
    };
    std::map<std::string, SubState> states;

    for (const SubSpec& spec : subcommands()) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        SubState& state = states[spec.name];
        state.sub = sub;
        sub->add_option("--config", state.config_path, "key=value config file");
        for (const auto& [key, value] : default_config(spec.name)) {
            std::string& slot = state.flag_values[key];
            slot = value;
            state.flag_options[key] =
                sub->add_option("--" + key, slot, "default: " + (value.empty() ? "(empty)" : value));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (threads > 0) set_thread_count(static_cast<unsigned>(threads));

    std::string error;
    int code = kExitOk;
    if (!manifest_path.empty()) {
        code = run_manifest(manifest_path, &error);
    } else {
        CLI::App* chosen = nullptr;
        for (auto& [name, state] : states) {
            if (state.sub->parsed()) chosen = state.sub;
        }
        if (chosen == nullptr) {
            std::cerr << app.help() << std::flush;
            return kExitConfig;
        }
        const std::string name = chosen->get_name();
        SubState& state = states[name];
        Config cfg = default_config(name);
        if (!state.config_path.empty()) {
            try {
                for (const auto& [key, value] : parse_config_file(state.config_path)) {
                    if (cfg.find(key) == cfg.end()) {
                        throw ConfigError("config file sets unknown key '" + key + "'");
                    }
                    cfg[key] = value;
                }
            } catch (const ConfigError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfig;
            }
        }
        for (const auto& [key, option] : state.flag_options) {
            if (option->count() > 0) cfg[key] = state.flag_values[key];
        }
        code = run_command(name, cfg, &error);
    }
    if (code != kExitOk) {
        std::cerr << "error: " << error << "\n";
    }
    return code;
}

}  // namespace ergokit::cli
