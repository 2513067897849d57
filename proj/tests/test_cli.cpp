#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "commands.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/numeric.hpp"
#include "ergokit/series.hpp"
#include "test_support.hpp"

using namespace ergokit;
using cli::Config;

namespace {

namespace fs = std::filesystem;

std::vector<std::string> lines_of(const std::string& path) {
    std::vector<std::string> lines;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::vector<double> csv_row(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(parse_double(field));
    return out;
}

Config base_config(const std::string& subcommand, const fs::path& out) {
    Config cfg = cli::default_config(subcommand);
    cfg["out"] = out.string();
    cfg["seed"] = "1";
    return cfg;
}

}  // namespace

TEST_CASE("typed config getters enforce their formats") {
    Config cfg = {{"a", "1.5"},   {"b", "abc"}, {"n", "12"},  {"f", "1.5"},
                  {"yes", "true"}, {"no", "0"},  {"seed", ""}, {"list", "1,2.5,3"}};
    CHECK(cli::get_double(cfg, "a") == 1.5);
    CHECK_THROWS_AS(cli::get_double(cfg, "b"), ConfigError);
    CHECK_THROWS_AS(cli::get_double(cfg, "missing"), ConfigError);
    CHECK(cli::get_int(cfg, "n") == 12);
    CHECK_THROWS_AS(cli::get_int(cfg, "f"), ConfigError);
    CHECK(cli::get_bool(cfg, "yes"));
    CHECK_FALSE(cli::get_bool(cfg, "no"));
    CHECK_THROWS_AS(cli::get_bool(cfg, "a"), ConfigError);
    CHECK_THROWS_AS(cli::get_seed(cfg), ConfigError);  // seed must be set
    cfg["seed"] = "42";
    CHECK(cli::get_seed(cfg) == 42);
    std::vector<double> list = cli::get_double_list(cfg, "list");
    REQUIRE(list.size() == 3);
    CHECK(list[1] == 2.5);
}

TEST_CASE("config files parse key=value lines and reject malformed ones") {
    testkit::TempDir dir("cli_cfgfile");
    const std::string good = (dir.path() / "good.cfg").string();
    write_file(good, "# comment\n  steps = 7 \r\nsystem=doubling\n\n");
    Config cfg = cli::parse_config_file(good);
    CHECK(cfg.at("steps") == "7");
    CHECK(cfg.at("system") == "doubling");
    CHECK(cfg.size() == 2);

    const std::string bad = (dir.path() / "bad.cfg").string();
    write_file(bad, "steps\n");
    CHECK_THROWS_AS(cli::parse_config_file(bad), ConfigError);
    CHECK_THROWS_AS(cli::parse_config_file((dir.path() / "nope.cfg").string()),
                    ConfigError);
}

TEST_CASE("simulate writes a trajectory with one row per step") {
    testkit::TempDir dir("cli_sim");
    Config cfg = base_config("simulate", dir.path());
    cfg["system"] = "doubling";
    cfg["steps"] = "5";
    std::string error;
    REQUIRE(cli::run_command("simulate", cfg, &error) == cli::kExitOk);
    CHECK(error.empty());

    std::vector<std::string> rows = lines_of((dir.path() / "trajectory.csv").string());
    REQUIRE(rows.size() == 7);  // header + t = 0..5
    CHECK(rows[0] == "t,x1");

    auto hashes = cli::manifest_hashes((dir.path() / "manifest.json").string());
    REQUIRE(hashes.count("trajectory.csv") == 1);
    CHECK(hashes.at("trajectory.csv").size() == 16);
    CHECK_FALSE(fs::exists(dir.path() / ".ergokit.lock"));  // lock released
}

TEST_CASE("configuration errors exit with code 2 and a message") {
    testkit::TempDir dir("cli_badcfg");
    Config cfg = base_config("simulate", dir.path());
    cfg["system"] = "not_a_system";
    std::string error;
    CHECK(cli::run_command("simulate", cfg, &error) == cli::kExitConfig);
    CHECK_FALSE(error.empty());

    Config noseed = base_config("simulate", dir.path());
    noseed["seed"] = "";
    CHECK(cli::run_command("simulate", noseed, &error) == cli::kExitConfig);

    Config unknown = base_config("simulate", dir.path());
    CHECK(cli::run_command("not-a-command", unknown, &error) == cli::kExitConfig);
}

TEST_CASE("simulated skew-product fiber coordinate decays monotonically") {
    testkit::TempDir dir("cli_skew");
    Config cfg = base_config("simulate", dir.path());
    cfg["system"] = "counterexample";
    cfg["y0"] = "0.2";
    cfg["t-max"] = "5";
    cfg["t-step"] = "0.5";
    std::string error;
    REQUIRE(cli::run_command("simulate", cfg, &error) == cli::kExitOk);

    std::vector<std::string> rows = lines_of((dir.path() / "trajectory.csv").string());
    REQUIRE(rows.size() == 12);  // header + t = 0, 0.5, ..., 5
    CHECK(rows[0] == "t,x1,x2,x3");
    double prev = 1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<double> vals = csv_row(rows[i]);
        REQUIRE(vals.size() == 4);
        CHECK(vals[3] < prev);
        CHECK(vals[3] > 0.0);
        prev = vals[3];
    }
}

TEST_CASE("theorem demo rejects a radius outside the guarantee regime") {
    testkit::TempDir dir("cli_delta");
    Config cfg = base_config("theorem-demo", dir.path());
    cfg["epsilon"] = "0.3";
    cfg["delta"] = "0.05";  // equals epsilon/6: the strict inequality fails
    std::string error;
    CHECK(cli::run_command("theorem-demo", cfg, &error) == cli::kExitConfig);
    CHECK(error.find("delta") != std::string::npos);
}

TEST_CASE("theorem demo maps an unsettled orbit track to a runtime failure") {
    testkit::TempDir dir("cli_track");
    Config cfg = base_config("theorem-demo", dir.path());
    cfg["system"] = "doubling_contract";
    cfg["x0"] = "0.3,1.95";
    cfg["track-T"] = "2";  // radial gap is still 0.95/4 at the horizon
    cfg["n-nu"] = "500";
    cfg["n-mu"] = "1000";
    cfg["n-candidates"] = "200";
    cfg["cehyp"] = "false";
    std::string error;
    CHECK(cli::run_command("theorem-demo", cfg, &error) == cli::kExitRuntime);
    CHECK_FALSE(error.empty());
}

TEST_CASE("plot data unions time grids and marks missing cells") {
    testkit::TempDir dir("cli_plot");
    SeriesRecord a("alpha", {0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
    SeriesRecord b("beta", {0.0, 0.5, 2.0}, {5.0, 6.0, 7.0});
    const std::string pa = (dir.path() / "a.csv").string();
    const std::string pb = (dir.path() / "b.csv").string();
    write_series_csv(a, pa);
    write_series_csv(b, pb);

    Config cfg = base_config("emit-plotdata", dir.path());
    cfg["in"] = pa + ";" + pb;
    cfg["name"] = "joint";
    std::string error;
    REQUIRE(cli::run_command("emit-plotdata", cfg, &error) == cli::kExitOk);
    CHECK(fs::exists(dir.path() / "joint.dat"));
    CHECK(fs::exists(dir.path() / "joint.svg"));

    const std::string dat = read_file((dir.path() / "joint.dat").string());
    CHECK(dat.find("alpha") != std::string::npos);
    CHECK(dat.find("beta") != std::string::npos);
    CHECK(dat.find("nan") != std::string::npos);  // alpha has no t = 0.5 cell
    const std::string svg = read_file((dir.path() / "joint.svg").string());
    CHECK(svg.find("<svg") != std::string::npos);

    Config empty_cfg = base_config("emit-plotdata", dir.path() / "e");
    CHECK(cli::run_command("emit-plotdata", empty_cfg, &error) == cli::kExitConfig);

    Config missing = base_config("emit-plotdata", dir.path() / "m");
    missing["in"] = (dir.path() / "absent.csv").string();
    CHECK(cli::run_command("emit-plotdata", missing, &error) == cli::kExitConfig);
}

TEST_CASE("outputs are byte-identical across thread counts") {
    testkit::TempDir dir1("cli_thr1");
    testkit::TempDir dir2("cli_thr4");
    Config cfg = base_config("classify", fs::path("unused"));
    cfg["system"] = "doubling_contract";
    cfg["experiment"] = "attracting";
    cfg["n-particles"] = "2000";
    cfg["n-ref"] = "2000";
    cfg["t-list"] = "0,2,4";

    std::string error;
    set_thread_count(1);
    cfg["out"] = dir1.path().string();
    REQUIRE(cli::run_command("classify", cfg, &error) == cli::kExitOk);
    set_thread_count(4);
    cfg["out"] = dir2.path().string();
    REQUIRE(cli::run_command("classify", cfg, &error) == cli::kExitOk);
    set_thread_count(1);

    auto h1 = cli::manifest_hashes((dir1.path() / "manifest.json").string());
    auto h2 = cli::manifest_hashes((dir2.path() / "manifest.json").string());
    REQUIRE(h1.size() >= 2);  // series + summary
    REQUIRE(h1.size() == h2.size());
    for (const auto& [name, hash] : h1) {
        REQUIRE(h2.count(name) == 1);
        CHECK(h2.at(name) == hash);
    }
}

TEST_CASE("re-running a manifest reproduces every output hash") {
    testkit::TempDir dir("cli_replay");
    Config cfg = base_config("cover", dir.path());
    cfg["system"] = "doubling";
    cfg["tau"] = "3";
    cfg["delta"] = "0.05";
    cfg["n-candidates"] = "500";
    std::string error;
    REQUIRE(cli::run_command("cover", cfg, &error) == cli::kExitOk);
    const std::string manifest = (dir.path() / "manifest.json").string();
    auto before = cli::manifest_hashes(manifest);
    REQUIRE_FALSE(before.empty());

    REQUIRE(cli::run_manifest(manifest, &error) == cli::kExitOk);
    auto after = cli::manifest_hashes(manifest);
    REQUIRE(before.size() == after.size());
    for (const auto& [name, hash] : before) CHECK(after.at(name) == hash);
}

TEST_CASE("argv entry point: flags override config-file entries") {
    testkit::TempDir dir("cli_argv");
    const std::string file = (dir.path() / "run.cfg").string();
    write_file(file, "steps=7\nsystem=doubling\n");
    const std::string out = (dir.path() / "out").string();
    std::vector<const char*> argv = {"ergokit", "simulate", "--config", file.c_str(),
                                     "--steps", "3",        "--seed",   "5",
                                     "--out",   out.c_str()};
    REQUIRE(cli::run_main(static_cast<int>(argv.size()), argv.data()) == cli::kExitOk);
    std::vector<std::string> rows = lines_of(out + "/trajectory.csv");
    CHECK(rows.size() == 5);  // header + t = 0..3: the flag wins

    // Unknown keys in a config file are rejected up front.
    const std::string junk = (dir.path() / "junk.cfg").string();
    write_file(junk, "not-a-key=1\n");
    std::vector<const char*> argv2 = {"ergokit", "simulate", "--config", junk.c_str(),
                                      "--seed",  "5",        "--out",    out.c_str()};
    CHECK(cli::run_main(static_cast<int>(argv2.size()), argv2.data()) ==
          cli::kExitConfig);

    // No subcommand: usage plus the config exit code.
    std::vector<const char*> argv3 = {"ergokit"};
    CHECK(cli::run_main(static_cast<int>(argv3.size()), argv3.data()) ==
          cli::kExitConfig);
}
