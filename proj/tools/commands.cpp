#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include "ergokit/classify.hpp"
#include "ergokit/counterexample.hpp"
#include "ergokit/cover.hpp"
#include "ergokit/density.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/measure.hpp"
#include "ergokit/ratio.hpp"
#include "ergokit/rng.hpp"
#include "ergokit/series.hpp"
#include "ergokit/system.hpp"
#include "plot.hpp"

namespace ergokit::cli {

namespace fs = std::filesystem;

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
    return seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
}

fs::path out_dir(const Config& cfg) {
    auto it = cfg.find("out");
    if (it != cfg.end() && !it->second.empty()) return fs::path(it->second);
    if (const char* env = std::getenv("ERGOKIT_OUT"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::current_path();
}

std::vector<std::string> split(const std::string& raw, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t pos = raw.find(sep, start);
        if (pos == std::string::npos) pos = raw.size();
        fields.push_back(raw.substr(start, pos - start));
        start = pos + 1;
    }
    if (!fields.empty() && fields.back().empty()) fields.pop_back();
    return fields;
}

std::vector<double> parse_numbers(const std::string& raw, const std::string& what) {
    std::vector<double> values;
    for (const std::string& field : split(raw, ',')) {
        try {
            values.push_back(parse_double(field));
        } catch (const Error&) {
            throw ConfigError(what + " has a bad number: '" + field + "'");
        }
    }
    return values;
}

Point parse_point(const MetricSpaceSpec& space, const std::string& raw,
                  const std::string& key) {
    std::vector<double> coords = parse_numbers(raw, "config key '" + key + "'");
    if (static_cast<int>(coords.size()) != space.dim()) {
        throw ConfigError("config key '" + key + "' needs " + std::to_string(space.dim()) +
                          " coordinates, got " + std::to_string(coords.size()));
    }
    Point p = space.make_point(coords);
    if (!space.contains(p)) {
        throw ConfigError("config key '" + key + "' lies outside the space");
    }
    return p;
}

// Box syntax: per-axis "lo,hi" pairs joined by ';', e.g. "0,1;0.5,1.5".
DensitySpec parse_box(const MetricSpaceSpec& space, const std::string& raw,
                      const std::string& key) {
    std::vector<std::string> axes = split(raw, ';');
    if (static_cast<int>(axes.size()) != space.dim()) {
        throw ConfigError("config key '" + key + "' needs " + std::to_string(space.dim()) +
                          " axis ranges, got " + std::to_string(axes.size()));
    }
    std::vector<double> lo;
    std::vector<double> hi;
    for (const std::string& axis : axes) {
        std::vector<double> pair = parse_numbers(axis, "config key '" + key + "'");
        if (pair.size() != 2) {
            throw ConfigError("config key '" + key + "': each axis needs lo,hi");
        }
        lo.push_back(pair[0]);
        hi.push_back(pair[1]);
    }
    return uniform_box(space, std::move(lo), std::move(hi));
}

// Default initial box per space shape: the full annulus band, the full
// torus, the full circle. Systems on unbounded spaces need an explicit box.
DensitySpec default_box(const System& sys) {
    const MetricSpaceSpec& space = sys.space;
    std::vector<double> lo;
    std::vector<double> hi;
    for (const Axis& axis : space.axes()) {
        if (axis.kind == AxisKind::Periodic) {
            lo.push_back(0.0);
            hi.push_back(1.0);
        } else if (std::isfinite(axis.lo) && std::isfinite(axis.hi)) {
            const double pad = 0.25 * (axis.hi - axis.lo);
            lo.push_back(axis.lo + pad);
            hi.push_back(axis.hi - pad);
        } else {
            throw ConfigError("system '" + sys.id +
                              "' has an unbounded axis; pass init-box explicitly");
        }
    }
    return uniform_box(space, std::move(lo), std::move(hi));
}

Point default_start(const System& sys) {
    std::vector<double> coords;
    for (const Axis& axis : sys.space.axes()) {
        if (axis.kind == AxisKind::Periodic) {
            coords.push_back(0.1);
        } else if (std::isfinite(axis.lo) && std::isfinite(axis.hi)) {
            coords.push_back(0.5 * (axis.lo + axis.hi) + 0.1);
        } else {
            coords.push_back(0.1);
        }
    }
    return sys.space.make_point(coords);
}

// Observable grammar: "const:c", "coord:axis[:scale]",
// "cos:k1,...,kd[:scale]", "cone:c1,...,cd:radius". "auto" picks a unit
// cosine in the first ("auto") or last ("auto2") coordinate.
TestFunction parse_observable(const MetricSpaceSpec& space, std::string text) {
    if (text == "auto" || text == "auto2") {
        std::vector<int> freq(static_cast<std::size_t>(space.dim()), 0);
        // Frequencies only make sense along periodic axes; fall back to the
        // first periodic axis (or a coordinate probe when there is none).
        int chosen = -1;
        for (int i = 0; i < space.dim(); ++i) {
            const bool periodic = space.axes()[static_cast<std::size_t>(i)].kind ==
                                  AxisKind::Periodic;
            if (periodic && (chosen < 0 || text == "auto2")) chosen = i;
        }
        if (chosen < 0) return probes::coordinate(space, 0, 1.0);
        freq[static_cast<std::size_t>(chosen)] = 1;
        return probes::cos_wave(space, freq, 1.0);
    }
    std::vector<std::string> parts = split(text, ':');
    if (parts.empty()) {
        throw ConfigError("empty observable spec");
    }
    const std::string& kind = parts[0];
    auto scale_or = [&](std::size_t idx, double fallback) {
        if (parts.size() <= idx) return fallback;
        try {
            return parse_double(parts[idx]);
        } catch (const Error&) {
            throw ConfigError("observable '" + text + "' has a bad scale");
        }
    };
    if (kind == "const" && parts.size() == 2) {
        return probes::constant(scale_or(1, 1.0));
    }
    if (kind == "coord" && (parts.size() == 2 || parts.size() == 3)) {
        const int axis = static_cast<int>(scale_or(1, 0.0));
        if (axis < 0 || axis >= space.dim()) {
            throw ConfigError("observable '" + text + "' axis out of range");
        }
        return probes::coordinate(space, axis, scale_or(2, 1.0));
    }
    if (kind == "cos" && (parts.size() == 2 || parts.size() == 3)) {
        std::vector<double> raw = parse_numbers(parts[1], "observable '" + text + "'");
        if (static_cast<int>(raw.size()) != space.dim()) {
            throw ConfigError("observable '" + text + "' needs " +
                              std::to_string(space.dim()) + " frequencies");
        }
        std::vector<int> freq;
        for (double v : raw) freq.push_back(static_cast<int>(std::llround(v)));
        return probes::cos_wave(space, freq, scale_or(2, 1.0));
    }
    if (kind == "cone" && parts.size() == 3) {
        Point center = parse_point(space, parts[1], "observable '" + text + "'");
        const double radius = scale_or(2, 1.0);
        if (!(radius > 0.0)) {
            throw ConfigError("observable '" + text + "' needs a positive radius");
        }
        return probes::clamped_cone(space, center, radius);
    }
    throw ConfigError("cannot parse observable '" + text + "'");
}

std::vector<double> geometric_grid(double t_max) {
    if (!(t_max >= 1.0)) {
        throw ConfigError("t-max must be >= 1 for a geometric grid");
    }
    std::vector<double> grid;
    for (double t = 1.0; t < t_max; t *= 2.0) grid.push_back(t);
    grid.push_back(t_max);
    return grid;
}

std::vector<double> unit_grid(double t_max) {
    std::vector<double> grid;
    for (double t = 0.0; t <= t_max + 1e-12; t += 1.0) grid.push_back(t);
    return grid;
}

std::vector<double> resolve_grid(const Config& cfg, const std::string& fallback_kind) {
    const std::string list = get_string(cfg, "t-list");
    if (!list.empty()) {
        std::vector<double> grid = parse_numbers(list, "config key 't-list'");
        if (grid.empty()) throw ConfigError("config key 't-list' is empty");
        return grid;
    }
    const double t_max = get_double(cfg, "t-max");
    return fallback_kind == "unit" ? unit_grid(t_max) : geometric_grid(t_max);
}

// CSV of key,value rows; the summary artifact shared by classify and
// theorem-demo.
void write_summary(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ostringstream out;
    out << "key,value\n";
    for (const auto& [key, value] : rows) out << key << ',' << value << '\n';
    write_file(path.string(), out.str());
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

System system_from(const Config& cfg) {
    SystemOptions opts;
    if (auto it = cfg.find("base-omega"); it != cfg.end() && !it->second.empty()) {
        std::vector<double> omega = parse_numbers(it->second, "config key 'base-omega'");
        if (omega.size() != 2) {
            throw ConfigError("config key 'base-omega' needs two components");
        }
        opts.base_omega = {omega[0], omega[1]};
    }
    return make_system(get_string(cfg, "system"), opts);
}

}  // namespace

Config default_config(const std::string& subcommand) {
    Config cfg;
    cfg["out"] = "";
    if (subcommand == "simulate") {
        cfg["seed"] = "";
        cfg["system"] = "doubling";
        cfg["base-omega"] = "";
        cfg["x0"] = "";
        cfg["y0"] = "0.2";
        cfg["steps"] = "10";
        cfg["t-max"] = "10";
        cfg["t-step"] = "0.1";
        cfg["n-particles"] = "0";
        cfg["snapshot-times"] = "";
        cfg["init-box"] = "";
        return cfg;
    }
    if (subcommand == "classify") {
        cfg["seed"] = "";
        cfg["system"] = "doubling_contract";
        cfg["base-omega"] = "";
        cfg["experiment"] = "attracting";
        cfg["x0"] = "";
        cfg["t-max"] = "32";
        cfg["t-list"] = "";
        cfg["n-particles"] = "20000";
        cfg["n-ref"] = "20000";
        cfg["init-box"] = "";
        cfg["g1"] = "auto";
        cfg["g2"] = "auto2";
        cfg["theta"] = "0.05";
        cfg["burn-in"] = "0";
        cfg["n-samples"] = "4096";
        return cfg;
    }
    if (subcommand == "theorem-demo") {
        cfg["seed"] = "";
        cfg["system"] = "doubling_contract";
        cfg["base-omega"] = "";
        cfg["epsilon"] = "0.3";
        cfg["tau"] = "5";
        cfg["delta"] = "";
        cfg["T"] = "";
        cfg["n-nu"] = "10000";
        cfg["n-mu"] = "20000";
        cfg["n-candidates"] = "4000";
        cfg["init-box"] = "";
        cfg["g"] = "cone:0.25,1:1";
        cfg["t-max"] = "25";
        cfg["track-eps"] = "";
        cfg["track-T"] = "64";
        cfg["track-candidates"] = "64";
        cfg["cehyp"] = "true";
        cfg["cehyp-delta"] = "0.02";
        cfg["cehyp-taus"] = "1,2,3,4,5,6";
        cfg["cehyp-nx"] = "3";
        cfg["cehyp-nmc"] = "20000";
        cfg["cehyp-box"] = "";
        return cfg;
    }
    if (subcommand == "counterexample") {
        cfg["seed"] = "";
        cfg["y0"] = "0.2";
        cfg["base-omega"] = "";
        cfg["field-grid"] = "10000";
        cfg["t-max"] = "10";
        cfg["t-step"] = "0.05";
        cfg["rk4-step"] = "0.001";
        cfg["y-min"] = "1e-8";
        cfg["y-max"] = "0.1";
        cfg["y-count"] = "49";
        cfg["eps"] = "";
        cfg["eps-over-m"] = "1.0";
        cfg["T-list"] = "100,1000,10000";
        cfg["quadrature-n"] = "100000";
        cfg["fiber-t-max"] = "100";
        cfg["fiber-t-count"] = "201";
        return cfg;
    }
    if (subcommand == "cover") {
        cfg["seed"] = "";
        cfg["system"] = "doubling_contract";
        cfg["base-omega"] = "";
        cfg["tau"] = "5";
        cfg["delta"] = "0.05";
        cfg["multiplier"] = "3";
        cfg["n-candidates"] = "2000";
        cfg["candidates"] = "attractor";
        cfg["box"] = "";
        return cfg;
    }
    if (subcommand == "emit-plotdata") {
        cfg["in"] = "";
        cfg["name"] = "plot";
        cfg["title"] = "";
        return cfg;
    }
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

std::vector<Artifact> cmd_simulate(const Config& cfg) {
    const fs::path dir = out_dir(cfg);
    const std::uint64_t seed = get_seed(cfg);
    System sys = system_from(cfg);

    Point x0;
    const std::string x0_raw = get_string(cfg, "x0");
    if (!x0_raw.empty()) {
        x0 = parse_point(sys.space, x0_raw, "x0");
    } else if (sys.id == "counterexample") {
        const double y0 = get_double(cfg, "y0");
        x0 = sys.space.make_point({0.0, 0.0, y0});
    } else {
        x0 = default_start(sys);
    }

    // Time grid: integer steps for maps, a uniform t-step grid for flows.
    std::vector<double> times;
    if (sys.discrete()) {
        const long long steps = get_int(cfg, "steps");
        if (steps < 0) throw ConfigError("steps must be >= 0");
        for (long long k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k));
    } else {
        const double t_max = get_double(cfg, "t-max");
        const double t_step = get_double(cfg, "t-step");
        if (!(t_step > 0.0) || !(t_max >= 0.0)) {
            throw ConfigError("need t-step > 0 and t-max >= 0");
        }
        for (double t = 0.0; t <= t_max + 1e-9 * t_step; t += t_step) times.push_back(t);
    }

    std::ostringstream out;
    out << "t";
    for (int i = 0; i < sys.space.dim(); ++i) out << ",x" << i + 1;
    out << '\n';
    for (double t : times) {
        const Point p = evolve(sys, t, x0);
        out << format_double(t);
        for (int i = 0; i < sys.space.dim(); ++i) out << ',' << format_double(p[i]);
        out << '\n';
    }
    write_file((dir / "trajectory.csv").string(), out.str());
    std::vector<Artifact> artifacts = {{"trajectory.csv"}};

    const long long n_particles = get_int(cfg, "n-particles");
    const std::string snap_raw = get_string(cfg, "snapshot-times");
    if (n_particles > 0 && !snap_raw.empty()) {
        const std::string box_raw = get_string(cfg, "init-box");
        DensitySpec init = box_raw.empty() ? default_box(sys)
                                           : parse_box(sys.space, box_raw, "init-box");
        ParticleMeasure nu =
            sample_density(init, static_cast<std::size_t>(n_particles), sub_seed(seed, 1));
        std::vector<double> snaps = parse_numbers(snap_raw, "config key 'snapshot-times'");
        std::sort(snaps.begin(), snaps.end());
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            ParticleMeasure at = evolve_measure(sys, snaps[k], nu);
            const std::string name = "ensemble_" + std::to_string(k) + ".csv";
            write_measure_csv(at, (dir / name).string());
            artifacts.push_back({name});
        }
    }
    return artifacts;
}

std::vector<Artifact> cmd_classify(const Config& cfg) {
    const fs::path dir = out_dir(cfg);
    const std::uint64_t seed = get_seed(cfg);
    System sys = system_from(cfg);
    const std::string experiment = get_string(cfg, "experiment");
    const double theta = get_double(cfg, "theta");
    const std::size_t n_particles = static_cast<std::size_t>(get_int(cfg, "n-particles"));
    const std::size_t n_ref = static_cast<std::size_t>(get_int(cfg, "n-ref"));

    auto reference = [&]() {
        if (!sys.attractor || !sys.attractor->candidate_measure) {
            throw ConfigError("system '" + sys.id + "' declares no candidate measure");
        }
        return sys.attractor->candidate_measure(n_ref, sub_seed(seed, 2));
    };
    auto init_density = [&]() {
        const std::string raw = get_string(cfg, "init-box");
        return raw.empty() ? default_box(sys) : parse_box(sys.space, raw, "init-box");
    };

    SeriesRecord series;
    if (experiment == "basin") {
        const std::string raw = get_string(cfg, "x0");
        const Point x0 = raw.empty() ? default_start(sys) : parse_point(sys.space, raw, "x0");
        BirkhoffOptions opts;
        opts.burn_in = get_double(cfg, "burn-in");
        opts.n_samples = static_cast<std::size_t>(get_int(cfg, "n-samples"));
        series = basin_test(sys, x0, reference(), resolve_grid(cfg, "geometric"), opts);
    } else if (experiment == "attracting") {
        series = attracting_test(sys, init_density(), reference(),
                                 resolve_grid(cfg, "geometric"), n_particles,
                                 sub_seed(seed, 1));
    } else if (experiment == "classical-correlation") {
        TestFunction g1 = parse_observable(sys.space, get_string(cfg, "g1"));
        TestFunction g2 = parse_observable(sys.space, get_string(cfg, "g2"));
        if (!sys.attractor || !sys.attractor->candidate_measure) {
            throw ConfigError("system '" + sys.id + "' declares no candidate measure");
        }
        ParticleMeasure mu = sys.attractor->candidate_measure(n_particles, sub_seed(seed, 3));
        series = classical_correlation(sys, mu, g1, g2, resolve_grid(cfg, "unit"));
    } else if (experiment == "operational-correlation") {
        TestFunction g1 = parse_observable(sys.space, get_string(cfg, "g1"));
        TestFunction g2 = parse_observable(sys.space, get_string(cfg, "g2"));
        series = operational_correlation(sys, init_density(), reference(), g1, g2,
                                         resolve_grid(cfg, "unit"), n_particles,
                                         sub_seed(seed, 1));
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }

    std::string stem = experiment;
    std::replace(stem.begin(), stem.end(), '-', '_');
    write_series_csv(series, (dir / (stem + ".csv")).string());

    const bool converged = converged_verdict(series, theta);
    write_summary(dir / "summary.csv",
                  {{"experiment", experiment},
                   {"system", sys.id},
                   {"converged", bool_str(converged)},
                   {"settled_level", format_double(settled_level(series))},
                   {"theta", format_double(theta)}});
    return {{stem + ".csv"}, {"summary.csv"}};
}

std::vector<Artifact> cmd_theorem_demo(const Config& cfg) {
    const fs::path dir = out_dir(cfg);
    const std::uint64_t seed = get_seed(cfg);
    System sys = system_from(cfg);
    if (!sys.attractor || !sys.attractor->sample || !sys.attractor->candidate_measure) {
        throw ConfigError("theorem-demo needs a system with a declared attractor");
    }

    const double epsilon = get_double(cfg, "epsilon");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    const double tau = get_double(cfg, "tau");
    if (sys.discrete() && tau != std::floor(tau)) {
        throw ConfigError("tau must be an integer for a map system");
    }
    double delta = 0.99 * epsilon / 6.0;
    if (const std::string raw = get_string(cfg, "delta"); !raw.empty()) {
        delta = get_double(cfg, "delta");
    }
    if (!(delta > 0.0) || delta >= epsilon / 6.0) {
        throw ConfigError("delta must satisfy 0 < delta < epsilon / 6");
    }

    const std::size_t n_nu = static_cast<std::size_t>(get_int(cfg, "n-nu"));
    const std::size_t n_mu = static_cast<std::size_t>(get_int(cfg, "n-mu"));
    const std::size_t n_candidates = static_cast<std::size_t>(get_int(cfg, "n-candidates"));
    const std::string box_raw = get_string(cfg, "init-box");
    DensitySpec init =
        box_raw.empty() ? default_box(sys) : parse_box(sys.space, box_raw, "init-box");
    ParticleMeasure nu = sample_density(init, n_nu, sub_seed(seed, 1));

    // Settle time: orbit-track a few initial particles against the
    // attractor and take the worst settle, unless T is pinned in config.
    double T = 0.0;
    double track_eps = delta / 2.0;
    if (const std::string raw = get_string(cfg, "track-eps"); !raw.empty()) {
        track_eps = get_double(cfg, "track-eps");
    }
    if (const std::string raw = get_string(cfg, "T"); !raw.empty()) {
        T = get_double(cfg, "T");
    } else {
        const double track_T = get_double(cfg, "track-T");
        const std::size_t track_n =
            static_cast<std::size_t>(get_int(cfg, "track-candidates"));
        const std::size_t probes_n = std::min<std::size_t>(5, nu.size());
        for (std::size_t i = 0; i < probes_n; ++i) {
            OrbitTrackResult track =
                orbit_track_search(sys, nu.points()[i], sys.attractor->sample, track_eps,
                                   track_T, track_n, sub_seed(seed, 10 + i));
            if (!track.tracked) {
                throw BadSupport("orbit tracking did not settle within the horizon; "
                                 "increase track-T or epsilon");
            }
            T = std::max(T, track.settle_time);
        }
        if (sys.discrete()) T = std::ceil(T);
    }
    ParticleMeasure nu_T = evolve_measure(sys, T, nu);

    // Cover candidates: a jittered lattice on the attractor chart when one
    // is declared (uniform coverage gap ~ 2/n), otherwise iid samples.
    std::vector<Point> candidates;
    candidates.reserve(n_candidates);
    const AttractorInfo& info = *sys.attractor;
    if (info.at_param && info.param_dim == 1) {
        Rng rng = Rng::derive(sub_seed(seed, 2), 0x33);
        const auto& range = info.param_range.at(0);
        for (std::size_t i = 0; i < n_candidates; ++i) {
            const double u =
                (static_cast<double>(i) + rng.uniform01()) / static_cast<double>(n_candidates);
            const double param = range[0] + u * (range[1] - range[0]);
            candidates.push_back(info.at_param(std::span<const double>(&param, 1)));
        }
    } else {
        Rng rng = Rng::derive(sub_seed(seed, 2), 0x34);
        for (std::size_t i = 0; i < n_candidates; ++i) candidates.push_back(info.sample(rng));
    }

    BowenContext ctx = make_bowen_context(sys, tau, delta);
    CoverSpec cover = greedy_bisep(ctx, candidates, delta);
    write_cover_csv(cover, (dir / "cover_centers.csv").string(),
                    (dir / "cover_meta.json").string());

    ParticleMeasure mu = info.candidate_measure(n_mu, sub_seed(seed, 3));
    CoarseGrainResult detail = coarse_grain_detail(nu_T, mu, cover);

    const TestFunction g = parse_observable(sys.space, get_string(cfg, "g"));
    const double t_max = get_double(cfg, "t-max");

    // Three series on the unit grid: the evolved ensemble, its
    // coarse-grained surrogate, and the candidate invariant measure.
    std::vector<double> times;
    std::vector<double> v_nu;
    std::vector<double> v_p;
    std::vector<double> v_mu;
    ParticleMeasure cur_nu = nu_T;
    ParticleMeasure cur_p = detail.measure;
    ParticleMeasure cur_mu = mu;
    for (double t = 0.0; t <= t_max + 1e-12; t += 1.0) {
        times.push_back(t);
        v_nu.push_back(integrate(cur_nu, g));
        v_p.push_back(integrate(cur_p, g));
        v_mu.push_back(integrate(cur_mu, g));
        if (t + 1.0 <= t_max + 1e-12) {
            cur_nu = evolve_measure(sys, 1.0, cur_nu);
            cur_p = evolve_measure(sys, 1.0, cur_p);
            cur_mu = evolve_measure(sys, 1.0, cur_mu);
        }
    }
    write_series_csv(SeriesRecord("ensemble", times, v_nu), (dir / "demo_nu.csv").string());
    write_series_csv(SeriesRecord("coarse_grained", times, v_p),
                     (dir / "demo_p.csv").string());
    write_series_csv(SeriesRecord("invariant", times, v_mu), (dir / "demo_mu.csv").string());

    // Coarse-graining error bound at the ends and middle of the window.
    std::vector<double> check_times = {0.0, sys.discrete() ? std::floor(tau / 2.0) : tau / 2.0,
                                       tau};
    std::ostringstream check;
    check << "t,lhs,epsilon,ok\n";
    bool all_ok = true;
    for (double t : check_times) {
        const ErrorCheck ec = approx_error_check(nu_T, mu, cover, g, t);
        all_ok = all_ok && ec.bound_ok;
        check << format_double(t) << ',' << format_double(ec.lhs) << ','
              << format_double(ec.epsilon) << ',' << bool_str(ec.bound_ok) << '\n';
    }
    write_file((dir / "demo_check.csv").string(), check.str());

    std::vector<Artifact> artifacts = {{"cover_centers.csv"}, {"cover_meta.json"},
                                       {"demo_nu.csv"},       {"demo_p.csv"},
                                       {"demo_mu.csv"},       {"demo_check.csv"}};

    // Hyperbolicity table: Bowen-ball measure ratios along the attractor.
    if (get_bool(cfg, "cehyp")) {
        const double ce_delta = get_double(cfg, "cehyp-delta");
        std::vector<double> taus = parse_numbers(get_string(cfg, "cehyp-taus"),
                                                 "config key 'cehyp-taus'");
        const int n_x = static_cast<int>(get_int(cfg, "cehyp-nx"));
        const std::size_t n_mc = static_cast<std::size_t>(get_int(cfg, "cehyp-nmc"));
        const std::string ce_box_raw = get_string(cfg, "cehyp-box");
        DensitySpec ce_box = ce_box_raw.empty()
                                 ? default_box(sys)
                                 : parse_box(sys.space, ce_box_raw, "cehyp-box");
        BatchSampler mu_sampler{
            [&info](std::uint64_t s, std::size_t n) {
                return info.candidate_measure(n, s).points();
            },
            1.0};
        BatchSampler m_sampler = stratified_volume_sampler(ce_box);
        std::vector<CehypRow> rows =
            cehyp_scan(sys, mu_sampler, m_sampler, info.sample, ce_delta, taus, n_x, n_mc,
                       sub_seed(seed, 4));
        write_cehyp_csv(rows, (dir / "cehyp.csv").string());
        artifacts.push_back({"cehyp.csv"});
    }

    const double final_gap = std::fabs(v_nu.back() - v_mu.back());
    write_summary(dir / "demo_summary.csv",
                  {{"system", sys.id},
                   {"epsilon", format_double(epsilon)},
                   {"delta", format_double(delta)},
                   {"tau", format_double(tau)},
                   {"T", format_double(T)},
                   {"n_centers", std::to_string(cover.size())},
                   {"max_density_ratio", format_double(detail.max_density_ratio)},
                   {"bound_ok", bool_str(all_ok)},
                   {"final_gap", format_double(final_gap)}});
    artifacts.push_back({"demo_summary.csv"});
    return artifacts;
}

std::vector<Artifact> cmd_counterexample(const Config& cfg) {
    const fs::path dir = out_dir(cfg);
    (void)get_seed(cfg);  // the command is deterministic; the seed is part of
                          // the run record like everywhere else
    const double y0 = get_double(cfg, "y0");
    if (y0 == 0.0) {
        throw ConfigError("y0 must be nonzero (the y = 0 fiber is the degenerate case)");
    }

    SystemOptions opts;
    if (auto it = cfg.find("base-omega"); it != cfg.end() && !it->second.empty()) {
        std::vector<double> omega = parse_numbers(it->second, "config key 'base-omega'");
        if (omega.size() != 2) {
            throw ConfigError("config key 'base-omega' needs two components");
        }
        opts.base_omega = {omega[0], omega[1]};
    }
    System sys = zoo::counterexample(opts.base_omega);

    CounterexampleParams params = make_counterexample_params(
        y0, zoo::torus_linear(opts.base_omega), spaces::torus2().make_point({0.0, 0.0}));
    const int field_grid = static_cast<int>(get_int(cfg, "field-grid"));
    if (field_grid != 10000) params.M = field_bound(params.base, field_grid);

    // Closed-form flow vs RK4 on the product space.
    {
        const double t_max = get_double(cfg, "t-max");
        const double t_step = get_double(cfg, "t-step");
        const double rk4_step = get_double(cfg, "rk4-step");
        if (!(t_step > 0.0) || !(t_max > 0.0) || !(rk4_step > 0.0)) {
            throw ConfigError("need t-max, t-step, rk4-step > 0");
        }
        const Point p0 = sys.space.make_point({0.0, 0.0, y0});
        std::vector<double> times;
        std::vector<double> gaps;
        for (double t = t_step; t <= t_max + 1e-9 * t_step; t += t_step) {
            const Point closed = evolve(sys, t, p0);
            const Point stepped = integrate_flow(sys, t, p0, rk4_step);
            times.push_back(t);
            gaps.push_back(sys.space.distance(closed, stepped));
        }
        write_series_csv(SeriesRecord("flow_discrepancy", times, gaps),
                         (dir / "flow_discrepancy.csv").string());
    }

    // Fiber-field derivative near the invariant fiber: flat at 0.
    {
        const double y_min = get_double(cfg, "y-min");
        const double y_max = get_double(cfg, "y-max");
        const long long y_count = get_int(cfg, "y-count");
        if (!(y_min > 0.0) || !(y_max > y_min) || y_count < 2) {
            throw ConfigError("need 0 < y-min < y-max and y-count >= 2");
        }
        std::vector<double> ys;
        std::vector<double> vals;
        for (long long k = 0; k < y_count; ++k) {
            const double u = static_cast<double>(k) / static_cast<double>(y_count - 1);
            const double y = std::exp(std::log(y_min) + u * (std::log(y_max) - std::log(y_min)));
            ys.push_back(y);
            vals.push_back(b2_prime(y));
        }
        write_series_csv(SeriesRecord("b2_prime", ys, vals), (dir / "b2_prime.csv").string());
    }

    // Concentration profile against its closed-form tail bound.
    {
        double eps = 0.0;
        if (const std::string raw = get_string(cfg, "eps"); !raw.empty()) {
            eps = get_double(cfg, "eps");
        } else {
            eps = get_double(cfg, "eps-over-m") * params.M;
        }
        if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
        std::vector<double> T_grid = parse_numbers(get_string(cfg, "T-list"),
                                                   "config key 'T-list'");
        if (T_grid.empty()) throw ConfigError("config key 'T-list' is empty");
        std::sort(T_grid.begin(), T_grid.end());
        const std::size_t quad_n = static_cast<std::size_t>(get_int(cfg, "quadrature-n"));
        SeriesRecord profile = concentration_profile(params, eps, T_grid, quad_n);
        write_series_csv(profile, (dir / "concentration_profile.csv").string());
        std::vector<double> bounds;
        for (double T : T_grid) bounds.push_back(concentration_bound(params, eps, T));
        write_series_csv(SeriesRecord("concentration_bound", T_grid, bounds),
                         (dir / "concentration_bound.csv").string());
    }

    // |phi_{y0}(t)|: the fiber coordinate creeping toward 0.
    {
        const double t_max = get_double(cfg, "fiber-t-max");
        const long long count = get_int(cfg, "fiber-t-count");
        if (!(t_max > 0.0) || count < 2) {
            throw ConfigError("need fiber-t-max > 0 and fiber-t-count >= 2");
        }
        std::vector<double> times;
        std::vector<double> vals;
        for (long long k = 0; k < count; ++k) {
            const double t = t_max * static_cast<double>(k) / static_cast<double>(count - 1);
            times.push_back(t);
            vals.push_back(std::fabs(fiber_phi(y0, t)));
        }
        write_series_csv(SeriesRecord("fiber_abs", times, vals),
                         (dir / "fiber_marginal.csv").string());
    }

    return {{"flow_discrepancy.csv"},
            {"b2_prime.csv"},
            {"concentration_profile.csv"},
            {"concentration_bound.csv"},
            {"fiber_marginal.csv"}};
}

std::vector<Artifact> cmd_cover(const Config& cfg) {
    const fs::path dir = out_dir(cfg);
    const std::uint64_t seed = get_seed(cfg);
    System sys = system_from(cfg);
    const double tau = get_double(cfg, "tau");
    if (sys.discrete() && tau != std::floor(tau)) {
        throw ConfigError("tau must be an integer for a map system");
    }
    const double delta = get_double(cfg, "delta");
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    const double multiplier = get_double(cfg, "multiplier");
    if (!(multiplier >= 1.0)) throw ConfigError("multiplier must be >= 1");
    const std::size_t n_candidates = static_cast<std::size_t>(get_int(cfg, "n-candidates"));

    std::vector<Point> candidates;
    candidates.reserve(n_candidates);
    const std::string mode = get_string(cfg, "candidates");
    Rng rng = Rng::derive(seed, 0x33);
    if (mode == "attractor") {
        if (!sys.attractor || !sys.attractor->sample) {
            throw ConfigError("system '" + sys.id + "' declares no attractor sampler");
        }
        for (std::size_t i = 0; i < n_candidates; ++i) {
            candidates.push_back(sys.attractor->sample(rng));
        }
    } else if (mode == "box") {
        const std::string raw = get_string(cfg, "box");
        DensitySpec box = raw.empty() ? default_box(sys) : parse_box(sys.space, raw, "box");
        for (std::size_t i = 0; i < n_candidates; ++i) {
            candidates.push_back(sample_box_point(box, rng));
        }
    } else {
        throw ConfigError("candidates must be 'attractor' or 'box'");
    }

    BowenContext ctx = make_bowen_context(sys, tau, delta);
    CoverSpec cover = greedy_bisep(ctx, candidates, delta, multiplier);
    write_cover_csv(cover, (dir / "cover_centers.csv").string(),
                    (dir / "cover_meta.json").string());
    return {{"cover_centers.csv"}, {"cover_meta.json"}};
}

std::vector<Artifact> cmd_emit_plotdata(const Config& cfg) {
    const fs::path dir = out_dir(cfg);
    const std::string in_raw = get_string(cfg, "in");
    std::vector<std::string> inputs = split(in_raw, ';');
    if (inputs.empty()) {
        throw ConfigError("emit-plotdata needs at least one input series (key 'in')");
    }
    std::vector<SeriesRecord> series;
    for (const std::string& path : inputs) {
        if (!fs::exists(path)) {
            throw ConfigError("input series not found: " + path);
        }
        series.push_back(read_series_csv(path));
    }
    const std::string name = get_string(cfg, "name");
    if (name.empty()) throw ConfigError("config key 'name' must not be empty");
    std::string title = get_string(cfg, "title");
    if (title.empty()) title = name;
    write_union_dat((dir / (name + ".dat")).string(), series);
    write_svg_chart((dir / (name + ".svg")).string(), series, title);
    return {{name + ".dat"}, {name + ".svg"}};
}

}  // namespace ergokit::cli
