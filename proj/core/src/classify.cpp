#include "ergokit/classify.hpp"

#include <algorithm>
#include <cmath>

#include "ergokit/errors.hpp"
#include "ergokit/numeric.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

ParticleMeasure birkhoff_measure(const System& sys, const Point& x, double T,
                                 double burn_in, std::size_t n_samples) {
    if (!(burn_in >= 0.0)) throw NegativeTime("birkhoff_measure: burn_in must be >= 0");
    if (!(T > burn_in)) throw DomainError("birkhoff_measure: requires T > burn_in");
    const Point x0 = sys.space.canonical(x);

    std::vector<Point> pts;
    if (sys.discrete()) {
        const auto t0 = static_cast<long long>(std::ceil(burn_in - 1e-9));
        const auto t1 = static_cast<long long>(std::floor(T + 1e-9));
        Point p = x0;
        for (long long t = 0; t <= t1; ++t) {
            if (t > 0) p = sys.flow(1.0, p);
            if (t >= t0) pts.push_back(p);
        }
    } else {
        pts.resize(n_samples);
        const double span = T - burn_in;
        parallel_fill(n_samples, [&](std::size_t k) {
            const double t =
                burn_in + (static_cast<double>(k) + 0.5) * span /
                              static_cast<double>(n_samples);
            pts[k] = sys.flow(t, x0);
        });
    }
    if (pts.empty()) throw DomainError("birkhoff_measure: no sample times in range");
    const double w = 1.0 / static_cast<double>(pts.size());
    return ParticleMeasure(sys.space, std::move(pts),
                           std::vector<double>(pts.size(), w));
}

SeriesRecord basin_test(const System& sys, const Point& x, const ParticleMeasure& mu_ref,
                        std::span<const double> T_grid, const BirkhoffOptions& opts,
                        const ProbeConfig& probe) {
    std::vector<double> values;
    values.reserve(T_grid.size());
    for (double T : T_grid) {
        const ParticleMeasure emp =
            birkhoff_measure(sys, x, T, opts.burn_in, opts.n_samples);
        values.push_back(bl_distance(emp, mu_ref, probe));
    }
    return SeriesRecord("basin", {T_grid.begin(), T_grid.end()}, std::move(values));
}

namespace {

// Walks a measure along an increasing time grid by pushing forward between
// consecutive grid times (exact step composition for maps).
class EnsembleWalker {
public:
    EnsembleWalker(const System& sys, ParticleMeasure start)
        : sys_(sys), current_(std::move(start)) {}

    const ParticleMeasure& at(double t) {
        const double dt = t - t_;
        if (dt < 0.0)
            throw DomainError("time grid must be increasing");
        if (dt > 0.0) {
            current_ = evolve_measure(sys_, dt, current_);
            t_ = t;
        }
        return current_;
    }

private:
    const System& sys_;
    ParticleMeasure current_;
    double t_ = 0.0;
};

}  // namespace

SeriesRecord attracting_test(const System& sys, const DensitySpec& init,
                             const ParticleMeasure& mu_ref, std::span<const double> t_grid,
                             std::size_t n_particles, std::uint64_t seed,
                             const ProbeConfig& probe) {
    EnsembleWalker walk(sys, sample_density(init, n_particles, seed));
    std::vector<double> values;
    values.reserve(t_grid.size());
    for (double t : t_grid) values.push_back(bl_distance(walk.at(t), mu_ref, probe));
    return SeriesRecord("attracting", {t_grid.begin(), t_grid.end()}, std::move(values));
}

SeriesRecord classical_correlation(const System& sys, const ParticleMeasure& mu,
                                   const TestFunction& g1, const TestFunction& g2,
                                   std::span<const double> t_grid) {
    if (std::fabs(mu.total_mass() - 1.0) > 1e-6)
        throw DomainError("classical_correlation: mu must be a probability measure");
    const std::size_t n = mu.size();
    std::vector<double> a(n);
    parallel_fill(n, [&](std::size_t i) { a[i] = g1(mu.points()[i]); });
    const double m1 = chunked_sum(n, [&](std::size_t i) { return mu.weights()[i] * a[i]; });
    const double m2 = integrate(mu, g2);

    EnsembleWalker walk(sys, mu);
    std::vector<double> values;
    values.reserve(t_grid.size());
    for (double t : t_grid) {
        const ParticleMeasure& moved = walk.at(t);
        const double cross = chunked_sum(n, [&](std::size_t i) {
            return mu.weights()[i] * a[i] * g2(moved.points()[i]);
        });
        values.push_back(cross - m1 * m2);
    }
    return SeriesRecord("classical_correlation", {t_grid.begin(), t_grid.end()},
                        std::move(values));
}

SeriesRecord operational_correlation(const System& sys, const DensitySpec& U_density,
                                     const ParticleMeasure& mu_ref, const TestFunction& g1,
                                     const TestFunction& g2, std::span<const double> t_grid,
                                     std::size_t n, std::uint64_t seed) {
    const ParticleMeasure start = sample_density(U_density, n, seed);
    std::vector<double> a(start.size());
    parallel_fill(start.size(), [&](std::size_t i) { a[i] = g1(start.points()[i]); });
    const double m1 =
        chunked_sum(start.size(), [&](std::size_t i) { return start.weights()[i] * a[i]; });
    const double m2 = integrate(normalize(mu_ref), g2);

    EnsembleWalker walk(sys, start);
    std::vector<double> values;
    values.reserve(t_grid.size());
    for (double t : t_grid) {
        const ParticleMeasure& moved = walk.at(t);
        const double cross = chunked_sum(start.size(), [&](std::size_t i) {
            return start.weights()[i] * a[i] * g2(moved.points()[i]);
        });
        values.push_back(cross - m1 * m2);
    }
    return SeriesRecord("operational_correlation", {t_grid.begin(), t_grid.end()},
                        std::move(values));
}

namespace {

struct TrackScore {
    double settle = kNoSettle;
    double sup = std::numeric_limits<double>::infinity();

    bool better_than(const TrackScore& other) const {
        if (settle != other.settle) return settle < other.settle;
        return sup < other.sup;
    }
};

std::vector<double> track_grid(const System& sys, double T_max) {
    std::vector<double> grid;
    if (sys.discrete()) {
        const auto n = static_cast<long long>(std::floor(T_max + 1e-9));
        for (long long k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k));
    } else {
        const std::size_t n = 1024;
        for (std::size_t k = 0; k <= n; ++k)
            grid.push_back(T_max * static_cast<double>(k) / static_cast<double>(n));
    }
    return grid;
}

std::vector<Point> grid_orbit(const System& sys, std::span<const double> grid,
                              const Point& x) {
    std::vector<Point> orbit;
    orbit.reserve(grid.size());
    if (sys.discrete()) {
        Point p = x;
        orbit.push_back(p);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            p = sys.flow(1.0, p);
            orbit.push_back(p);
        }
    } else {
        for (double t : grid) orbit.push_back(t == 0.0 ? x : sys.flow(t, x));
    }
    return orbit;
}

// Suffix-max scoring of one candidate orbit against the reference orbit.
TrackScore score_candidate(const System& sys, std::span<const double> grid,
                           std::span<const Point> orbit_x, const Point& y, double eps) {
    const std::vector<Point> orbit_y = grid_orbit(sys, grid, y);
    std::vector<double> dist(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        dist[k] = sys.space.distance(orbit_x[k], orbit_y[k]);
    // suffix maxima, scanning backwards
    TrackScore score;
    double suffix = 0.0;
    double full = 0.0;
    for (std::size_t k = grid.size(); k-- > 0;) {
        suffix = std::max(suffix, dist[k]);
        full = suffix;
        if (suffix < eps) {
            score.settle = grid[k];
            score.sup = suffix;
        }
    }
    if (score.settle == kNoSettle) score.sup = full;  // sup over the whole grid
    return score;
}

}  // namespace

OrbitTrackResult orbit_track_search(const System& sys, const Point& x,
                                    const std::function<Point(Rng&)>& A_sampler,
                                    double eps, double T_max, std::size_t n_candidates,
                                    std::uint64_t seed) {
    if (!(eps > 0.0)) throw DomainError("orbit_track_search: eps must be positive");
    if (!(T_max >= 0.0)) throw NegativeTime("orbit_track_search: T_max must be >= 0");

    const std::vector<double> grid = track_grid(sys, T_max);
    const std::vector<Point> orbit_x = grid_orbit(sys, grid, sys.space.canonical(x));

    OrbitTrackResult result;
    TrackScore best;
    auto consider = [&](const Point& y) {
        const TrackScore s = score_candidate(sys, grid, orbit_x, y, eps);
        ++result.candidates_tried;
        if (result.candidates_tried == 1 || s.better_than(best)) {
            best = s;
            result.partner = y;
        }
    };

    // The analytic projection first, then sampled candidates.
    if (sys.attractor && sys.attractor->project)
        consider(sys.attractor->project(sys.space.canonical(x)));
    Rng rng = Rng::derive(seed, 0x07);
    for (std::size_t k = 0; k < n_candidates; ++k) consider(A_sampler(rng));

    // Local refinement: coordinate descent on the attractor chart, started
    // from a small seeded sweep of the parameter box.
    if (sys.attractor && sys.attractor->at_param && sys.attractor->param_dim > 0) {
        const AttractorInfo& attr = *sys.attractor;
        const auto d = static_cast<std::size_t>(attr.param_dim);
        Rng prng = Rng::derive(seed, 0x17);
        std::vector<double> u(d), trial(d), best_u;
        TrackScore best_param;
        bool have = false;
        const std::size_t sweeps = std::min<std::size_t>(n_candidates, 64);
        for (std::size_t k = 0; k < sweeps; ++k) {
            for (std::size_t i = 0; i < d; ++i)
                u[i] = prng.uniform(attr.param_range[i][0], attr.param_range[i][1]);
            const TrackScore s = score_candidate(sys, grid, orbit_x, attr.at_param(u), eps);
            ++result.candidates_tried;
            if (!have || s.better_than(best_param)) {
                best_param = s;
                best_u = u;
                have = true;
            }
        }
        if (have) {
            for (double frac : {0.02, 0.005, 0.001}) {
                for (int pass = 0; pass < 2; ++pass) {
                    for (std::size_t i = 0; i < d; ++i) {
                        const double range =
                            attr.param_range[i][1] - attr.param_range[i][0];
                        for (double dir : {-1.0, 1.0}) {
                            trial = best_u;
                            trial[i] = std::clamp(best_u[i] + dir * frac * range,
                                                  attr.param_range[i][0],
                                                  attr.param_range[i][1]);
                            const TrackScore s =
                                score_candidate(sys, grid, orbit_x, attr.at_param(trial), eps);
                            ++result.candidates_tried;
                            if (s.better_than(best_param)) {
                                best_param = s;
                                best_u = trial;
                            }
                        }
                    }
                }
            }
            if (best_param.better_than(best)) {
                best = best_param;
                result.partner = attr.at_param(best_u);
            }
        }
    }

    result.settle_time = best.settle;
    result.sup_distance = best.sup;
    result.tracked = best.settle != kNoSettle;
    return result;
}

SeriesRecord concentration_profile(const CounterexampleParams& params, double eps,
                                   std::span<const double> T_grid,
                                   std::size_t quadrature_n) {
    if (params.y0 == 0.0)
        throw DomainError("concentration_profile: y0 must be nonzero");
    if (!(eps > 0.0)) throw DomainError("concentration_profile: eps must be positive");
    if (quadrature_n == 0)
        throw DomainError("concentration_profile: quadrature_n must be positive");

    const System& base = params.base;
    const Point x = params.base_x;
    // psi from the precomputed constant c, avoiding a root solve per node.
    const double sign = params.y0 > 0.0 ? 1.0 : -1.0;
    const double loglog_c = std::log(std::log(params.c));
    auto psi_at = [&](double t) {
        return sign * (std::log(std::log(t + params.c)) - loglog_c);
    };
    std::vector<double> values;
    values.reserve(T_grid.size());
    for (double T : T_grid) {
        if (!(T > 0.0)) throw DomainError("concentration_profile: T must be positive");
        const Point target = base.flow(psi_at(T), x);
        const double outside = chunked_sum(quadrature_n, [&](std::size_t k) {
            const double t = (static_cast<double>(k) + 0.5) * T /
                             static_cast<double>(quadrature_n);
            const Point pos = base.flow(psi_at(t), x);
            return base.space.distance(pos, target) >= eps ? 1.0 : 0.0;
        });
        values.push_back(outside / static_cast<double>(quadrature_n));
    }
    return SeriesRecord("concentration_profile", {T_grid.begin(), T_grid.end()},
                        std::move(values));
}

double settled_level(const SeriesRecord& series, std::size_t window) {
    if (series.value.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t n = std::min(window, series.value.size());
    std::vector<double> tail(series.value.end() - static_cast<std::ptrdiff_t>(n),
                             series.value.end());
    for (double& v : tail) v = std::fabs(v);
    std::sort(tail.begin(), tail.end());
    return tail[tail.size() / 2];
}

bool converged_verdict(const SeriesRecord& series, double theta, std::size_t window) {
    return settled_level(series, window) < theta;
}

}  // namespace ergokit
