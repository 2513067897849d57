#include "ergokit/cover.hpp"

#include <cmath>
#include <limits>

#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/numeric.hpp"

namespace ergokit {

CoverSpec::Assignment CoverSpec::assign(const Point& p) const {
    Assignment best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
        // Strict improvement keeps the lowest index on ties; stop_above at
        // the current best prunes hopeless centers early.
        const double d = bowen_distance_to_orbit(ctx, orbits[i], p, best_dist);
        if (d < best_dist) {
            best_dist = d;
            best.index = static_cast<int>(i);
            best.dist = d;
        }
    }
    if (best.index < 0 || best_dist > multiplier * delta) return Assignment{};
    return best;
}

CoverSpec greedy_bisep(const BowenContext& ctx, std::span<const Point> candidates,
                       double delta, double multiplier) {
    if (candidates.empty()) throw EmptyCandidates("greedy_bisep: no candidates");
    if (!(delta > 0.0)) throw DomainError("greedy_bisep: delta must be positive");
    if (!(multiplier >= 1.0)) throw DomainError("greedy_bisep: multiplier must be >= 1");

    CoverSpec cover;
    cover.ctx = ctx;
    cover.delta = delta;
    cover.multiplier = multiplier;
    cover.candidates.assign(candidates.begin(), candidates.end());

    const double threshold = 2.0 * delta;
    for (const Point& cand : candidates) {
        bool separated = true;
        for (const auto& orbit : cover.orbits) {
            if (bowen_distance_to_orbit(ctx, orbit, cand, threshold) < threshold) {
                separated = false;
                break;
            }
        }
        if (separated) {
            cover.centers.push_back(cand);
            cover.orbits.push_back(bowen_orbit(ctx, cand));
        }
    }
    return cover;
}

CoarseGrainResult coarse_grain_detail(const ParticleMeasure& nu, const ParticleMeasure& mu,
                                      const CoverSpec& cover) {
    if (!nu.space().same_as(mu.space()) ||
        !nu.space().same_as(cover.ctx.system.space))
        throw SpaceMismatch("coarse_grain: nu, mu and cover must share one space");

    const std::size_t n_cells = cover.size();

    // Assign nu-particles to cells (parallel, deterministic per particle).
    std::vector<int> nu_cell(nu.size());
    parallel_fill(nu.size(), [&](std::size_t i) {
        nu_cell[i] = cover.assign(nu.points()[i]).index;
    });
    std::vector<double> cell_mass(n_cells, 0.0);
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (nu_cell[i] < 0)
            throw Unassigned("coarse_grain: nu-particle " + std::to_string(i) +
                             " is outside every cell");
        cell_mass[static_cast<std::size_t>(nu_cell[i])] += nu.weights()[i];
    }

    // mu-membership in the open delta-balls at the used centers. Balls are
    // disjoint (centers are 2*delta-separated), so each mu-particle lands
    // in at most one.
    std::vector<int> mu_ball(mu.size());
    parallel_fill(mu.size(), [&](std::size_t i) {
        mu_ball[i] = -1;
        for (std::size_t c = 0; c < n_cells; ++c) {
            if (cell_mass[c] <= 0.0) continue;
            if (bowen_distance_to_orbit(cover.ctx, cover.orbits[c], mu.points()[i],
                                        cover.delta) < cover.delta) {
                mu_ball[i] = static_cast<int>(c);
                break;
            }
        }
    });

    std::vector<double> ball_mass(n_cells, 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu_ball[i] >= 0) ball_mass[static_cast<std::size_t>(mu_ball[i])] += mu.weights()[i];

    double max_ratio = 0.0;
    for (std::size_t c = 0; c < n_cells; ++c) {
        if (cell_mass[c] <= 0.0) continue;
        if (ball_mass[c] <= 0.0)
            throw EmptyBall("coarse_grain: cell " + std::to_string(c) +
                            " holds nu-mass but its delta-ball has no mu-mass");
        max_ratio = std::max(max_ratio, cell_mass[c] / ball_mass[c]);
    }

    // Output particles grouped by cell, mu order within each: weight
    // nu(N_c) * w_p / mu(M_c).
    std::vector<Point> out_pts;
    std::vector<double> out_w;
    for (std::size_t c = 0; c < n_cells; ++c) {
        if (cell_mass[c] <= 0.0) continue;
        const double scale = cell_mass[c] / ball_mass[c];
        for (std::size_t i = 0; i < mu.size(); ++i)
            if (mu_ball[i] == static_cast<int>(c)) {
                out_pts.push_back(mu.points()[i]);
                out_w.push_back(scale * mu.weights()[i]);
            }
    }

    CoarseGrainResult result{
        ParticleMeasure(nu.space(), std::move(out_pts), std::move(out_w)),
        std::move(cell_mass), std::move(ball_mass), max_ratio};
    return result;
}

ParticleMeasure coarse_grain(const ParticleMeasure& nu, const ParticleMeasure& mu,
                             const CoverSpec& cover) {
    return coarse_grain_detail(nu, mu, cover).measure;
}

ErrorCheck approx_error_check(const ParticleMeasure& nu, const ParticleMeasure& mu,
                              const CoverSpec& cover, const TestFunction& g, double t) {
    const ParticleMeasure p = coarse_grain(nu, mu, cover);
    const System& sys = cover.ctx.system;
    const double int_nu = integrate(evolve_measure(sys, t, nu), g);
    const double int_p = integrate(evolve_measure(sys, t, p), g);
    ErrorCheck check;
    check.lhs = std::fabs(int_nu - int_p);
    check.epsilon = 6.0 * cover.delta * g.lipschitz;
    check.bound_ok = check.lhs < check.epsilon;
    return check;
}

void write_cover_csv(const CoverSpec& cover, const std::string& centers_path,
                     const std::string& sidecar_path) {
    const int d = cover.ctx.system.space.dim();
    std::string out = "i";
    for (int i = 1; i <= d; ++i) out += ",x" + std::to_string(i);
    out += '\n';
    for (std::size_t c = 0; c < cover.centers.size(); ++c) {
        out += std::to_string(c);
        for (int i = 0; i < d; ++i) {
            out += ',';
            out += format_double(cover.centers[c][i]);
        }
        out += '\n';
    }
    write_file(centers_path, out);

    std::string side = "{\n";
    side += "  \"tau\": " + format_double(cover.ctx.tau) + ",\n";
    side += "  \"delta\": " + format_double(cover.delta) + ",\n";
    side += "  \"multiplier\": " + format_double(cover.multiplier) + ",\n";
    side += "  \"system\": \"" + cover.ctx.system.id + "\",\n";
    side += "  \"grid\": [";
    for (std::size_t k = 0; k < cover.ctx.grid.size(); ++k) {
        if (k > 0) side += ", ";
        side += format_double(cover.ctx.grid[k]);
    }
    side += "]\n}\n";
    write_file(sidecar_path, side);
}

}  // namespace ergokit
