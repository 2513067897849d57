#pragma once

#include <string>
#include <vector>

#include "ergokit/bowen.hpp"
#include "ergokit/measure.hpp"

namespace ergokit {

// A (d_tau, delta)-bi-separated center set with its cell rule. Centers are
// pairwise >= 2*delta apart in d_tau, so their delta-balls are disjoint;
// every candidate it was built from lies within multiplier*delta of some
// center. Cells are nearest-center in d_tau, ties to the lowest index,
// restricted to points within multiplier*delta of their center.
struct CoverSpec {
    BowenContext ctx;
    double delta = 0.0;
    double multiplier = 3.0;                 // cell radius factor (the "3" in 3*delta)
    std::vector<Point> centers;
    std::vector<std::vector<Point>> orbits;  // per center, at ctx.grid times
    std::vector<Point> candidates;           // the sampled region it was built from

    struct Assignment {
        int index = -1;     // -1 when no center is within multiplier*delta
        double dist = 0.0;  // d_tau to the winning center (when index >= 0)
    };

    // Nearest-center query; never throws on unreachable points (index -1).
    Assignment assign(const Point& p) const;

    std::size_t size() const { return centers.size(); }
};

// Greedy maximal bi-separated subset of the candidates, scanned in their
// given order (pass a seeded shuffle for randomized instances): a candidate
// is accepted iff its d_tau-distance to every accepted center is >= 2*delta.
CoverSpec greedy_bisep(const BowenContext& ctx, std::span<const Point> candidates,
                       double delta, double multiplier = 3.0);

struct CoarseGrainResult {
    ParticleMeasure measure;          // the coarse-grained surrogate for nu
    std::vector<double> cell_mass;    // nu(N_i)
    std::vector<double> ball_mass;    // mu(M_i), 0 for unused cells
    double max_density_ratio = 0.0;   // max over used cells of nu(N_i)/mu(M_i)
};

// Coarse-graining operator sum_i nu(N_i) mu(. | M_i) with M_i the open
// d_tau delta-ball at center i. Every nu-particle must be assignable
// (Unassigned otherwise); every used ball must carry mu-mass (EmptyBall).
// The result is supported on mu's particle set.
CoarseGrainResult coarse_grain_detail(const ParticleMeasure& nu, const ParticleMeasure& mu,
                                      const CoverSpec& cover);
ParticleMeasure coarse_grain(const ParticleMeasure& nu, const ParticleMeasure& mu,
                             const CoverSpec& cover);

struct ErrorCheck {
    double lhs = 0.0;      // |int (g o f^t) d nu - int (g o f^t) d P|
    double epsilon = 0.0;  // 6 * delta * Lip(g)
    bool bound_ok = false;
};

// Evaluates the coarse-graining error at observable g and time t in
// [0, tau] and compares against the guarantee 6 * delta * Lip(g).
ErrorCheck approx_error_check(const ParticleMeasure& nu, const ParticleMeasure& mu,
                              const CoverSpec& cover, const TestFunction& g, double t);

// Centers CSV ("i,x1..xd") plus a JSON sidecar holding tau, delta,
// multiplier and the grid.
void write_cover_csv(const CoverSpec& cover, const std::string& centers_path,
                     const std::string& sidecar_path);

}  // namespace ergokit
