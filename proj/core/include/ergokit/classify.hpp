#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>

#include "ergokit/counterexample.hpp"
#include "ergokit/density.hpp"
#include "ergokit/measure.hpp"
#include "ergokit/series.hpp"
#include "ergokit/system.hpp"

namespace ergokit {

// Sampling resolution for time-averaged (Birkhoff) measures of continuous
// systems; discrete systems use every integer time and ignore n_samples.
struct BirkhoffOptions {
    double burn_in = 0.0;
    std::size_t n_samples = 4096;
};

// Equal-weight particles along the orbit of x: at every integer time in
// [burn_in, T] for maps, at n_samples midpoint-grid times for flows. The
// particle ensemble for (1/T) int_0^T delta_{f^t x} dt.
ParticleMeasure birkhoff_measure(const System& sys, const Point& x, double T,
                                 double burn_in, std::size_t n_samples);

// Series T -> bl_distance(birkhoff_measure(x, T), mu_ref). A decreasing
// trend indicates x lies in the basin of mu_ref.
SeriesRecord basin_test(const System& sys, const Point& x, const ParticleMeasure& mu_ref,
                        std::span<const double> T_grid,
                        const BirkhoffOptions& opts = BirkhoffOptions{},
                        const ProbeConfig& probe = ProbeConfig{});

// Series t -> bl_distance(f^t nu, mu_ref) with nu = sample_density(init,
// n_particles, seed). Convergence for every admissible init is the
// operational form of "attracting".
SeriesRecord attracting_test(const System& sys, const DensitySpec& init,
                             const ParticleMeasure& mu_ref, std::span<const double> t_grid,
                             std::size_t n_particles, std::uint64_t seed,
                             const ProbeConfig& probe = ProbeConfig{});

// Series t -> int g1 (g2 o f^t) d mu - int g1 d mu int g2 d mu on the
// particle ensemble mu (assumed invariant and normalized).
SeriesRecord classical_correlation(const System& sys, const ParticleMeasure& mu,
                                   const TestFunction& g1, const TestFunction& g2,
                                   std::span<const double> t_grid);

// Series t -> (1/n) sum g1(x_i) g2(f^t x_i) - int g1 dm|_U int g2 d mu_ref
// with x_i sampled from U_density (m|_U normalized).
SeriesRecord operational_correlation(const System& sys, const DensitySpec& U_density,
                                     const ParticleMeasure& mu_ref, const TestFunction& g1,
                                     const TestFunction& g2, std::span<const double> t_grid,
                                     std::size_t n, std::uint64_t seed);

inline constexpr double kNoSettle = std::numeric_limits<double>::infinity();

struct OrbitTrackResult {
    Point partner;                   // best candidate found in A
    double settle_time = kNoSettle;  // smallest grid time with sup < eps after
    double sup_distance = 0.0;       // sup over [settle, T_max] grid times
                                     // (over the whole grid when not tracked)
    std::size_t candidates_tried = 0;
    bool tracked = false;
};

// Searches for y in A whose orbit eps-shadows the orbit of x: candidates
// from A_sampler plus the system's analytic projection, refined by
// coordinate descent on the attractor chart when one is declared. Failure
// is encoded as settle_time = infinity, never thrown.
OrbitTrackResult orbit_track_search(const System& sys, const Point& x,
                                    const std::function<Point(Rng&)>& A_sampler,
                                    double eps, double T_max, std::size_t n_candidates,
                                    std::uint64_t seed);

// Series T -> fraction of [0, T] (midpoint quadrature, quadrature_n nodes)
// the base orbit spends at base-distance >= eps from its time-T position:
// 1 - p_T(B_eps(f~^{psi(T)} x)). Tends to 0, i.e. p_T tends to a Dirac.
SeriesRecord concentration_profile(const CounterexampleParams& params, double eps,
                                   std::span<const double> T_grid,
                                   std::size_t quadrature_n);

// Median of |value| over the last `window` samples; infinity when empty.
double settled_level(const SeriesRecord& series, std::size_t window = 5);

// Verdict rule used by the CLI: settled_level(series, window) < theta.
// Magnitudes make the rule meaningful for signed correlation series too.
bool converged_verdict(const SeriesRecord& series, double theta = 0.05,
                       std::size_t window = 5);

}  // namespace ergokit
