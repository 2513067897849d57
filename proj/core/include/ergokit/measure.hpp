#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergokit/space.hpp"

namespace ergokit {

// Finitely supported Borel measure: weighted particles on a metric space.
// Weights are nonnegative and need not sum to 1; normalized() produces the
// probability version. The particle list is ordered, and all operations
// preserve that order, which is what makes runs bit-reproducible.
class ParticleMeasure {
public:
    ParticleMeasure(MetricSpaceSpec space, std::vector<Point> points,
                    std::vector<double> weights);

    static ParticleMeasure dirac(const MetricSpaceSpec& space, const Point& at,
                                 double mass = 1.0);

    const MetricSpaceSpec& space() const { return space_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }

    // Pairwise sum of the weights; deterministic for a fixed particle order.
    double total_mass() const;

private:
    MetricSpaceSpec space_;
    std::vector<Point> points_;
    std::vector<double> weights_;
};

// Scales weights to total mass 1. Throws ZeroMass when nothing to scale.
ParticleMeasure normalize(const ParticleMeasure& mu);

// Observable with declared bounds: |g| <= sup_bound and Lip(g) <= lipschitz.
// The bounds are trusted metadata used by error estimates, not enforced.
struct TestFunction {
    std::function<double(const Point&)> eval;
    double sup_bound = 1.0;
    double lipschitz = 1.0;
    std::string name = "g";

    double operator()(const Point& p) const { return eval(p); }
};

// Integral of g against mu (weights as given, not normalized).
double integrate(const ParticleMeasure& mu, const TestFunction& g);
double integrate(const ParticleMeasure& mu,
                 const std::function<double(const Point&)>& g);

// Image measure under a pointwise map: particles move, weights stay. The
// map's outputs are canonicalized into mu's space and must lie inside it.
ParticleMeasure pushforward(const ParticleMeasure& mu,
                            const std::function<Point(const Point&)>& map);

// Restriction-and-renormalization mu(. | region). Particle order is
// preserved; throws NullConditioning when the region carries no mass.
ParticleMeasure condition(const ParticleMeasure& mu,
                          const std::function<bool(const Point&)>& region);

// Convex combination sum_k coeff_k * mu_k (coefficients nonnegative).
// Particle lists are concatenated in argument order.
ParticleMeasure mix(std::span<const std::pair<double, const ParticleMeasure*>> parts);

// Controls the probe family used by bl_distance in dimensions >= 2 (and on
// unbounded 1-D spaces). Anchors default to particle locations drawn
// alternately from the two measures; fixed_anchors overrides sampling so
// several comparisons can share one probe family.
struct ProbeConfig {
    std::uint64_t seed = 2026;
    int anchors = 64;
    std::vector<double> radii = {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<Point> fixed_anchors;
};

// Bounded-Lipschitz distance sup { |int g dmu - int g dnu| : |g|<=1,
// Lip(g)<=1 }. Exact (sorted-merge Wasserstein-1, clipped at 2) on 1-D
// spaces of diameter <= 2, where the two metrics coincide; elsewhere a
// lower bound from a family of clamped-cone probes
//   g_{p,r}(x) = clamp(min(1,r) * (1 - d(x,p)/r), -1, 1),
// each of which has |g| <= 1 and Lip(g) <= 1.
double bl_distance(const ParticleMeasure& mu, const ParticleMeasure& nu,
                   const ProbeConfig& cfg = {});

// Exact Wasserstein-1 between two 1-D measures of equal mass (segment or
// circle). Circle transport minimizes over the free rotation constant.
double wasserstein1(const ParticleMeasure& mu, const ParticleMeasure& nu);

// Stock observables.
namespace probes {

TestFunction constant(double c);

// g(x) = scale * cos(2 pi k . x) on a fully periodic space.
TestFunction cos_wave(const MetricSpaceSpec& space, std::vector<int> freq,
                      double scale);

// g(x) = scale * x[axis]; sup bound derived from the axis bounds.
TestFunction coordinate(const MetricSpaceSpec& space, int axis, double scale);

// The clamped-cone probe used by bl_distance.
TestFunction clamped_cone(const MetricSpaceSpec& space, const Point& center,
                          double radius);

}  // namespace probes

}  // namespace ergokit
