#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "ergokit/measure.hpp"
#include "ergokit/space.hpp"

namespace ergokit {

class Rng;

// Axis-aligned box. On a periodic axis the box is the arc starting at lo
// with width hi - lo in (0, 1]; hi may exceed 1 to describe a wrapping arc.
struct BoxRegion {
    std::vector<double> lo;
    std::vector<double> hi;
};

// Metric ball.
struct BallRegion {
    Point center;
    double radius = 0.0;
};

using Region = std::variant<BoxRegion, BallRegion>;

// A sampleable density: uniform on the support when density is null,
// otherwise rejection sampling with the declared bound
// sup density <= density_bound over the support.
struct DensitySpec {
    MetricSpaceSpec space;
    Region support;
    std::function<double(const Point&)> density;  // null means uniform
    double density_bound = 1.0;

    bool contains(const Point& p) const;

    // Lebesgue volume of the support box (balls: of the bounding box).
    double box_volume() const;
};

DensitySpec uniform_box(MetricSpaceSpec space, std::vector<double> lo,
                        std::vector<double> hi);
DensitySpec uniform_ball(MetricSpaceSpec space, const Point& center, double radius);

// n iid samples, equal weights 1/n. Deterministic in (spec, n, seed).
ParticleMeasure sample_density(const DensitySpec& spec, std::size_t n,
                               std::uint64_t seed);

// Draws one point from the support box (no density rejection).
Point sample_box_point(const DensitySpec& spec, Rng& rng);

// n jittered-lattice samples of a *uniform box* density: the box is split
// into a near-cubical grid of cells, one sample placed uniformly inside
// each. Lattice counts in any subinterval deviate from their expectation by
// at most the number of boundary cells, which is what makes small-ball
// Monte-Carlo ratios reliable at moderate n.
ParticleMeasure sample_box_stratified(const DensitySpec& spec, std::size_t n,
                                      std::uint64_t seed);

}  // namespace ergokit
