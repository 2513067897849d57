#pragma once

#include <array>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "ergokit/measure.hpp"
#include "ergokit/space.hpp"

namespace ergokit {

class Rng;

enum class TimeKind { Discrete, Continuous };

// Optional description of a system's attractor: an iid sampler on the set,
// a projection of nearby points onto it, a candidate invariant measure, and
// (when the set is parametric) a chart used by local search.
struct AttractorInfo {
    std::function<Point(Rng&)> sample;
    std::function<Point(const Point&)> project;
    std::function<ParticleMeasure(std::size_t n, std::uint64_t seed)> candidate_measure;
    int param_dim = 0;
    std::vector<std::array<double, 2>> param_range;
    std::function<Point(std::span<const double>)> at_param;
};

// A semiflow f^t on a metric space. Discrete systems iterate a map at
// integer times; continuous systems provide a closed-form flow (the
// authority) and usually a vector field (for cross-checking integrators).
// Values are immutable after construction and safe to share across threads.
struct System {
    std::string id;
    MetricSpaceSpec space;
    TimeKind kind = TimeKind::Discrete;

    // Total flow: f^t x. Discrete systems expect integer t >= 0; continuous
    // closed forms also accept negative t where the flow extends (used
    // internally by quadratures), but the public evolve() enforces t >= 0.
    std::function<Point(double t, const Point& x)> flow;

    // Vector field b(x) written into out[0..dim); null for map systems.
    std::function<void(const Point& x, std::span<double> out)> field;

    std::optional<AttractorInfo> attractor;

    // Upper bound for orbit speed sup ||b||; sizes Bowen grids.
    double speed_bound = 1.0;

    bool discrete() const { return kind == TimeKind::Discrete; }
};

// f^t x with domain checks: t >= 0 (NegativeTime), integer t for discrete
// systems (DomainError), x in the system's space (SpaceMismatch).
Point evolve(const System& sys, double t, const Point& x);

// Pushforward of every particle by f^t; weights unchanged.
ParticleMeasure evolve_measure(const System& sys, double t, const ParticleMeasure& mu);

// Classical fixed-step RK4 integration of the vector field from x over
// [0, t]. Cross-check oracle for closed-form flows.
Point integrate_flow(const System& sys, double t, const Point& x, double step);

struct SystemOptions {
    // Base-flow direction for the skew-product system.
    std::array<double, 2> base_omega = {1.0, std::numbers::sqrt2};
};

// Looks up a zoo system by its fixed id: "doubling", "cat", "rotation",
// "doubling_contract", "counterexample", "identity". Throws ConfigError on
// unknown ids.
System make_system(const std::string& id, const SystemOptions& opts = SystemOptions{});

namespace zoo {

System doubling();            // circle, x -> 2x mod 1
System cat();                 // torus, (x,y) -> (2x+y, x+y) mod 1
System rotation();            // circle flow at speed 1
System doubling_contract();   // annulus, (theta, r) -> (2 theta, 1 + (r-1)/2)
System identity();            // circle, f = id
System counterexample(std::array<double, 2> base_omega = {1.0, std::numbers::sqrt2});

// Linear flow x' = omega on the 2-torus; default base of the skew product.
System torus_linear(std::array<double, 2> omega);

// Rigid rotation of the plane (x' = -y, y' = x) with the unit circle as
// invariant set; not part of the id registry.
System planar_rotation();

}  // namespace zoo

}  // namespace ergokit
