#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ergokit/system.hpp"

namespace ergokit {

// Time horizon and sampling grid for the Bowen metric
// d_tau(x, y) = max over grid times t of d(f^t x, f^t y).
// Discrete systems use every integer 0..tau; continuous systems a uniform
// grid whose spacing 0.05 * min(1, delta / speed_bound) makes the grid max
// undershoot the continuum max by at most speed * spacing.
struct BowenContext {
    System system;
    double tau = 0.0;
    std::vector<double> grid;  // contains 0 and tau, strictly increasing
};

// delta is the ball radius the context will be used with; it only affects
// continuous-system grid spacing.
BowenContext make_bowen_context(System sys, double tau, double delta = 1.0);

// Orbit of x at the grid times (discrete: exact step-by-step iteration).
std::vector<Point> bowen_orbit(const BowenContext& ctx, const Point& x);

// d_tau(x, y); returns early with the running max once it reaches
// stop_above (callers needing only a threshold comparison).
double bowen_distance(const BowenContext& ctx, const Point& x, const Point& y,
                      double stop_above = std::numeric_limits<double>::infinity());

// Same, with x's orbit precomputed by bowen_orbit. Produces bit-identical
// values to bowen_distance.
double bowen_distance_to_orbit(const BowenContext& ctx, std::span<const Point> orbit_x,
                               const Point& y,
                               double stop_above = std::numeric_limits<double>::infinity());

}  // namespace ergokit
