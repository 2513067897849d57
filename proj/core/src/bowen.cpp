#include "ergokit/bowen.hpp"

#include <cmath>

#include "ergokit/errors.hpp"

namespace ergokit {

BowenContext make_bowen_context(System sys, double tau, double delta) {
    if (tau < 0.0) throw NegativeTime("make_bowen_context: tau must be >= 0");
    if (!(delta > 0.0)) throw DomainError("make_bowen_context: delta must be positive");
    BowenContext ctx;
    ctx.tau = tau;
    if (sys.kind == TimeKind::Discrete) {
        const auto n = std::llround(tau);
        if (std::fabs(tau - static_cast<double>(n)) > 1e-9)
            throw DomainError("make_bowen_context: discrete tau must be an integer");
        ctx.grid.reserve(static_cast<std::size_t>(n) + 1);
        for (long long k = 0; k <= n; ++k) ctx.grid.push_back(static_cast<double>(k));
    } else if (tau == 0.0) {
        ctx.grid = {0.0};
    } else {
        const double speed = std::max(sys.speed_bound, 1e-12);
        const double h = 0.05 * std::min(1.0, delta / speed);
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(tau / h - 1e-12)));
        ctx.grid.reserve(n + 1);
        for (std::size_t k = 0; k <= n; ++k)
            ctx.grid.push_back(tau * static_cast<double>(k) / static_cast<double>(n));
    }
    ctx.system = std::move(sys);
    return ctx;
}

std::vector<Point> bowen_orbit(const BowenContext& ctx, const Point& x) {
    const System& sys = ctx.system;
    if (x.space != sys.space.tag())
        throw SpaceMismatch("bowen_orbit: point not in space '" + sys.space.id() + "'");
    std::vector<Point> orbit;
    orbit.reserve(ctx.grid.size());
    if (sys.discrete()) {
        Point p = x;
        orbit.push_back(p);
        for (std::size_t k = 1; k < ctx.grid.size(); ++k) {
            p = sys.flow(1.0, p);
            orbit.push_back(p);
        }
    } else {
        for (double t : ctx.grid) orbit.push_back(t == 0.0 ? x : sys.flow(t, x));
    }
    return orbit;
}

namespace {

// Shared walker: advances y along the grid and compares against x's orbit
// supplied one point at a time through next_x.
template <class NextX>
double bowen_max(const BowenContext& ctx, NextX&& next_x, const Point& y,
                 double stop_above) {
    const System& sys = ctx.system;
    if (y.space != sys.space.tag())
        throw SpaceMismatch("bowen_distance: point not in space '" + sys.space.id() + "'");
    double best = 0.0;
    Point py = y;
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) {
        if (k > 0) {
            if (sys.discrete())
                py = sys.flow(1.0, py);
            else
                py = sys.flow(ctx.grid[k], y);
        }
        best = std::max(best, sys.space.distance(next_x(k), py));
        if (best >= stop_above) return best;
    }
    return best;
}

}  // namespace

double bowen_distance(const BowenContext& ctx, const Point& x, const Point& y,
                      double stop_above) {
    const System& sys = ctx.system;
    if (x.space != sys.space.tag())
        throw SpaceMismatch("bowen_distance: point not in space '" + sys.space.id() + "'");
    Point px = x;
    return bowen_max(
        ctx,
        [&](std::size_t k) -> const Point& {
            if (k > 0) {
                if (sys.discrete())
                    px = sys.flow(1.0, px);
                else
                    px = sys.flow(ctx.grid[k], x);
            }
            return px;
        },
        y, stop_above);
}

double bowen_distance_to_orbit(const BowenContext& ctx, std::span<const Point> orbit_x,
                               const Point& y, double stop_above) {
    if (orbit_x.size() != ctx.grid.size())
        throw DomainError("bowen_distance_to_orbit: orbit length does not match grid");
    return bowen_max(
        ctx, [&](std::size_t k) -> const Point& { return orbit_x[k]; }, y, stop_above);
}

}  // namespace ergokit
