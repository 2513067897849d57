#include "ergokit/density.hpp"

#include <cmath>

#include "ergokit/errors.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

namespace {

// Normalized box widths and validity checks shared by the samplers.
struct BoxGeom {
    std::vector<double> lo;
    std::vector<double> width;
};

BoxGeom box_geometry(const MetricSpaceSpec& space, const BoxRegion& box) {
    const int d = space.dim();
    if (static_cast<int>(box.lo.size()) != d || static_cast<int>(box.hi.size()) != d)
        throw BadSupport("box region: bounds have wrong dimension for space '" +
                         space.id() + "'");
    BoxGeom g;
    g.lo.resize(static_cast<std::size_t>(d));
    g.width.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double w = box.hi[k] - box.lo[k];
        const bool periodic = space.axes()[k].kind == AxisKind::Periodic;
        if (!std::isfinite(w) || w <= 0.0 || (periodic && w > 1.0))
            throw BadSupport("box region: axis " + std::to_string(i) +
                             " has invalid width");
        g.lo[k] = periodic ? wrap_unit(box.lo[k]) : box.lo[k];
        g.width[k] = w;
    }
    return g;
}

BoxGeom bounding_box(const MetricSpaceSpec& space, const BallRegion& ball) {
    if (!(ball.radius > 0.0)) throw BadSupport("ball region: radius must be positive");
    const Point c = space.canonical(ball.center);
    BoxGeom g;
    const int d = space.dim();
    g.lo.resize(static_cast<std::size_t>(d));
    g.width.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (space.axes()[k].kind == AxisKind::Periodic) {
            const double w = std::min(1.0, 2.0 * ball.radius);
            g.lo[k] = wrap_unit(c[i] - w / 2.0);
            g.width[k] = w;
        } else {
            g.lo[k] = c[i] - ball.radius;
            g.width[k] = 2.0 * ball.radius;
        }
    }
    return g;
}

BoxGeom support_box(const DensitySpec& spec) {
    if (const auto* box = std::get_if<BoxRegion>(&spec.support))
        return box_geometry(spec.space, *box);
    return bounding_box(spec.space, std::get<BallRegion>(spec.support));
}

bool in_box(const MetricSpaceSpec& space, const BoxGeom& g, const Point& p) {
    for (int i = 0; i < space.dim(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (space.axes()[k].kind == AxisKind::Periodic) {
            const double off = wrap_unit(p[i] - g.lo[k]);
            if (off >= g.width[k] && g.width[k] < 1.0) return false;
        } else {
            if (p[i] < g.lo[k] || p[i] >= g.lo[k] + g.width[k]) return false;
        }
    }
    return true;
}

Point box_point(const MetricSpaceSpec& space, const BoxGeom& g,
                std::span<const double> unit) {
    std::vector<double> coords(static_cast<std::size_t>(space.dim()));
    for (int i = 0; i < space.dim(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        coords[k] = g.lo[k] + unit[k] * g.width[k];
    }
    return space.make_point(coords);
}

}  // namespace

bool DensitySpec::contains(const Point& p) const {
    if (p.space != space.tag()) return false;
    if (const auto* ball = std::get_if<BallRegion>(&support))
        return space.distance(space.canonical(ball->center), p) <= ball->radius;
    return in_box(space, box_geometry(space, std::get<BoxRegion>(support)), p);
}

double DensitySpec::box_volume() const {
    const BoxGeom g = support_box(*this);
    double v = 1.0;
    for (double w : g.width) v *= w;
    return v;
}

DensitySpec uniform_box(MetricSpaceSpec space, std::vector<double> lo,
                        std::vector<double> hi) {
    DensitySpec spec;
    spec.space = std::move(space);
    spec.support = BoxRegion{std::move(lo), std::move(hi)};
    support_box(spec);  // validate now
    return spec;
}

DensitySpec uniform_ball(MetricSpaceSpec space, const Point& center, double radius) {
    DensitySpec spec;
    spec.space = std::move(space);
    spec.support = BallRegion{spec.space.canonical(center), radius};
    support_box(spec);
    return spec;
}

Point sample_box_point(const DensitySpec& spec, Rng& rng) {
    const BoxGeom g = support_box(spec);
    std::vector<double> unit(g.lo.size());
    for (double& u : unit) u = rng.uniform01();
    return box_point(spec.space, g, unit);
}

ParticleMeasure sample_density(const DensitySpec& spec, std::size_t n,
                               std::uint64_t seed) {
    if (n == 0) throw BadSupport("sample_density: n must be positive");
    if (!(spec.density_bound > 0.0) || !std::isfinite(spec.density_bound))
        throw BadSupport("sample_density: density_bound must be positive and finite");
    const BoxGeom g = support_box(spec);
    const bool is_ball = std::holds_alternative<BallRegion>(spec.support);
    const BallRegion* ball = std::get_if<BallRegion>(&spec.support);
    const Point ball_center =
        is_ball ? spec.space.canonical(ball->center) : Point{};

    Rng rng = Rng::derive(seed, 0xd5);
    std::vector<Point> pts;
    pts.reserve(n);
    std::vector<double> unit(g.lo.size());
    const std::size_t max_tries = 10000 * n + 1000;
    std::size_t tries = 0;
    while (pts.size() < n) {
        if (++tries > max_tries)
            throw BadSupport("sample_density: rejection sampling stalled; "
                             "support or density_bound is inconsistent");
        for (double& u : unit) u = rng.uniform01();
        Point p = box_point(spec.space, g, unit);
        if (is_ball && spec.space.distance(ball_center, p) > ball->radius) continue;
        if (spec.density) {
            const double f = spec.density(p);
            if (f < 0.0)
                throw BadSupport("sample_density: density is negative at a sample");
            if (rng.uniform01() * spec.density_bound >= f) continue;
        }
        pts.push_back(p);
    }
    return ParticleMeasure(spec.space, std::move(pts),
                           std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ParticleMeasure sample_box_stratified(const DensitySpec& spec, std::size_t n,
                                      std::uint64_t seed) {
    if (n == 0) throw BadSupport("sample_box_stratified: n must be positive");
    if (spec.density || !std::holds_alternative<BoxRegion>(spec.support))
        throw BadSupport("sample_box_stratified: requires a uniform box density");
    const BoxGeom g = support_box(spec);
    const int d = spec.space.dim();

    // Near-cubical integer grid with product <= n; leftover samples are iid.
    std::vector<std::size_t> cells(static_cast<std::size_t>(d), 1);
    if (d == 1) {
        cells[0] = n;
    } else {
        const double per_axis = std::pow(static_cast<double>(n), 1.0 / d);
        std::size_t prod = 1;
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            cells[k] = std::max<std::size_t>(1, static_cast<std::size_t>(per_axis));
            prod *= cells[k];
        }
        // Grow axes greedily while the product still fits.
        bool grew = true;
        while (grew) {
            grew = false;
            for (int i = 0; i < d; ++i) {
                const auto k = static_cast<std::size_t>(i);
                if (prod / cells[k] * (cells[k] + 1) <= n) {
                    prod = prod / cells[k] * (cells[k] + 1);
                    ++cells[k];
                    grew = true;
                }
            }
        }
    }
    std::size_t lattice_n = 1;
    for (std::size_t c : cells) lattice_n *= c;

    Rng rng = Rng::derive(seed, 0xd7);
    std::vector<Point> pts;
    pts.reserve(n);
    std::vector<double> unit(static_cast<std::size_t>(d));
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < lattice_n; ++flat) {
        std::size_t rem = flat;
        for (int i = d - 1; i >= 0; --i) {
            const auto k = static_cast<std::size_t>(i);
            idx[k] = rem % cells[k];
            rem /= cells[k];
        }
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            unit[k] = (static_cast<double>(idx[k]) + rng.uniform01()) /
                      static_cast<double>(cells[k]);
        }
        pts.push_back(box_point(spec.space, g, unit));
    }
    while (pts.size() < n) {
        for (double& u : unit) u = rng.uniform01();
        pts.push_back(box_point(spec.space, g, unit));
    }
    return ParticleMeasure(spec.space, std::move(pts),
                           std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

}  // namespace ergokit
