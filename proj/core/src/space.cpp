#include "ergokit/space.hpp"

#include <cmath>
#include <cstring>

#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"

namespace ergokit {

double wrap_unit(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w = 0.0;  // guards v = -tiny, where floor rounding gives 1.0
    return w;
}

double circle_distance(double a, double b) {
    const double w = std::fabs(a - b);
    return std::min(w, 1.0 - w);
}

MetricSpaceSpec::MetricSpaceSpec(std::string id, std::vector<Axis> axes)
    : id_(std::move(id)), axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > kMaxDim)
        throw DomainError("space '" + id_ + "': dimension must be in [1, 4]");
    for (const auto& ax : axes_) {
        if (ax.kind == AxisKind::Line && !(ax.lo < ax.hi))
            throw DomainError("space '" + id_ + "': line axis bounds must satisfy lo < hi");
    }
    tag_ = fnv1a32(id_);
}

Point MetricSpaceSpec::make_point(std::span<const double> coords) const {
    if (static_cast<int>(coords.size()) != dim())
        throw SpaceMismatch("space '" + id_ + "': expected " + std::to_string(dim()) +
                            " coordinates, got " + std::to_string(coords.size()));
    Point p;
    p.dim = static_cast<std::uint8_t>(dim());
    p.space = tag_;
    for (int i = 0; i < dim(); ++i) {
        const double v = coords[static_cast<std::size_t>(i)];
        if (!std::isfinite(v))
            throw DomainError("space '" + id_ + "': non-finite coordinate");
        p[i] = axes_[static_cast<std::size_t>(i)].kind == AxisKind::Periodic ? wrap_unit(v) : v;
    }
    return p;
}

Point MetricSpaceSpec::make_point(std::initializer_list<double> coords) const {
    return make_point(std::span<const double>(coords.begin(), coords.size()));
}

Point MetricSpaceSpec::canonical(Point p) const {
    if (p.dim != dim())
        throw SpaceMismatch("space '" + id_ + "': point has wrong dimension");
    p.space = tag_;
    for (int i = 0; i < dim(); ++i)
        if (axes_[static_cast<std::size_t>(i)].kind == AxisKind::Periodic) p[i] = wrap_unit(p[i]);
    return p;
}

bool MetricSpaceSpec::contains(const Point& p) const {
    if (p.dim != dim() || p.space != tag_) return false;
    for (int i = 0; i < dim(); ++i) {
        const Axis& ax = axes_[static_cast<std::size_t>(i)];
        if (ax.kind == AxisKind::Line && (p[i] < ax.lo || p[i] > ax.hi)) return false;
    }
    return true;
}

double MetricSpaceSpec::distance(const Point& a, const Point& b) const {
    if (a.space != tag_ || b.space != tag_ || a.dim != dim() || b.dim != dim())
        throw SpaceMismatch("distance: points do not belong to space '" + id_ + "'");
    double sq = 0.0;
    for (int i = 0; i < dim(); ++i) {
        const double d = axes_[static_cast<std::size_t>(i)].kind == AxisKind::Periodic
                             ? circle_distance(a[i], b[i])
                             : a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

double MetricSpaceSpec::diameter_bound() const {
    double sq = 0.0;
    for (const auto& ax : axes_) {
        const double d = ax.kind == AxisKind::Periodic ? 0.5 : ax.hi - ax.lo;
        if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
        sq += d * d;
    }
    return std::sqrt(sq);
}

namespace spaces {

MetricSpaceSpec circle() { return {"circle", {Axis{AxisKind::Periodic, 0.0, 1.0}}}; }

MetricSpaceSpec torus2() {
    return {"torus2",
            {Axis{AxisKind::Periodic, 0.0, 1.0}, Axis{AxisKind::Periodic, 0.0, 1.0}}};
}

MetricSpaceSpec annulus() {
    return {"annulus", {Axis{AxisKind::Periodic, 0.0, 1.0}, Axis{AxisKind::Line, 0.0, 2.0}}};
}

MetricSpaceSpec interval(double lo, double hi) {
    return {"interval[" + format_double(lo) + "," + format_double(hi) + "]",
            {Axis{AxisKind::Line, lo, hi}}};
}

MetricSpaceSpec line() { return {"line", {Axis{}}}; }

MetricSpaceSpec plane() { return {"plane", {Axis{}, Axis{}}}; }

MetricSpaceSpec torus2_x_line() {
    return {"torus2_x_line",
            {Axis{AxisKind::Periodic, 0.0, 1.0}, Axis{AxisKind::Periodic, 0.0, 1.0}, Axis{}}};
}

}  // namespace spaces

}  // namespace ergokit
