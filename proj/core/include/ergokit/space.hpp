#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ergokit {

inline constexpr int kMaxDim = 4;

// A point in a registered metric space. Coordinates on periodic axes are
// stored canonically in [0, 1). The space tag ties the point to the
// MetricSpaceSpec that produced it, so cross-space mixups fail loudly
// instead of silently computing nonsense distances.
struct Point {
    std::array<double, kMaxDim> x{};
    std::uint8_t dim = 0;
    std::uint32_t space = 0;

    double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const { return {x.data(), dim}; }
};

enum class AxisKind : std::uint8_t { Periodic, Line };

// One factor of a product space. Periodic axes are circles of circumference
// 1; line axes carry optional bounds (used for containment checks and for
// bounding sampling boxes).
struct Axis {
    AxisKind kind = AxisKind::Line;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

// Product metric space: the distance is the Euclidean combination of
// per-axis distances, with wraparound min(|a-b|, 1-|a-b|) on periodic axes.
class MetricSpaceSpec {
public:
    MetricSpaceSpec() = default;
    MetricSpaceSpec(std::string id, std::vector<Axis> axes);

    const std::string& id() const { return id_; }
    int dim() const { return static_cast<int>(axes_.size()); }
    std::uint32_t tag() const { return tag_; }
    const std::vector<Axis>& axes() const { return axes_; }

    // Builds a tagged point, wrapping periodic coordinates into [0, 1).
    Point make_point(std::span<const double> coords) const;
    Point make_point(std::initializer_list<double> coords) const;

    // Re-canonicalizes and re-tags a point assumed to carry coordinates for
    // this space.
    Point canonical(Point p) const;

    // True when every line coordinate lies within its declared bounds.
    // Periodic coordinates are always contained after canonicalization.
    bool contains(const Point& p) const;

    double distance(const Point& a, const Point& b) const;

    // Upper bound for the diameter; infinite when a line axis is unbounded.
    double diameter_bound() const;

    bool same_as(const MetricSpaceSpec& other) const { return tag_ == other.tag_; }

private:
    std::string id_;
    std::vector<Axis> axes_;
    std::uint32_t tag_ = 0;
};

// Wraps a coordinate into [0, 1).
double wrap_unit(double v);

// Distance between two canonical circle coordinates: min(|a-b|, 1-|a-b|).
double circle_distance(double a, double b);

// The fixed space zoo used by the dynamical systems in this library.
namespace spaces {

MetricSpaceSpec circle();                          // one periodic axis
MetricSpaceSpec torus2();                          // two periodic axes
MetricSpaceSpec annulus();                         // circle x (0, 2) radial band
MetricSpaceSpec interval(double lo, double hi);    // bounded segment
MetricSpaceSpec line();                            // unbounded line
MetricSpaceSpec plane();                           // unbounded plane
MetricSpaceSpec torus2_x_line();                   // torus2 x fiber line

}  // namespace spaces

}  // namespace ergokit
