#include "ergokit/counterexample.hpp"

#include <cmath>

#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

namespace {

void require_t_domain(double t, const char* who) {
    if (!(t > 1.0))
        throw DomainError(std::string(who) + ": argument " + format_double(t) +
                          " outside domain (1, inf)");
}

double sgn(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0); }

}  // namespace

double F_eval(double t) {
    require_t_domain(t, "F_eval");
    return 1.0 / (t * std::log(t));
}

double F_prime(double t) {
    require_t_domain(t, "F_prime");
    const double lt = std::log(t);
    return -(1.0 + lt) / (t * t * lt * lt);
}

double F_second(double t) {
    require_t_domain(t, "F_second");
    const double lt = std::log(t);
    return (2.0 * lt * lt + 3.0 * lt + 2.0) / (t * t * t * lt * lt * lt);
}

double F_inv(double y) {
    if (!(y > 0.0)) throw DomainError("F_inv: argument must be positive");
    // F is strictly decreasing on (1, inf) with range (0, inf). Bracket,
    // bisect to safety, then polish with Newton on g(t) = 1/F(t) - 1/y
    // (monotone increasing, better conditioned than F near t = 1).
    double lo = 1.0 + 1e-9;
    double hi = std::max(3.0, 2.0 / y * std::log(2.0 / y));
    while (F_eval(hi) > y) hi *= 2.0;          // ensure F(hi) <= y
    if (F_eval(lo) < y) return lo;             // y above representable range
    const double target = 1.0 / y;
    auto g = [target](double t) { return t * std::log(t) - target; };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-6 * std::max(1.0, lo)) break;
    }
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        const double gt = g(t);
        if (std::fabs(gt) <= 1e-13 * target) break;  // converged: keep t
        const double dg = std::log(t) + 1.0;          // d(t log t)/dt, positive here
        double next = t - gt / dg;
        // Newton may step onto or past a bracket endpoint (the endpoints
        // track previous iterates); fall back to plain bisection then.
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (g(next) < 0.0)
            lo = next;
        else
            hi = next;
        t = next;
    }
    return t;
}

double b2(double y) {
    if (y == 0.0) return 0.0;
    return sgn(y) * F_prime(F_inv(std::fabs(y)));
}

double b2_prime(double y) {
    if (y == 0.0) throw DomainError("b2_prime: undefined at y = 0 (limit value 0)");
    const double t = F_inv(std::fabs(y));
    return F_second(t) / F_prime(t);
}

double fiber_phi(double y, double t) {
    if (y == 0.0) throw DomainError("fiber_phi: y must be nonzero");
    return sgn(y) * F_eval(t + F_inv(std::fabs(y)));
}

double base_psi(double y, double t) {
    if (y == 0.0) throw DomainError("base_psi: y must be nonzero");
    const double c = F_inv(std::fabs(y));
    return sgn(y) * (std::log(std::log(t + c)) - std::log(std::log(c)));
}

MetricSpaceSpec skew_product_space(const System& base) {
    std::vector<Axis> axes = base.space.axes();
    axes.push_back(Axis{});  // unbounded fiber
    return MetricSpaceSpec(base.space.id() + "_x_line", std::move(axes));
}

CounterexampleParams make_counterexample_params(double y0) {
    System base = zoo::torus_linear({1.0, std::numbers::sqrt2});
    Point origin = base.space.make_point({0.0, 0.0});
    return make_counterexample_params(y0, std::move(base), origin);
}

CounterexampleParams make_counterexample_params(double y0, System base, Point base_x) {
    CounterexampleParams params;
    params.y0 = y0;
    params.c = (y0 == 0.0) ? 0.0 : F_inv(std::fabs(y0));
    params.base_x = base.space.canonical(base_x);
    params.M = field_bound(base);
    params.base = std::move(base);
    return params;
}

Point counterexample_flow(const CounterexampleParams& params, double t, const Point& x) {
    if (t < 0.0) throw NegativeTime("counterexample_flow: t = " + format_double(t));
    const MetricSpaceSpec product = skew_product_space(params.base);
    const int bd = params.base.space.dim();

    // x is either a base point (start at (x, params.y0)) or a product point
    // (the fiber coordinate, and hence c, comes from x so the semiflow law
    // holds under composition).
    double y0 = params.y0;
    double c = params.c;
    Point bx;
    bx.dim = static_cast<std::uint8_t>(bd);
    for (int i = 0; i < bd; ++i) bx[i] = x[i];
    if (static_cast<int>(x.dim) == bd + 1) {
        y0 = x[bd];
        c = (y0 == 0.0) ? 0.0 : F_inv(std::fabs(y0));
    }
    bx = params.base.space.canonical(bx);

    std::vector<double> coords(static_cast<std::size_t>(bd) + 1);
    if (y0 == 0.0 || t == 0.0) {
        for (int i = 0; i < bd; ++i) coords[static_cast<std::size_t>(i)] = bx[i];
        coords[static_cast<std::size_t>(bd)] = y0;
        return product.make_point(coords);
    }

    const double s = sgn(y0);
    const double phi = s * F_eval(t + c);
    const double psi = s * (std::log(std::log(t + c)) - std::log(std::log(c)));
    const Point moved = params.base.flow(psi, bx);
    for (int i = 0; i < bd; ++i) coords[static_cast<std::size_t>(i)] = moved[i];
    coords[static_cast<std::size_t>(bd)] = phi;
    return product.make_point(coords);
}

void counterexample_field(const CounterexampleParams& params, const Point& p,
                          std::span<double> out) {
    const int bd = params.base.space.dim();
    if (static_cast<int>(out.size()) != bd + 1)
        throw DomainError("counterexample_field: output span has wrong dimension");
    const double y = p[bd];
    if (y == 0.0) {
        for (double& v : out) v = 0.0;
        return;
    }
    if (!params.base.field)
        throw DomainError("counterexample_field: base system has no vector field");
    Point bx;
    bx.dim = static_cast<std::uint8_t>(bd);
    for (int i = 0; i < bd; ++i) bx[i] = p[i];
    bx = params.base.space.canonical(bx);
    params.base.field(bx, out.first(static_cast<std::size_t>(bd)));
    for (int i = 0; i < bd; ++i) out[static_cast<std::size_t>(i)] *= y;
    out[static_cast<std::size_t>(bd)] = b2(y);
}

double field_bound(const System& base, int grid_n) {
    if (!base.field) throw DomainError("field_bound: system has no vector field");
    const int d = base.space.dim();
    for (const Axis& ax : base.space.axes())
        if (ax.kind == AxisKind::Line && !(std::isfinite(ax.lo) && std::isfinite(ax.hi)))
            throw BadSupport("field_bound: base space must be bounded");
    const int per_axis = std::max(
        2, static_cast<int>(std::ceil(std::pow(static_cast<double>(grid_n), 1.0 / d))));

    std::vector<double> coords(static_cast<std::size_t>(d));
    std::vector<double> out(static_cast<std::size_t>(d));
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    double best_sq = 0.0;
    while (true) {
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const Axis& ax = base.space.axes()[k];
            const double u = (static_cast<double>(idx[k]) + 0.5) / per_axis;
            coords[k] = ax.kind == AxisKind::Periodic ? u : ax.lo + u * (ax.hi - ax.lo);
        }
        base.field(base.space.make_point(coords), out);
        double sq = 0.0;
        for (double v : out) sq += v * v;
        best_sq = std::max(best_sq, sq);

        int axis = d - 1;
        while (axis >= 0) {
            auto& i = idx[static_cast<std::size_t>(axis)];
            if (++i < per_axis) break;
            i = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return 1.05 * std::sqrt(best_sq);
}

double concentration_bound_closed_form(double c, double eps_over_M, double T) {
    if (!(T > 0.0)) throw DomainError("concentration_bound: T must be positive");
    if (!(eps_over_M > 0.0))
        throw DomainError("concentration_bound: eps/M must be positive");
    const double q = std::exp(-eps_over_M);
    return std::pow(1.0 + c / T, q) * std::pow(T, q - 1.0) - c / T;
}

double concentration_bound(const CounterexampleParams& params, double eps, double T) {
    if (params.y0 == 0.0)
        throw DomainError("concentration_bound: y0 must be nonzero");
    return concentration_bound_closed_form(params.c, eps / params.M, T);
}

namespace zoo {

System counterexample(std::array<double, 2> base_omega) {
    System s;
    s.id = "counterexample";
    s.space = spaces::torus2_x_line();
    s.kind = TimeKind::Continuous;
    const MetricSpaceSpec space = s.space;
    const System base = torus_linear(base_omega);

    s.flow = [space, base](double t, const Point& p) {
        const double y = p[2];
        if (y == 0.0 || t == 0.0)
            return space.make_point({p[0], p[1], y == 0.0 ? 0.0 : y});
        const double s_ = y > 0.0 ? 1.0 : -1.0;
        const double c = F_inv(std::fabs(y));
        const double phi = s_ * F_eval(t + c);
        const double psi = s_ * (std::log(std::log(t + c)) - std::log(std::log(c)));
        const Point bx = base.space.make_point({p[0], p[1]});
        const Point moved = base.flow(psi, bx);
        return space.make_point({moved[0], moved[1], phi});
    };
    s.field = [base](const Point& p, std::span<double> out) {
        const double y = p[2];
        if (y == 0.0) {
            out[0] = out[1] = out[2] = 0.0;
            return;
        }
        const Point bx = base.space.make_point({p[0], p[1]});
        base.field(bx, out.first(2));
        out[0] *= y;
        out[1] *= y;
        out[2] = b2(y);
    };
    // ||b|| <= |y| ||omega|| + |b2(y)|; for |y| <= 1 this stays below 2.5
    // with the default omega, and orbits only shrink |y|.
    s.speed_bound = 2.5;

    AttractorInfo a;
    a.sample = [space](Rng& rng) {
        return space.make_point({rng.uniform01(), rng.uniform01(), 0.0});
    };
    a.project = [space](const Point& p) {
        return space.make_point({p[0], p[1], 0.0});
    };
    a.candidate_measure = [space](std::size_t n, std::uint64_t seed) {
        Rng rng = Rng::derive(seed, 0xA7);
        std::vector<Point> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back(space.make_point({rng.uniform01(), rng.uniform01(), 0.0}));
        return ParticleMeasure(space, std::move(pts),
                               std::vector<double>(n, 1.0 / static_cast<double>(n)));
    };
    a.param_dim = 2;
    a.param_range = {{0.0, 1.0}, {0.0, 1.0}};
    a.at_param = [space](std::span<const double> u) {
        return space.make_point({u[0], u[1], 0.0});
    };
    s.attractor = std::move(a);
    return s;
}

}  // namespace zoo

}  // namespace ergokit
