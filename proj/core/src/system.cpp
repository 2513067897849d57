#include "ergokit/system.hpp"

#include <cmath>

#include "ergokit/counterexample.hpp"
#include "ergokit/density.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

namespace {

long long discrete_steps(const std::string& id, double t) {
    const long long n = std::llround(t);
    if (std::fabs(t - static_cast<double>(n)) > 1e-9)
        throw DomainError("system '" + id + "': discrete time " + std::to_string(t) +
                          " is not an integer");
    return n;
}

}  // namespace

Point evolve(const System& sys, double t, const Point& x) {
    if (t < 0.0) throw NegativeTime("evolve: t = " + std::to_string(t));
    if (x.space != sys.space.tag() || x.dim != sys.space.dim())
        throw SpaceMismatch("evolve: point not in space '" + sys.space.id() + "'");
    if (sys.discrete()) discrete_steps(sys.id, t);  // validate before dispatch
    if (t == 0.0) return x;
    return sys.flow(t, x);
}

ParticleMeasure evolve_measure(const System& sys, double t, const ParticleMeasure& mu) {
    if (!mu.space().same_as(sys.space))
        throw SpaceMismatch("evolve_measure: measure not on space '" + sys.space.id() + "'");
    if (t < 0.0) throw NegativeTime("evolve_measure: t = " + std::to_string(t));
    if (sys.discrete()) discrete_steps(sys.id, t);
    if (t == 0.0) return mu;
    return pushforward(mu, [&sys, t](const Point& p) { return sys.flow(t, p); });
}

Point integrate_flow(const System& sys, double t, const Point& x, double step) {
    if (!sys.field)
        throw DomainError("integrate_flow: system '" + sys.id + "' has no vector field");
    if (t < 0.0) throw NegativeTime("integrate_flow: t = " + std::to_string(t));
    if (!(step > 0.0)) throw DomainError("integrate_flow: step must be positive");
    if (t == 0.0) return sys.space.canonical(x);
    if (step > t) throw StepTooLarge("integrate_flow: step " + std::to_string(step) +
                                     " exceeds horizon " + std::to_string(t));

    const int d = sys.space.dim();
    const auto n_steps = static_cast<std::size_t>(std::ceil(t / step - 1e-12));
    const double h = t / static_cast<double>(n_steps);

    std::array<double, kMaxDim> y{};
    for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] = x[i];

    auto eval_field = [&](const std::array<double, kMaxDim>& raw,
                          std::array<double, kMaxDim>& out) {
        Point p;
        p.dim = static_cast<std::uint8_t>(d);
        for (int i = 0; i < d; ++i) p[i] = raw[static_cast<std::size_t>(i)];
        p = sys.space.canonical(p);
        std::span<double> span(out.data(), static_cast<std::size_t>(d));
        sys.field(p, span);
    };

    std::array<double, kMaxDim> k1{}, k2{}, k3{}, k4{}, stage{};
    for (std::size_t s = 0; s < n_steps; ++s) {
        eval_field(y, k1);
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            stage[k] = y[k] + 0.5 * h * k1[k];
        }
        eval_field(stage, k2);
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            stage[k] = y[k] + 0.5 * h * k2[k];
        }
        eval_field(stage, k3);
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            stage[k] = y[k] + h * k3[k];
        }
        eval_field(stage, k4);
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
    }
    Point p;
    p.dim = static_cast<std::uint8_t>(d);
    for (int i = 0; i < d; ++i) p[i] = y[static_cast<std::size_t>(i)];
    return sys.space.canonical(p);
}

namespace zoo {

namespace {

AttractorInfo full_space_attractor(const MetricSpaceSpec& space) {
    AttractorInfo a;
    const int d = space.dim();
    a.sample = [space, d](Rng& rng) {
        std::vector<double> c(static_cast<std::size_t>(d));
        for (double& v : c) v = rng.uniform01();
        return space.make_point(c);
    };
    a.project = [space](const Point& p) { return space.canonical(p); };
    a.candidate_measure = [space, d](std::size_t n, std::uint64_t seed) {
        std::vector<double> lo(static_cast<std::size_t>(d), 0.0);
        std::vector<double> hi(static_cast<std::size_t>(d), 1.0);
        return sample_density(uniform_box(space, std::move(lo), std::move(hi)), n, seed);
    };
    a.param_dim = d;
    a.param_range.assign(static_cast<std::size_t>(d), {0.0, 1.0});
    a.at_param = [space](std::span<const double> u) { return space.make_point(u); };
    return a;
}

}  // namespace

System doubling() {
    System s;
    s.id = "doubling";
    s.space = spaces::circle();
    s.kind = TimeKind::Discrete;
    const MetricSpaceSpec space = s.space;
    s.flow = [space](double t, const Point& x) {
        const auto n = std::llround(t);
        Point p = x;
        for (long long k = 0; k < n; ++k) p = space.make_point({2.0 * p[0]});
        return p;
    };
    s.attractor = full_space_attractor(space);
    return s;
}

System cat() {
    System s;
    s.id = "cat";
    s.space = spaces::torus2();
    s.kind = TimeKind::Discrete;
    const MetricSpaceSpec space = s.space;
    s.flow = [space](double t, const Point& x) {
        const auto n = std::llround(t);
        Point p = x;
        for (long long k = 0; k < n; ++k)
            p = space.make_point({2.0 * p[0] + p[1], p[0] + p[1]});
        return p;
    };
    s.attractor = full_space_attractor(space);
    return s;
}

System rotation() {
    System s;
    s.id = "rotation";
    s.space = spaces::circle();
    s.kind = TimeKind::Continuous;
    const MetricSpaceSpec space = s.space;
    s.flow = [space](double t, const Point& x) { return space.make_point({x[0] + t}); };
    s.field = [](const Point&, std::span<double> out) { out[0] = 1.0; };
    s.speed_bound = 1.0;
    s.attractor = full_space_attractor(space);
    return s;
}

System doubling_contract() {
    System s;
    s.id = "doubling_contract";
    s.space = spaces::annulus();
    s.kind = TimeKind::Discrete;
    const MetricSpaceSpec space = s.space;
    s.flow = [space](double t, const Point& x) {
        const auto n = std::llround(t);
        Point p = x;
        for (long long k = 0; k < n; ++k)
            p = space.make_point({2.0 * p[0], 1.0 + (p[1] - 1.0) / 2.0});
        return p;
    };
    AttractorInfo a;
    a.sample = [space](Rng& rng) { return space.make_point({rng.uniform01(), 1.0}); };
    a.project = [space](const Point& p) { return space.make_point({p[0], 1.0}); };
    a.candidate_measure = [space](std::size_t n, std::uint64_t seed) {
        Rng rng = Rng::derive(seed, 0xA7);
        std::vector<Point> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back(space.make_point({rng.uniform01(), 1.0}));
        return ParticleMeasure(space, std::move(pts),
                               std::vector<double>(n, 1.0 / static_cast<double>(n)));
    };
    a.param_dim = 1;
    a.param_range = {{0.0, 1.0}};
    a.at_param = [space](std::span<const double> u) {
        return space.make_point({u[0], 1.0});
    };
    s.attractor = std::move(a);
    return s;
}

System identity() {
    System s;
    s.id = "identity";
    s.space = spaces::circle();
    s.kind = TimeKind::Discrete;
    const MetricSpaceSpec space = s.space;
    s.flow = [space](double, const Point& x) { return space.canonical(x); };
    s.attractor = full_space_attractor(space);
    return s;
}

System torus_linear(std::array<double, 2> omega) {
    System s;
    s.id = "torus_linear";
    s.space = spaces::torus2();
    s.kind = TimeKind::Continuous;
    const MetricSpaceSpec space = s.space;
    s.flow = [space, omega](double t, const Point& x) {
        return space.make_point({x[0] + t * omega[0], x[1] + t * omega[1]});
    };
    s.field = [omega](const Point&, std::span<double> out) {
        out[0] = omega[0];
        out[1] = omega[1];
    };
    s.speed_bound = std::sqrt(omega[0] * omega[0] + omega[1] * omega[1]);
    s.attractor = full_space_attractor(space);
    return s;
}

System planar_rotation() {
    System s;
    s.id = "planar_rotation";
    s.space = spaces::plane();
    s.kind = TimeKind::Continuous;
    const MetricSpaceSpec space = s.space;
    s.flow = [space](double t, const Point& x) {
        const double c = std::cos(t);
        const double sn = std::sin(t);
        return space.make_point({c * x[0] - sn * x[1], sn * x[0] + c * x[1]});
    };
    s.field = [](const Point& p, std::span<double> out) {
        out[0] = -p[1];
        out[1] = p[0];
    };
    s.speed_bound = 2.0;  // orbits used in practice stay inside |z| <= 2
    AttractorInfo a;
    const double two_pi = 2.0 * std::numbers::pi;
    a.sample = [space, two_pi](Rng& rng) {
        const double th = two_pi * rng.uniform01();
        return space.make_point({std::cos(th), std::sin(th)});
    };
    a.project = [space](const Point& p) {
        const double r = std::hypot(p[0], p[1]);
        if (r < 1e-12) return space.make_point({1.0, 0.0});
        return space.make_point({p[0] / r, p[1] / r});
    };
    a.param_dim = 1;
    a.param_range = {{0.0, 1.0}};
    a.at_param = [space, two_pi](std::span<const double> u) {
        return space.make_point({std::cos(two_pi * u[0]), std::sin(two_pi * u[0])});
    };
    s.attractor = std::move(a);
    return s;
}

}  // namespace zoo

System make_system(const std::string& id, const SystemOptions& opts) {
    if (id == "doubling") return zoo::doubling();
    if (id == "cat") return zoo::cat();
    if (id == "rotation") return zoo::rotation();
    if (id == "doubling_contract") return zoo::doubling_contract();
    if (id == "counterexample") return zoo::counterexample(opts.base_omega);
    if (id == "identity") return zoo::identity();
    throw ConfigError("unknown system id '" + id +
                      "' (known: doubling, cat, rotation, doubling_contract, "
                      "counterexample, identity)");
}

}  // namespace ergokit
