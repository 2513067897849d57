#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "ergokit/density.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/measure.hpp"
#include "ergokit/rng.hpp"
#include "ergokit/series.hpp"
#include "ergokit/space.hpp"
#include "test_support.hpp"

using namespace ergokit;
using namespace testkit;

TEST_CASE("circle distance and canonicalization") {
    MetricSpaceSpec circle = spaces::circle();
    Point a = circle.make_point({0.95});
    Point b = circle.make_point({0.05});
    CHECK(circle.distance(a, b) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(circle.make_point({1.25})[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(circle.make_point({-0.25})[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(circle.diameter_bound() == doctest::Approx(0.5));
}

TEST_CASE("product distances combine per axis") {
    MetricSpaceSpec torus = spaces::torus2();
    Point a = torus.make_point({0.9, 0.1});
    Point b = torus.make_point({0.1, 0.2});
    CHECK(torus.distance(a, b) ==
          doctest::Approx(std::sqrt(0.2 * 0.2 + 0.1 * 0.1)).epsilon(1e-12));

    MetricSpaceSpec annulus = spaces::annulus();
    Point p = annulus.make_point({0.25, 1.5});
    Point q = annulus.make_point({0.75, 0.5});
    CHECK(annulus.distance(p, q) == doctest::Approx(std::sqrt(0.25 + 1.0)).epsilon(1e-12));
    CHECK(annulus.contains(annulus.make_point({0.0, 1.99})));
    CHECK_FALSE(annulus.contains(annulus.make_point({0.0, 2.5})));
    CHECK(spaces::torus2_x_line().diameter_bound() ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("space tags distinguish spaces") {
    CHECK(spaces::circle().same_as(spaces::circle()));
    CHECK_FALSE(spaces::circle().same_as(spaces::torus2()));
    CHECK_THROWS_AS(spaces::circle().make_point({0.1, 0.2}), SpaceMismatch);
    CHECK_THROWS_AS(spaces::circle().make_point({std::nan("")}), DomainError);
}

TEST_CASE("particle measure construction validates") {
    MetricSpaceSpec circle = spaces::circle();
    std::vector<Point> pts = {circle.make_point({0.1}), circle.make_point({0.4})};
    CHECK_THROWS_AS(ParticleMeasure(circle, {}, {}), Error);
    CHECK_THROWS_AS(ParticleMeasure(circle, pts, {0.5}), Error);
    CHECK_THROWS_AS(ParticleMeasure(circle, pts, {0.5, -0.1}), Error);
    Point other = spaces::torus2().make_point({0.1, 0.1});
    CHECK_THROWS_AS(ParticleMeasure(circle, {other, other}, {0.5, 0.5}), SpaceMismatch);
    ParticleMeasure mu(circle, pts, {0.25, 0.5});
    CHECK(mu.total_mass() == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("normalize and zero mass") {
    MetricSpaceSpec circle = spaces::circle();
    ParticleMeasure mu(circle, {circle.make_point({0.3})}, {4.0});
    CHECK(normalize(mu).weights()[0] == doctest::Approx(1.0).epsilon(1e-15));
    ParticleMeasure zero(circle, {circle.make_point({0.3})}, {0.0});
    CHECK_THROWS_AS(normalize(zero), ZeroMass);
}

TEST_CASE("integrate, pushforward, condition, mix") {
    MetricSpaceSpec circle = spaces::circle();
    ParticleMeasure mu = equal_weight(
        circle, {circle.make_point({0.1}), circle.make_point({0.2}), circle.make_point({0.7})});

    TestFunction coord = probes::coordinate(circle, 0, 1.0);
    CHECK(integrate(mu, coord) == doctest::Approx((0.1 + 0.2 + 0.7) / 3.0).epsilon(1e-15));

    ParticleMeasure doubled = pushforward(
        mu, [&](const Point& p) { return circle.make_point({2.0 * p[0]}); });
    CHECK(doubled.points()[2][0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(doubled.weights() == mu.weights());

    ParticleMeasure low = condition(mu, [](const Point& p) { return p[0] < 0.5; });
    CHECK(low.size() == 2);
    CHECK(low.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(low.points()[0][0] == doctest::Approx(0.1));  // order preserved
    CHECK_THROWS_AS(condition(mu, [](const Point&) { return false; }), NullConditioning);

    ParticleMeasure nu = equal_weight(circle, {circle.make_point({0.9})});
    std::vector<std::pair<double, const ParticleMeasure*>> parts = {{0.25, &mu}, {0.75, &nu}};
    ParticleMeasure blend = mix(parts);
    CHECK(blend.size() == 4);
    CHECK(blend.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

    // Pushforward into a different dimension is a map-domain error.
    CHECK_THROWS_AS(pushforward(mu,
                                [&](const Point&) {
                                    return spaces::torus2().make_point({0.1, 0.1});
                                }),
                    MapDomain);
}

TEST_CASE("wasserstein1 on the segment matches quantile-matching oracle") {
    MetricSpaceSpec seg = spaces::interval(0.0, 2.0);
    Rng rng = Rng::derive(99, 1);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t na = 1 + rng.below(7);
        const std::size_t nb = 1 + rng.below(7);
        std::vector<Point> pa;
        std::vector<Point> pb;
        std::vector<double> wa;
        std::vector<double> wb;
        std::vector<std::pair<double, double>> qa;
        std::vector<std::pair<double, double>> qb;
        double sa = 0.0;
        double sb = 0.0;
        for (std::size_t i = 0; i < na; ++i) {
            pa.push_back(seg.make_point({2.0 * rng.uniform01()}));
            wa.push_back(0.1 + rng.uniform01());
            sa += wa.back();
        }
        for (std::size_t i = 0; i < nb; ++i) {
            pb.push_back(seg.make_point({2.0 * rng.uniform01()}));
            wb.push_back(0.1 + rng.uniform01());
            sb += wb.back();
        }
        for (std::size_t i = 0; i < na; ++i) {
            wa[i] /= sa;
            qa.emplace_back(pa[i][0], wa[i]);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            wb[i] /= sb;
            qb.emplace_back(pb[i][0], wb[i]);
        }
        ParticleMeasure mu(seg, pa, wa);
        ParticleMeasure nu(seg, pb, wb);
        const double got = wasserstein1(mu, nu);
        const double want = w1_line_oracle(qa, qb);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("wasserstein1 on the circle: permutation oracle and rotation invariance") {
    MetricSpaceSpec circle = spaces::circle();
    Rng rng = Rng::derive(7, 2);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Point> a = random_points(circle, 5, rng);
        std::vector<Point> b = random_points(circle, 5, rng);
        ParticleMeasure mu = equal_weight(circle, a);
        ParticleMeasure nu = equal_weight(circle, b);
        // Circle diameter is 1/2, so the truncated cost min(d, 2) is d and
        // the permutation oracle computes plain W1.
        const double want = bl_oracle_equal_atoms(circle, a, b);
        CHECK(wasserstein1(mu, nu) == doctest::Approx(want).epsilon(1e-10));

        auto shift = [&](const std::vector<Point>& pts) {
            std::vector<Point> out;
            for (const Point& p : pts) out.push_back(circle.make_point({p[0] + 0.37}));
            return out;
        };
        const double rotated =
            wasserstein1(equal_weight(circle, shift(a)), equal_weight(circle, shift(b)));
        CHECK(rotated == doctest::Approx(wasserstein1(mu, nu)).epsilon(1e-10));
    }
}

TEST_CASE("arc versus full circle has transport cost 0.225") {
    // Uniform on [0, 0.1] against uniform on the circle: the CDF difference
    // G(x) = 9x on [0, 0.1], 1 - x after; the optimal rotation constant is
    // the length-median 0.45 and the integral of |G - 0.45| is 0.225.
    MetricSpaceSpec circle = spaces::circle();
    const std::size_t n = 2000;
    std::vector<Point> arc;
    std::vector<Point> full;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        arc.push_back(circle.make_point({0.1 * u}));
        full.push_back(circle.make_point({u}));
    }
    const double w1 = wasserstein1(equal_weight(circle, arc), equal_weight(circle, full));
    CHECK(w1 == doctest::Approx(0.225).epsilon(2e-3));
}

TEST_CASE("bl_distance is exact on 1-D probability measures") {
    MetricSpaceSpec seg = spaces::interval(0.0, 2.0);
    Rng rng = Rng::derive(3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        ParticleMeasure mu = equal_weight(seg, random_points(seg, 4, rng));
        ParticleMeasure nu = equal_weight(seg, random_points(seg, 4, rng));
        CHECK(bl_distance(mu, nu) ==
              doctest::Approx(std::min(wasserstein1(mu, nu), 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("bl_distance between diracs is the truncated distance") {
    MetricSpaceSpec torus = spaces::torus2();
    Rng rng = Rng::derive(17, 4);
    for (int trial = 0; trial < 30; ++trial) {
        Point a = random_points(torus, 1, rng)[0];
        Point b = random_points(torus, 1, rng)[0];
        ParticleMeasure mu = ParticleMeasure::dirac(torus, a);
        ParticleMeasure nu = ParticleMeasure::dirac(torus, b);
        // Torus diameter < 2, so min(d, 2) = d; the cone probe anchored at a
        // particle with radius 1 attains it exactly.
        CHECK(bl_distance(mu, nu) == doctest::Approx(torus.distance(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("probe bl_distance is a lower bound for the exact value") {
    MetricSpaceSpec torus = spaces::torus2();
    Rng rng = Rng::derive(23, 5);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Point> a = random_points(torus, 5, rng);
        std::vector<Point> b = random_points(torus, 5, rng);
        ParticleMeasure mu = equal_weight(torus, a);
        ParticleMeasure nu = equal_weight(torus, b);
        const double probe = bl_distance(mu, nu);
        const double exact = bl_oracle_equal_atoms(torus, a, b);
        CHECK(probe <= exact + 1e-9);
        CHECK(probe >= 0.0);
        CHECK(bl_distance(mu, mu) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(bl_distance(nu, mu) == doctest::Approx(probe).epsilon(1e-12));
    }
}

TEST_CASE("mass gaps register through the constant probe") {
    MetricSpaceSpec seg = spaces::interval(0.0, 2.0);
    std::vector<Point> pts = {seg.make_point({0.5}), seg.make_point({1.5})};
    ParticleMeasure mu(seg, pts, {0.5, 0.5});
    ParticleMeasure nu(seg, pts, {0.75, 0.75});
    // Same support, scaled weights: the supremum is attained by g = 1 and
    // equals the mass gap exactly.
    CHECK(bl_distance(mu, nu) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("shared probe families satisfy the triangle inequality") {
    MetricSpaceSpec torus = spaces::torus2();
    Rng rng = Rng::derive(31, 6);
    ProbeConfig cfg;
    cfg.fixed_anchors = random_points(torus, 24, rng);
    for (int trial = 0; trial < 10; ++trial) {
        ParticleMeasure mu = equal_weight(torus, random_points(torus, 6, rng));
        ParticleMeasure nu = equal_weight(torus, random_points(torus, 6, rng));
        ParticleMeasure la = equal_weight(torus, random_points(torus, 6, rng));
        const double ab = bl_distance(mu, nu, cfg);
        const double bc = bl_distance(nu, la, cfg);
        const double ac = bl_distance(mu, la, cfg);
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("density sampling is contained, normalized, and seed-deterministic") {
    DensitySpec box = uniform_box(spaces::annulus(), {0.2, 0.8}, {0.7, 1.4});
    ParticleMeasure mu = sample_density(box, 500, 42);
    CHECK(mu.size() == 500);
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (const Point& p : mu.points()) {
        CHECK(box.contains(p));
    }
    ParticleMeasure mu2 = sample_density(box, 500, 42);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(mu.points()[i][0] == mu2.points()[i][0]);
        CHECK(mu.points()[i][1] == mu2.points()[i][1]);
    }
    ParticleMeasure other = sample_density(box, 500, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        any_diff = any_diff || mu.points()[i][0] != other.points()[i][0];
    }
    CHECK(any_diff);
}

TEST_CASE("rejection sampling follows the declared density") {
    DensitySpec spec = uniform_box(spaces::interval(0.0, 1.0), {0.0}, {1.0});
    spec.density = [](const Point& p) { return 2.0 * p[0]; };
    spec.density_bound = 2.0;
    ParticleMeasure mu = sample_density(spec, 4000, 5);
    double mean = 0.0;
    for (const Point& p : mu.points()) mean += p[0];
    mean /= static_cast<double>(mu.size());
    CHECK(mean == doctest::Approx(2.0 / 3.0).epsilon(0.03));
}

TEST_CASE("stratified box sampling has lattice-tight interval counts") {
    DensitySpec box = uniform_box(spaces::interval(0.0, 1.0), {0.0}, {1.0});
    const std::size_t n = 1000;
    ParticleMeasure mu = sample_box_stratified(box, n, 11);
    CHECK(mu.size() == n);
    Rng rng = Rng::derive(4, 7);
    for (int trial = 0; trial < 20; ++trial) {
        double a = rng.uniform01();
        double b = rng.uniform01();
        if (a > b) std::swap(a, b);
        std::size_t count = 0;
        for (const Point& p : mu.points()) {
            if (p[0] >= a && p[0] < b) ++count;
        }
        const double expected = static_cast<double>(n) * (b - a);
        CHECK(std::fabs(static_cast<double>(count) - expected) <= 2.0);
    }
}

TEST_CASE("double formatting round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e17, -0.0, 123456.789}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK_THROWS_AS(parse_double("nope"), DomainError);
    CHECK_THROWS_AS(parse_double("1.5x"), DomainError);
}

TEST_CASE("measure CSV round-trip is bit exact") {
    TempDir dir("measure_csv");
    MetricSpaceSpec annulus = spaces::annulus();
    Rng rng = Rng::derive(5, 8);
    std::vector<Point> pts = random_points(annulus, 37, rng);
    std::vector<double> w;
    for (std::size_t i = 0; i < pts.size(); ++i) w.push_back(rng.uniform01() + 0.01);
    ParticleMeasure mu(annulus, pts, w);
    const std::string path = (dir.path() / "mu.csv").string();
    write_measure_csv(mu, path);
    ParticleMeasure back = read_measure_csv(path, annulus);
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.weights()[i] == mu.weights()[i]);
        CHECK(back.points()[i][0] == mu.points()[i][0]);
        CHECK(back.points()[i][1] == mu.points()[i][1]);
    }
    write_file(path, "w,x1\n0.5\n");
    CHECK_THROWS_AS(read_measure_csv(path, spaces::circle()), DomainError);
}

TEST_CASE("series records validate and round-trip") {
    CHECK_THROWS_AS(SeriesRecord("", {1.0}, {2.0}), DomainError);
    CHECK_THROWS_AS(SeriesRecord("s", {1.0, 1.0}, {2.0, 3.0}), DomainError);
    CHECK_THROWS_AS(SeriesRecord("s", {1.0}, {2.0, 3.0}), DomainError);
    TempDir dir("series_csv");
    SeriesRecord s("basin", {1.0, 2.0, 4.0}, {0.5, 0.25, 1.0 / 3.0});
    const std::string path = (dir.path() / "s.csv").string();
    write_series_csv(s, path);
    SeriesRecord back = read_series_csv(path);
    CHECK(back.label == "basin");
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.t[i] == s.t[i]);
        CHECK(back.value[i] == s.value[i]);
    }
}
