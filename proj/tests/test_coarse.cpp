#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "ergokit/bowen.hpp"
#include "ergokit/cover.hpp"
#include "ergokit/density.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/ratio.hpp"
#include "ergokit/rng.hpp"
#include "ergokit/system.hpp"
#include "test_support.hpp"

using namespace ergokit;

namespace {

// Identity map on a bounded segment: d_tau equals the plain distance, so
// greedy cover geometry can be checked by hand.
System segment_identity() {
    System sys;
    sys.id = "segment_identity";
    sys.space = spaces::interval(0.0, 3.0);
    sys.kind = TimeKind::Discrete;
    sys.flow = [](double, const Point& x) { return x; };
    sys.speed_bound = 1.0;
    return sys;
}

std::vector<Point> points_on(const MetricSpaceSpec& space,
                             std::initializer_list<double> xs) {
    std::vector<Point> pts;
    for (double v : xs) pts.push_back(space.make_point({v}));
    return pts;
}

}  // namespace

TEST_CASE("greedy separation on a segment follows the scan order") {
    System sys = segment_identity();
    BowenContext ctx = make_bowen_context(sys, 2.0);
    std::vector<Point> cand = points_on(sys.space, {0.0, 0.5, 0.9, 2.0});
    CoverSpec cover = greedy_bisep(ctx, cand, 0.3);

    REQUIRE(cover.size() == 3);  // 0.5 is rejected: within 2*delta of 0.0
    CHECK(cover.centers[0][0] == 0.0);
    CHECK(cover.centers[1][0] == 0.9);
    CHECK(cover.centers[2][0] == 2.0);
    CHECK(cover.orbits.size() == 3);
    CHECK(cover.candidates.size() == 4);
    CHECK(cover.delta == 0.3);

    // Equidistant point: ties resolve to the lowest center index.
    CoverSpec::Assignment tie = cover.assign(sys.space.make_point({0.45}));
    CHECK(tie.index == 0);
    CHECK(tie.dist == doctest::Approx(0.45).epsilon(1e-15));

    // Beyond multiplier*delta of every center: unassigned, not thrown.
    CoverSpec::Assignment far = cover.assign(sys.space.make_point({3.0}));
    CHECK(far.index == -1);

    std::vector<Point> none;
    CHECK_THROWS_AS(greedy_bisep(ctx, none, 0.3), EmptyCandidates);
}

TEST_CASE("randomized covers are bi-separated and cover their candidates") {
    for (int inst = 0; inst < 10; ++inst) {
        System sys = (inst % 2 == 0) ? zoo::doubling() : zoo::doubling_contract();
        Rng rng = Rng::derive(500 + static_cast<std::uint64_t>(inst), 0);
        const double tau = 1.0 + static_cast<double>(inst % 4);
        const double delta = rng.uniform(0.03, 0.2);

        std::vector<Point> cand;
        for (int k = 0; k < 200; ++k) {
            if (sys.space.dim() == 1) {
                cand.push_back(sys.space.make_point({rng.uniform01()}));
            } else {
                cand.push_back(
                    sys.space.make_point({rng.uniform01(), rng.uniform(0.5, 1.9)}));
            }
        }
        BowenContext ctx = make_bowen_context(sys, tau, delta);
        CoverSpec cover = greedy_bisep(ctx, cand, delta);
        REQUIRE(cover.size() >= 1);

        // Accepted centers are pairwise 2*delta-separated in d_tau.
        for (std::size_t i = 0; i < cover.size(); ++i) {
            for (std::size_t j = i + 1; j < cover.size(); ++j) {
                CHECK(bowen_distance(ctx, cover.centers[i], cover.centers[j]) >=
                      2.0 * delta * (1.0 - 1e-12));
            }
        }
        // Greedy maximality: every candidate lies strictly inside 2*delta of
        // some center, hence well inside the 3*delta cells.
        for (const Point& c : cand) {
            CoverSpec::Assignment a = cover.assign(c);
            REQUIRE(a.index >= 0);
            CHECK(a.dist < 2.0 * delta);
        }
    }
}

TEST_CASE("a single all-covering cell reduces coarse-graining to conditioning") {
    System sys = zoo::doubling();
    BowenContext ctx = make_bowen_context(sys, 2.0);
    std::vector<Point> cand = points_on(sys.space, {0.1, 0.3, 0.7});
    // Circle diameter in d_tau is 0.5, so delta = 0.6 accepts one center
    // whose ball holds everything.
    CoverSpec cover = greedy_bisep(ctx, cand, 0.6);
    REQUIRE(cover.size() == 1);

    ParticleMeasure nu = sample_density(uniform_box(sys.space, {0.0}, {1.0}), 500, 8);
    ParticleMeasure mu = sample_density(uniform_box(sys.space, {0.0}, {1.0}), 1000, 9);
    CoarseGrainResult res = coarse_grain_detail(nu, mu, cover);

    ParticleMeasure expected = condition(mu, [](const Point&) { return true; });
    REQUIRE(res.measure.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::fabs(res.measure.weights()[i] - expected.weights()[i]) <= 1e-15);
    }
    REQUIRE(res.cell_mass.size() == 1);
    REQUIRE(res.ball_mass.size() == 1);
    CHECK(res.cell_mass[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.ball_mass[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.max_density_ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("coarse-graining conserves mass across many cells") {
    System sys = zoo::doubling();
    const double delta = 0.1;
    BowenContext ctx = make_bowen_context(sys, 3.0, delta);
    ParticleMeasure cand_m =
        sample_box_stratified(uniform_box(sys.space, {0.0}, {1.0}), 300, 41);
    CoverSpec cover = greedy_bisep(ctx, cand_m.points(), delta);
    REQUIRE(cover.size() >= 2);

    ParticleMeasure nu = sample_density(uniform_box(sys.space, {0.0}, {1.0}), 2000, 42);
    ParticleMeasure mu =
        sample_box_stratified(uniform_box(sys.space, {0.0}, {1.0}), 4000, 43);
    CoarseGrainResult res = coarse_grain_detail(nu, mu, cover);
    CHECK(std::fabs(res.measure.total_mass() - nu.total_mass()) <= 1e-12);
    CHECK(res.max_density_ratio > 0.0);
    // Unused cells carry no ball mass entry requirements; used ones do.
    double covered = 0.0;
    for (double m : res.cell_mass) covered += m;
    CHECK(covered == doctest::Approx(nu.total_mass()).epsilon(1e-12));
}

TEST_CASE("coarse-graining failure modes throw their dedicated errors") {
    System sys = zoo::doubling();
    BowenContext ctx = make_bowen_context(sys, 0.0, 0.02);

    // Cover built on a short arc cannot absorb a distant particle.
    std::vector<Point> cand = points_on(sys.space, {0.40, 0.42, 0.44});
    CoverSpec cover = greedy_bisep(ctx, cand, 0.02);
    ParticleMeasure far_nu = ParticleMeasure::dirac(sys.space, sys.space.make_point({0.9}));
    ParticleMeasure mu = sample_density(uniform_box(sys.space, {0.0}, {1.0}), 200, 3);
    CHECK_THROWS_AS(coarse_grain(far_nu, mu, cover), Unassigned);

    // Assignable nu but a reference measure missing from the used ball.
    std::vector<Point> one = points_on(sys.space, {0.5});
    CoverSpec tight = greedy_bisep(ctx, one, 0.02);
    ParticleMeasure nu_at = ParticleMeasure::dirac(sys.space, sys.space.make_point({0.5}));
    ParticleMeasure mu_away = ParticleMeasure::dirac(sys.space, sys.space.make_point({0.9}));
    CHECK_THROWS_AS(coarse_grain(nu_at, mu_away, tight), EmptyBall);
}

TEST_CASE("coarse-graining meets its Lipschitz error guarantee") {
    System sys = zoo::doubling();
    const double delta = 0.05;
    const double tau = 3.0;
    BowenContext ctx = make_bowen_context(sys, tau, delta);
    ParticleMeasure cand_m =
        sample_box_stratified(uniform_box(sys.space, {0.0}, {1.0}), 600, 51);
    CoverSpec cover = greedy_bisep(ctx, cand_m.points(), delta);

    ParticleMeasure nu = sample_density(uniform_box(sys.space, {0.0}, {1.0}), 1500, 52);
    ParticleMeasure mu =
        sample_box_stratified(uniform_box(sys.space, {0.0}, {1.0}), 20000, 53);
    TestFunction g = probes::cos_wave(sys.space, {1}, 1.0);
    for (double t : {0.0, 1.0, 3.0}) {
        ErrorCheck check = approx_error_check(nu, mu, cover, g, t);
        CHECK(check.epsilon == doctest::Approx(6.0 * delta * g.lipschitz).epsilon(1e-12));
        CHECK(check.lhs <= check.epsilon);
        CHECK(check.bound_ok);
    }
}

TEST_CASE("Bowen-ball ratio of Lebesgue against itself is one third") {
    System sys = zoo::doubling();
    DensitySpec box = uniform_box(sys.space, {0.0}, {1.0});
    BatchSampler mu_s = stratified_sampler(box);
    BatchSampler m_s = stratified_volume_sampler(box);
    Point x = sys.space.make_point({0.37});

    // tau = 0: plain balls, mu(B_delta)/m(B_{3 delta}) = 2 delta / 6 delta.
    RatioEstimate r0 = bowen_ratio(sys, mu_s, m_s, x, 0.05, 0.0, 100000, 21);
    CHECK_FALSE(r0.zero_denominator);
    CHECK(r0.n_mc == 100000);
    CHECK(std::fabs(r0.ratio - 1.0 / 3.0) < 1e-3);
    CHECK(r0.numerator == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(r0.denominator == doctest::Approx(0.3).epsilon(1e-3));

    // Doubling shrinks delta- and 3delta-balls by the same factor: the
    // ratio stays near 1/3 at every horizon.
    for (double tau : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
        RatioEstimate r = bowen_ratio(sys, mu_s, m_s, x, 0.05, tau, 100000, 22);
        CHECK_FALSE(r.zero_denominator);
        CHECK(r.mu_hits > 0);
        CHECK(r.ratio > 0.2);
        CHECK(r.ratio < 0.5);
    }
}

TEST_CASE("isometries make the ratio horizon-independent") {
    System id = zoo::identity();
    DensitySpec box = uniform_box(id.space, {0.0}, {1.0});
    BatchSampler mu_s = stratified_sampler(box);
    BatchSampler m_s = stratified_volume_sampler(box);
    Point x = id.space.make_point({0.25});
    RatioEstimate a = bowen_ratio(id, mu_s, m_s, x, 0.05, 0.0, 20000, 5);
    RatioEstimate b = bowen_ratio(id, mu_s, m_s, x, 0.05, 5.0, 20000, 5);
    CHECK(a.mu_hits == b.mu_hits);
    CHECK(a.m_hits == b.m_hits);
    CHECK(a.ratio == b.ratio);  // bitwise: identical orbits, identical draws

    System rot = zoo::rotation();
    DensitySpec rbox = uniform_box(rot.space, {0.0}, {1.0});
    BatchSampler rmu = stratified_sampler(rbox);
    BatchSampler rm = stratified_volume_sampler(rbox);
    Point rx = rot.space.make_point({0.6});
    RatioEstimate ra = bowen_ratio(rot, rmu, rm, rx, 0.05, 0.0, 20000, 6);
    RatioEstimate rb = bowen_ratio(rot, rmu, rm, rx, 0.05, 5.0, 20000, 6);
    CHECK(std::fabs(ra.ratio - rb.ratio) < 1e-9);  // rigid rotation
}

TEST_CASE("an unreachable reference ball is a sentinel, not a throw") {
    System sys = zoo::doubling();
    DensitySpec whole = uniform_box(sys.space, {0.0}, {1.0});
    DensitySpec arc = uniform_box(sys.space, {0.4}, {0.45});
    RatioEstimate r = bowen_ratio(sys, stratified_sampler(whole),
                                  stratified_volume_sampler(arc),
                                  sys.space.make_point({0.9}), 0.01, 0.0, 5000, 12);
    CHECK(r.zero_denominator);
    CHECK(std::isinf(r.ratio));
    CHECK(r.m_hits == 0);
    CHECK(r.denominator == 0.0);
}

TEST_CASE("hyperbolicity scan emits one deterministic row per horizon") {
    System sys = zoo::doubling();
    DensitySpec box = uniform_box(sys.space, {0.0}, {1.0});
    BatchSampler mu_s = stratified_sampler(box);
    BatchSampler m_s = stratified_volume_sampler(box);
    auto A_sampler = [space = sys.space](Rng& rng) {
        return space.make_point({rng.uniform01()});
    };
    std::vector<double> taus = {0.0, 1.0, 2.0, 3.0};
    std::vector<CehypRow> rows =
        cehyp_scan(sys, mu_s, m_s, A_sampler, 0.02, taus, 3, 20000, 77);
    REQUIRE(rows.size() == taus.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].tau == taus[i]);
        CHECK(rows[i].n_zero_denominators == 0);
        CHECK(rows[i].min_ratio > 0.2);
        CHECK(rows[i].min_ratio < 0.5);
    }
    std::vector<CehypRow> again =
        cehyp_scan(sys, mu_s, m_s, A_sampler, 0.02, taus, 3, 20000, 77);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].min_ratio == again[i].min_ratio);
    }
}

TEST_CASE("scan and cover serializers write readable files") {
    testkit::TempDir dir("coarse_io");
    std::vector<CehypRow> rows(2);
    rows[0].tau = 0.0;
    rows[0].min_ratio = 1.0 / 3.0;
    rows[1].tau = 1.0;
    rows[1].min_ratio = std::numeric_limits<double>::infinity();
    rows[1].n_zero_denominators = 2;
    const std::string path = (dir.path() / "scan.csv").string();
    write_cehyp_csv(rows, path);
    const std::string text = read_file(path);
    CHECK(text.find("tau,min_ratio,n_zero_denominators") != std::string::npos);
    CHECK(text.find("inf") != std::string::npos);

    System sys = zoo::doubling();
    BowenContext ctx = make_bowen_context(sys, 2.0);
    std::vector<Point> cand = points_on(sys.space, {0.1, 0.5, 0.9});
    CoverSpec cover = greedy_bisep(ctx, cand, 0.1);
    const std::string centers = (dir.path() / "centers.csv").string();
    const std::string sidecar = (dir.path() / "cover.json").string();
    write_cover_csv(cover, centers, sidecar);
    CHECK(read_file(centers).find("0.5") != std::string::npos);
    CHECK(read_file(sidecar).find("\"tau\"") != std::string::npos);
}
