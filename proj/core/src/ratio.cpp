#include "ergokit/ratio.hpp"

#include <cmath>
#include <limits>

#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"
#include "ergokit/numeric.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

BatchSampler iid_sampler(DensitySpec spec) {
    BatchSampler s;
    s.mass = 1.0;
    s.draw = [spec = std::move(spec)](std::uint64_t seed, std::size_t n) {
        return sample_density(spec, n, seed).points();
    };
    return s;
}

BatchSampler stratified_sampler(DensitySpec spec) {
    BatchSampler s;
    s.mass = 1.0;
    s.draw = [spec = std::move(spec)](std::uint64_t seed, std::size_t n) {
        return sample_box_stratified(spec, n, seed).points();
    };
    return s;
}

BatchSampler volume_sampler(DensitySpec spec) {
    BatchSampler s = iid_sampler(spec);
    s.mass = spec.box_volume();
    return s;
}

BatchSampler stratified_volume_sampler(DensitySpec spec) {
    const double volume = spec.box_volume();
    BatchSampler s = stratified_sampler(std::move(spec));
    s.mass = volume;
    return s;
}

namespace {

std::size_t count_hits(const BowenContext& ctx, std::span<const Point> orbit_x,
                       const std::vector<Point>& batch, double radius) {
    std::vector<unsigned char> hit(batch.size(), 0);
    parallel_fill(batch.size(), [&](std::size_t i) {
        hit[i] = bowen_distance_to_orbit(ctx, orbit_x, batch[i], radius) < radius ? 1 : 0;
    });
    std::size_t n = 0;
    for (unsigned char h : hit) n += h;
    return n;
}

}  // namespace

RatioEstimate bowen_ratio(const System& sys, const BatchSampler& mu_sampler,
                          const BatchSampler& m_sampler, const Point& x, double delta,
                          double tau, std::size_t n_mc, std::uint64_t seed) {
    if (n_mc < 1000) throw DomainError("bowen_ratio: n_mc must be at least 1000");
    if (!(delta > 0.0)) throw DomainError("bowen_ratio: delta must be positive");
    const BowenContext ctx = make_bowen_context(sys, tau, delta);
    const std::vector<Point> orbit_x = bowen_orbit(ctx, sys.space.canonical(x));

    Rng seeds = Rng::derive(seed, 0xCE);
    const std::uint64_t mu_seed = seeds.next_u64();
    const std::uint64_t m_seed = seeds.next_u64();

    RatioEstimate est;
    est.n_mc = n_mc;
    const std::vector<Point> mu_batch = mu_sampler.draw(mu_seed, n_mc);
    est.mu_hits = count_hits(ctx, orbit_x, mu_batch, delta);
    est.numerator =
        mu_sampler.mass * static_cast<double>(est.mu_hits) / static_cast<double>(n_mc);

    const std::vector<Point> m_batch = m_sampler.draw(m_seed, n_mc);
    est.m_hits = count_hits(ctx, orbit_x, m_batch, 3.0 * delta);
    est.denominator =
        m_sampler.mass * static_cast<double>(est.m_hits) / static_cast<double>(n_mc);

    if (est.m_hits == 0) {
        est.zero_denominator = true;
        est.ratio = std::numeric_limits<double>::infinity();
    } else {
        est.ratio = est.numerator / est.denominator;
    }
    return est;
}

std::vector<CehypRow> cehyp_scan(const System& sys, const BatchSampler& mu_sampler,
                                 const BatchSampler& m_sampler,
                                 const std::function<Point(Rng&)>& A_sampler,
                                 double delta, std::span<const double> tau_list, int n_x,
                                 std::size_t n_mc, std::uint64_t seed) {
    if (n_x < 1) throw DomainError("cehyp_scan: n_x must be positive");
    if (tau_list.empty()) throw DomainError("cehyp_scan: empty tau list");

    Rng center_rng = Rng::derive(seed, 0xA0);
    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(n_x));
    for (int j = 0; j < n_x; ++j) centers.push_back(A_sampler(center_rng));

    std::vector<CehypRow> rows;
    rows.reserve(tau_list.size());
    for (std::size_t ti = 0; ti < tau_list.size(); ++ti) {
        CehypRow row;
        row.tau = tau_list[ti];
        row.min_ratio = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_x; ++j) {
            const std::uint64_t sub_seed =
                seed ^ (0x9e3779b97f4a7c15ULL * (ti * static_cast<std::size_t>(n_x) +
                                                 static_cast<std::size_t>(j) + 1));
            const RatioEstimate est =
                bowen_ratio(sys, mu_sampler, m_sampler, centers[static_cast<std::size_t>(j)],
                            delta, row.tau, n_mc, sub_seed);
            if (est.zero_denominator)
                ++row.n_zero_denominators;
            else
                row.min_ratio = std::min(row.min_ratio, est.ratio);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_cehyp_csv(std::span<const CehypRow> rows, const std::string& path) {
    std::string out = "tau,min_ratio,n_zero_denominators\n";
    for (const CehypRow& r : rows) {
        out += format_double(r.tau);
        out += ',';
        out += std::isinf(r.min_ratio) ? "inf" : format_double(r.min_ratio);
        out += ',';
        out += std::to_string(r.n_zero_denominators);
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace ergokit
