#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ergokit/bowen.hpp"
#include "ergokit/density.hpp"

namespace ergokit {

// A seedable batch of sample points standing in for a measure in
// Monte-Carlo estimates. `mass` is the total mass the batch represents: 1
// for probability measures, the box volume for a reference-volume sampler
// (so that hit-fraction * mass estimates the measure of a set).
struct BatchSampler {
    std::function<std::vector<Point>(std::uint64_t seed, std::size_t n)> draw;
    double mass = 1.0;
};

// iid sampler for any DensitySpec (mass 1, a probability law).
BatchSampler iid_sampler(DensitySpec spec);

// Jittered-lattice sampler for a uniform box (mass 1). Stratification keeps
// small-ball counts within a boundary-cell deviation of their expectation,
// which tightens Bowen-ball hit statistics at moderate n.
BatchSampler stratified_sampler(DensitySpec spec);

// Reference-volume versions: same draws, mass = box volume, so
// hit-fraction * mass estimates Lebesgue measure of the hit set.
BatchSampler volume_sampler(DensitySpec spec);
BatchSampler stratified_volume_sampler(DensitySpec spec);

struct RatioEstimate {
    double ratio = 0.0;          // +infinity when zero_denominator
    bool zero_denominator = false;
    double numerator = 0.0;      // mu(B_delta^tau(x)) estimate
    double denominator = 0.0;    // m(B_{3 delta}^tau(x)) estimate
    std::size_t mu_hits = 0;
    std::size_t m_hits = 0;
    std::size_t n_mc = 0;
};

// Monte-Carlo estimate of the Bowen-ball measure ratio
//   mu(y : d_tau(x, y) < delta) / m(y : d_tau(x, y) < 3 delta).
// A zero denominator is reported as a sentinel, not thrown.
RatioEstimate bowen_ratio(const System& sys, const BatchSampler& mu_sampler,
                          const BatchSampler& m_sampler, const Point& x, double delta,
                          double tau, std::size_t n_mc, std::uint64_t seed);

struct CehypRow {
    double tau = 0.0;
    double min_ratio = 0.0;  // min over centers, ignoring sentinel entries
    int n_zero_denominators = 0;
};

// For each tau, the minimum bowen_ratio over n_x centers drawn from
// A_sampler; the centers are drawn once and shared across the tau rows.
std::vector<CehypRow> cehyp_scan(const System& sys, const BatchSampler& mu_sampler,
                                 const BatchSampler& m_sampler,
                                 const std::function<Point(Rng&)>& A_sampler,
                                 double delta, std::span<const double> tau_list, int n_x,
                                 std::size_t n_mc, std::uint64_t seed);

// CSV "tau,min_ratio,n_zero_denominators".
void write_cehyp_csv(std::span<const CehypRow> rows, const std::string& path);

}  // namespace ergokit
