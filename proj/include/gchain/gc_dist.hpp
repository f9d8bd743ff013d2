#pragma once

// Gaussian-Chain distribution of order q: a Gaussian whose scale is itself a
// zero-mean Gaussian, nested q - 1 times. Sampling, analytic moments,
// Monte-Carlo tail probabilities and density estimates.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gchain/random.hpp"

namespace gchain {

struct GcParams {
    int q = 1;           // chain order, >= 1
    double m = 0.0;      // location
    double sigma = 1.0;  // scale, > 0
};

inline void validate(const GcParams& p) {
    if (p.q < 1) throw std::domain_error("gaussian chain: order q must be >= 1, got " + std::to_string(p.q));
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw std::domain_error("gaussian chain: sigma must be positive and finite");
    if (!std::isfinite(p.m)) throw std::domain_error("gaussian chain: location m must be finite");
}

struct GcMoments {
    double mean = 0.0;
    double variance = 0.0;
    double third_central = 0.0;
    double fourth_central = 0.0;
    double excess_kurtosis = 0.0;
};

// Exact moments: mean m, variance sigma^2, zero skew, fourth central moment
// 3^q sigma^4, so the excess kurtosis is 3^q - 3 regardless of m and sigma.
inline GcMoments analytic_moments(const GcParams& p) {
    validate(p);
    double three_pow_q = 1.0;
    for (int j = 0; j < p.q; ++j) three_pow_q *= 3.0;
    const double var = p.sigma * p.sigma;
    return GcMoments{
        .mean = p.m,
        .variance = var,
        .third_central = 0.0,
        .fourth_central = three_pow_q * var * var,
        .excess_kurtosis = three_pow_q - 3.0,
    };
}

inline double standardize(double x, double m, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("standardize: sigma must be positive");
    return (x - m) / sigma;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

// Draws from the chain in product form: m + sigma * z_1 * |z_2| * ... * |z_q|
// with i.i.d. standard normals. Unrolling the nested definition gives exactly
// this product. Keeps its own normal_distribution so the polar method's cached
// second variate is not thrown away between calls.
class GcSampler {
public:
    explicit GcSampler(GcParams params) : params_(params) { validate(params_); }

    const GcParams& params() const { return params_; }

    // |sigma^(q)|: the conditional standard deviation of the final Gaussian.
    double chain_scale(Rng& rng) {
        double s = params_.sigma;
        for (int j = 2; j <= params_.q; ++j) s *= std::abs(normal_(rng));
        return s;
    }

    double standard(Rng& rng) {
        double z = normal_(rng);
        for (int j = 2; j <= params_.q; ++j) z *= std::abs(normal_(rng));
        return z;
    }

    double operator()(Rng& rng) { return params_.m + params_.sigma * standard(rng); }

private:
    GcParams params_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double sample(const GcParams& params, Rng& rng) {
    GcSampler s(params);
    return s(rng);
}

inline std::vector<double> sample_n(const GcParams& params, std::size_t n, std::uint64_t seed) {
    GcSampler s(params);
    Rng rng = make_rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = s(rng);
    return out;
}

// ---------------------------------------------------------------------------
// Tail probabilities
// ---------------------------------------------------------------------------

struct TailTable {
    std::vector<int> orders;
    std::vector<double> thresholds;
    // cells[i][j] = 2F(thresholds[j]) for orders[i], in percent.
    std::vector<std::vector<double>> cells;
    std::size_t sample_count = 0;

    // 100 - 2F(1) per order, the probability mass inside one standard deviation.
    // Empty unless thresholds contains 1.
    std::vector<double> central_mass;
};

namespace detail {

inline std::uint64_t tail_stream(int q, std::size_t shard) {
    return (static_cast<std::uint64_t>(q) << 32) | static_cast<std::uint64_t>(shard);
}

// Counts of |sample| > x for every threshold, from n standard samples of order q.
inline std::vector<std::uint64_t> tail_counts(int q, std::span<const double> thresholds,
                                              std::size_t n, std::uint64_t seed) {
    std::vector<std::vector<std::uint64_t>> shard_counts(
        kMonteCarloShards, std::vector<std::uint64_t>(thresholds.size(), 0));
    run_sharded(kMonteCarloShards, [&](std::size_t shard) {
        GcSampler sampler(GcParams{q, 0.0, 1.0});
        Rng rng = make_rng(seed, tail_stream(q, shard));
        auto& counts = shard_counts[shard];
        const std::size_t len = shard_size(n, kMonteCarloShards, shard);
        for (std::size_t i = 0; i < len; ++i) {
            const double a = std::abs(sampler.standard(rng));
            for (std::size_t k = 0; k < thresholds.size(); ++k)
                if (a > thresholds[k]) ++counts[k];
        }
    });
    std::vector<std::uint64_t> total(thresholds.size(), 0);
    for (const auto& c : shard_counts)
        for (std::size_t k = 0; k < c.size(); ++k) total[k] += c[k];
    return total;
}

}  // namespace detail

// Estimate of 2F(x) = P(|eps| > x) for the standard chain of order q, in percent.
inline double tail_prob(int q, double x, std::size_t n_samples, std::uint64_t seed) {
    validate(GcParams{q, 0.0, 1.0});
    if (!(x > 0.0)) throw std::domain_error("tail_prob: threshold must be positive");
    if (n_samples == 0) throw std::domain_error("tail_prob: need at least one sample");
    const double xs[] = {x};
    const auto counts = detail::tail_counts(q, xs, n_samples, seed);
    return 100.0 * static_cast<double>(counts[0]) / static_cast<double>(n_samples);
}

inline TailTable tail_table(std::span<const int> orders, std::span<const double> thresholds,
                            std::size_t n_samples, std::uint64_t seed) {
    if (orders.empty() || thresholds.empty())
        throw std::domain_error("tail_table: orders and thresholds must be non-empty");
    if (n_samples == 0) throw std::domain_error("tail_table: need at least one sample");
    for (double x : thresholds)
        if (!(x > 0.0)) throw std::domain_error("tail_table: thresholds must be positive");

    TailTable table;
    table.orders.assign(orders.begin(), orders.end());
    table.thresholds.assign(thresholds.begin(), thresholds.end());
    table.sample_count = n_samples;

    std::ptrdiff_t unit_column = -1;
    for (std::size_t k = 0; k < thresholds.size(); ++k)
        if (thresholds[k] == 1.0) unit_column = static_cast<std::ptrdiff_t>(k);

    for (int q : orders) {
        validate(GcParams{q, 0.0, 1.0});
        const auto counts = detail::tail_counts(q, thresholds, n_samples, seed);
        std::vector<double> row(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k)
            row[k] = 100.0 * static_cast<double>(counts[k]) / static_cast<double>(n_samples);
        if (unit_column >= 0) table.central_mass.push_back(100.0 - row[unit_column]);
        table.cells.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Density
// ---------------------------------------------------------------------------

inline double normal_pdf(double x, double m, double s) {
    const double z = (x - m) / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

// Monte-Carlo estimate of the density at every point of xs. The conditioning
// chain sigma^(2..q) is sampled once per draw and shared by all points, so
// estimates at m + d and m - d are exactly equal. q = 1 is returned in closed
// form.
inline std::vector<double> density_mc(const GcParams& params, std::span<const double> xs,
                                      std::size_t n_samples, std::uint64_t seed) {
    validate(params);
    std::vector<double> out(xs.size(), 0.0);
    if (params.q == 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = normal_pdf(xs[i], params.m, params.sigma);
        return out;
    }
    if (n_samples == 0) throw std::domain_error("density_mc: need at least one sample");

    std::vector<std::vector<double>> partial(kMonteCarloShards, std::vector<double>(xs.size(), 0.0));
    run_sharded(kMonteCarloShards, [&](std::size_t shard) {
        GcSampler sampler(params);
        Rng rng = make_rng(seed, shard);
        auto& acc = partial[shard];
        const std::size_t len = shard_size(n_samples, kMonteCarloShards, shard);
        for (std::size_t i = 0; i < len; ++i) {
            const double s = sampler.chain_scale(rng);
            if (!(s > 0.0)) continue;  // measure-zero underflow; contributes nothing finite
            for (std::size_t k = 0; k < xs.size(); ++k) acc[k] += normal_pdf(xs[k], params.m, s);
        }
    });
    for (const auto& acc : partial)
        for (std::size_t k = 0; k < xs.size(); ++k) out[k] += acc[k];
    for (auto& v : out) v /= static_cast<double>(n_samples);
    return out;
}

inline double density_mc(const GcParams& params, double x, std::size_t n_samples, std::uint64_t seed) {
    const double xs[] = {x};
    return density_mc(params, xs, n_samples, seed)[0];
}

}  // namespace gchain
