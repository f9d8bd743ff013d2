#pragma once

// Synthetic tracking experiment: a single time-varying coefficient
//   a(t) = 20 (1 + sin(8 pi t / 1000)),  ed = 1,  r_t = a(t) + sigma * eps_t
// with Gaussian-Chain noise, estimated by one of the recursive filters.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "gchain/filter.hpp"
#include "gchain/gc_dist.hpp"
#include "gchain/random.hpp"

namespace gchain {

struct TrackingConfig {
    FilterKind kind = FilterKind::gc2;
    int q = 5;
    double sigma = 40.0;
    std::size_t T = 1000;
    double lambda = 0.95;
};

struct TrackingRow {
    std::size_t t = 0;
    double r = 0.0;
    double a_true = 0.0;
    double a_hat = 0.0;
};

struct TrackingResult {
    std::vector<TrackingRow> rows;
    double rmse = 0.0;
    // Largest |a_hat_t - a_hat_{t-1}| over t >= 2. The first step is excluded:
    // from zero information every filter jumps straight to r_1.
    double max_jump = 0.0;
};

inline double tracking_target(std::size_t t) {
    return 20.0 * (1.0 + std::sin(8.0 * std::numbers::pi * static_cast<double>(t) / 1000.0));
}

// Returns r_1..r_T; the noise depends only on (q, sigma, T, seed), so every
// filter sees the same data for a given seed.
inline std::vector<double> tracking_returns(const TrackingConfig& cfg, std::uint64_t seed) {
    GcSampler noise(GcParams{cfg.q, 0.0, cfg.sigma});
    Rng rng = make_rng(seed);
    std::vector<double> r(cfg.T);
    for (std::size_t t = 1; t <= cfg.T; ++t) r[t - 1] = tracking_target(t) + noise(rng);
    return r;
}

inline TrackingResult run_tracking(const TrackingConfig& cfg, std::uint64_t seed) {
    FilterConfig fc;
    fc.kind = cfg.kind;
    fc.lambda = cfg.lambda;
    fc.dim = 1;
    const auto r = tracking_returns(cfg, seed);
    TrackingResult out;
    out.rows.reserve(cfg.T);
    FilterState s = FilterState::initial(1);
    double sq = 0.0;
    for (std::size_t t = 1; t <= cfg.T; ++t) {
        const double prev = s.a_hat[0];
        s = step(s, Observation{r[t - 1], {1.0}}, fc);
        const double a = tracking_target(t);
        out.rows.push_back({t, r[t - 1], a, s.a_hat[0]});
        sq += (s.a_hat[0] - a) * (s.a_hat[0] - a);
        if (t >= 2) out.max_jump = std::max(out.max_jump, std::abs(s.a_hat[0] - prev));
    }
    out.rmse = cfg.T > 0 ? std::sqrt(sq / static_cast<double>(cfg.T)) : 0.0;
    return out;
}

}  // namespace gchain
