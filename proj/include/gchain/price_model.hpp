#pragma once

// Big-buyer / big-seller price model. The state x_t is the log-ratio of the price
// to its n-day moving average; big buyers trade when the price sits below its
// average (x < 0), big sellers when it sits above (x > 0), and
//   r_t = a1(t) ed1(x_{t-1}) + a2(t) ed2(x_{t-1}) + sigma * eps_t
// with eps_t a standard Gaussian-Chain of order q.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gchain/gc_dist.hpp"
#include "gchain/price_series.hpp"
#include "gchain/random.hpp"

namespace gchain {

struct ModelConfig {
    std::size_t n = 20;  // moving-average window, trading days
    double sigma = 0.01;
    int q = 2;
    double p0 = 100.0;
};

inline void validate(const ModelConfig& c) {
    if (c.n < 1) throw std::domain_error("price model: n must be >= 1");
    if (!(c.sigma > 0.0)) throw std::domain_error("price model: sigma must be positive");
    if (c.q < 1) throw std::domain_error("price model: q must be >= 1");
    if (!(c.p0 > 0.0)) throw std::domain_error("price model: p0 must be positive");
}

// x_t = ln(p_t / mean(window)), where window holds p_{t-n+1}, ..., p_t (oldest
// first, so p_t is the last element).
inline double log_ratio(std::span<const double> window) {
    if (window.empty()) throw std::domain_error("log_ratio: empty window");
    double sum = 0.0;
    for (double p : window) {
        if (!(p > 0.0)) throw std::domain_error("log_ratio: prices must be positive");
        sum += p;
    }
    return std::log(window.back() / (sum / static_cast<double>(window.size())));
}

struct ExcessDemand {
    double buyer = 0.0;   // ed1: |x| when the price is below its average
    double seller = 0.0;  // ed2: |x| when the price is above its average
};

inline ExcessDemand excess_demands(double x) {
    if (x < 0.0) return {-x, 0.0};
    if (x > 0.0) return {0.0, x};
    return {};
}

struct StrengthPath {
    std::vector<double> a1;  // big-buyer strength, >= 0 expected
    std::vector<double> a2;  // big-seller strength, <= 0 expected

    std::size_t size() const { return a1.size(); }
};

struct StrengthSegment {
    std::size_t t_start = 0;
    double a1 = 0.0;
    double a2 = 0.0;
};

// Piecewise-constant path of length T; each segment holds from its t_start until
// the next segment's start. Segments must be sorted with the first at t = 0.
inline StrengthPath expand_segments(std::span<const StrengthSegment> segments, std::size_t T) {
    if (segments.empty() || segments.front().t_start != 0)
        throw std::invalid_argument("strength path: first segment must start at t = 0");
    for (std::size_t k = 1; k < segments.size(); ++k)
        if (segments[k].t_start <= segments[k - 1].t_start)
            throw std::invalid_argument("strength path: segment starts must be strictly increasing");
    StrengthPath path;
    path.a1.resize(T);
    path.a2.resize(T);
    std::size_t k = 0;
    for (std::size_t t = 0; t < T; ++t) {
        while (k + 1 < segments.size() && segments[k + 1].t_start <= t) ++k;
        path.a1[t] = segments[k].a1;
        path.a2[t] = segments[k].a2;
    }
    return path;
}

// Reads "t_start a1 a2" rows (whitespace or tab separated, '#' comments).
inline std::vector<StrengthSegment> parse_segments(std::istream& in, const std::string& source) {
    std::vector<StrengthSegment> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        StrengthSegment seg;
        long long t = -1;
        if (!(row >> t >> seg.a1 >> seg.a2) || t < 0)
            throw ParseError(source, lineno, "expected 't_start a1 a2'");
        std::string extra;
        if (row >> extra) throw ParseError(source, lineno, "unexpected trailing field '" + extra + "'");
        seg.t_start = static_cast<std::size_t>(t);
        out.push_back(seg);
    }
    return out;
}

struct SimulatedBar {
    double price = 0.0;
    std::optional<double> x_prev;  // x_{t-1}; empty during warmup
    double ed1 = 0.0;
    double ed2 = 0.0;
    double r = 0.0;
    double signal = 0.0;  // a1 ed1 + a2 ed2
    double noise = 0.0;   // sigma * eps_t
};

struct SimulatedPrices {
    std::vector<SimulatedBar> bars;
    double snr = 0.0;

    std::vector<double> prices() const {
        std::vector<double> out;
        out.reserve(bars.size());
        for (const auto& b : bars) out.push_back(b.price);
        return out;
    }
};

// RMS(signal) / RMS(noise).
inline double snr(std::span<const double> signal, std::span<const double> noise) {
    if (signal.size() != noise.size()) throw std::invalid_argument("snr: sequences differ in length");
    double s2 = 0.0, n2 = 0.0;
    for (double s : signal) s2 += s * s;
    for (double v : noise) n2 += v * v;
    if (!(n2 > 0.0)) throw std::domain_error("snr: zero noise power");
    return std::sqrt(s2 / n2);
}

// Generates path.size() bars. Bars 0..n-1 are warmup with the price held at p0;
// from bar n on, x_{t-1} comes from the n prices ending at bar t-1 and
// p_t = p_{t-1} exp(r_t). The snr covers the non-warmup bars.
inline SimulatedPrices simulate_prices(const ModelConfig& cfg, const StrengthPath& path, std::uint64_t seed) {
    validate(cfg);
    if (path.a1.size() != path.a2.size()) throw std::invalid_argument("simulate_prices: a1 and a2 differ in length");
    const std::size_t T = path.size();
    GcSampler eps(GcParams{cfg.q, 0.0, 1.0});
    Rng rng = make_rng(seed);

    SimulatedPrices out;
    out.bars.resize(T);
    std::vector<double> prices(T, cfg.p0);
    std::vector<double> signal, noise;
    for (std::size_t t = 0; t < T; ++t) {
        SimulatedBar& bar = out.bars[t];
        if (t < cfg.n) {
            bar.price = cfg.p0;
            continue;
        }
        const double x = log_ratio(std::span<const double>(prices).subspan(t - cfg.n, cfg.n));
        const ExcessDemand ed = excess_demands(x);
        bar.x_prev = x;
        bar.ed1 = ed.buyer;
        bar.ed2 = ed.seller;
        bar.signal = path.a1[t] * ed.buyer + path.a2[t] * ed.seller;
        bar.noise = cfg.sigma * eps.standard(rng);
        bar.r = bar.signal + bar.noise;
        prices[t] = prices[t - 1] * std::exp(bar.r);
        bar.price = prices[t];
        signal.push_back(bar.signal);
        noise.push_back(bar.noise);
    }
    if (!noise.empty()) out.snr = snr(signal, noise);
    return out;
}

}  // namespace gchain
