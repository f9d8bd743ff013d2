#pragma once

// Recursive maximum-likelihood estimators for r_t = a' ed(x_{t-1}) + sigma * eps_t
// with Gaussian-Chain noise eps_t of order 2 or 3, plus the exponentially
// forgotten recursive least-squares baseline.
//
// All three assume orthogonal regressors (ed_i * ed_j = 0 for i != j), which
// lets every coefficient be updated by its own scalar recursion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gchain/latent_scale.hpp"

namespace gchain {

enum class FilterKind { gc2, gc3, rls };

inline const char* to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::gc2: return "gc2";
        case FilterKind::gc3: return "gc3";
        case FilterKind::rls: return "rls";
    }
    return "?";
}

inline FilterKind parse_filter_kind(const std::string& name) {
    if (name == "gc2") return FilterKind::gc2;
    if (name == "gc3") return FilterKind::gc3;
    if (name == "rls") return FilterKind::rls;
    throw std::invalid_argument("unknown filter kind '" + name + "' (expected gc2, gc3 or rls)");
}

struct FilterConfig {
    FilterKind kind = FilterKind::gc2;
    double lambda = 0.95;   // forgetting factor in (0, 1)
    std::size_t dim = 2;    // number of excess-demand components
    double v_floor = 1e-12; // latent scales are floored at v_floor * sigma2_hat before use

    // Replaces the GC2 latent scale v_t^2 by a constant. Diagnostic hook: with
    // a value of 1 the GC2 recursion reduces to recursive least squares.
    std::optional<double> pinned_v2;
};

inline void validate(const FilterConfig& cfg) {
    if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0))
        throw std::domain_error("filter: lambda must lie in (0, 1)");
    if (cfg.dim < 1) throw std::domain_error("filter: dim must be >= 1");
    if (!(cfg.v_floor >= 0.0)) throw std::domain_error("filter: v_floor must be >= 0");
    if (cfg.pinned_v2 && !(*cfg.pinned_v2 > 0.0))
        throw std::domain_error("filter: pinned_v2 must be positive");
}

struct Observation {
    double r = 0.0;          // return r_t
    std::vector<double> ed;  // excess demands ed(x_{t-1})
};

struct FilterState {
    std::vector<double> a_hat;  // coefficient estimates
    std::vector<double> b;      // per-coefficient information (P_i for RLS)
    double c = 0.0;             // forgetting accumulator, (1 - lambda^t) / (1 - lambda)
    double sigma2_hat = 1.0;
    std::size_t t = 0;
    // Latent scales of the last step, before flooring.
    double last_v2 = 0.0;
    double last_u2 = 0.0;

    static FilterState initial(std::size_t dim) {
        FilterState s;
        s.a_hat.assign(dim, 0.0);
        s.b.assign(dim, 0.0);
        return s;
    }
};

namespace detail {

inline void check_shapes(const FilterState& state, const Observation& obs, const FilterConfig& cfg) {
    if (state.a_hat.size() != cfg.dim || state.b.size() != cfg.dim)
        throw std::invalid_argument("filter: state dimension does not match config.dim");
    if (obs.ed.size() != cfg.dim)
        throw std::invalid_argument("filter: observation has " + std::to_string(obs.ed.size()) +
                                    " excess demands, expected " + std::to_string(cfg.dim));
}

inline double residual(const FilterState& state, const Observation& obs) {
    double pred = 0.0;
    for (std::size_t i = 0; i < obs.ed.size(); ++i) pred += state.a_hat[i] * obs.ed[i];
    return obs.r - pred;
}

// Coefficient and information update shared by both chain filters:
//   a_i <- (lambda v2 b_i a_i + r ed_i) / (lambda v2 b_i + ed_i^2)
//   b_i <- lambda b_i + ed_i^2 / v2
// A zero denominator means no information on coefficient i at all; the estimate
// is kept.
inline void update_coefficients(FilterState& s, const Observation& obs, double v2, double lambda) {
    for (std::size_t i = 0; i < s.a_hat.size(); ++i) {
        const double ed = obs.ed[i];
        const double prior = lambda * v2 * s.b[i];
        const double den = prior + ed * ed;
        if (den > 0.0) s.a_hat[i] = (prior * s.a_hat[i] + obs.r * ed) / den;
        s.b[i] = lambda * s.b[i] + ed * ed / v2;
    }
}

// sigma2 <- (lambda c sigma2 + sample) / (1 + lambda c), then c <- 1 + lambda c.
inline void update_scale(FilterState& s, double scale_sample, double lambda) {
    const double lc = lambda * s.c;
    s.sigma2_hat = (lc * s.sigma2_hat + scale_sample) / (1.0 + lc);
    s.c = 1.0 + lc;
    ++s.t;
}

}  // namespace detail

inline FilterState gc2_step(FilterState state, const Observation& obs, const FilterConfig& cfg) {
    validate(cfg);
    detail::check_shapes(state, obs, cfg);
    const double floor = cfg.v_floor * state.sigma2_hat;
    const double e = detail::residual(state, obs);
    const double v2 = cfg.pinned_v2 ? *cfg.pinned_v2 : gc2_latent_scale(state.sigma2_hat, e);
    const double v2_used = std::max(v2, floor);
    state.last_v2 = v2;
    state.last_u2 = 0.0;
    detail::update_coefficients(state, obs, v2_used, cfg.lambda);
    detail::update_scale(state, v2_used, cfg.lambda);
    return state;
}

inline FilterState gc3_step(FilterState state, const Observation& obs, const FilterConfig& cfg) {
    validate(cfg);
    detail::check_shapes(state, obs, cfg);
    const double floor = cfg.v_floor * state.sigma2_hat;
    const double e = detail::residual(state, obs);
    const LatentScales ls = gc3_latent_scales(state.sigma2_hat, e);
    state.last_v2 = ls.v2;
    state.last_u2 = ls.u2;
    detail::update_coefficients(state, obs, std::max(ls.v2, floor), cfg.lambda);
    detail::update_scale(state, std::max(ls.u2, floor), cfg.lambda);
    return state;
}

// Exponentially weighted least squares, one scalar recursion per coefficient:
//   P_i <- lambda P_i + ed_i^2,  a_i <- a_i + (ed_i / P_i) * residual.
// P_i is kept in state.b. sigma2_hat tracks the forgetting-weighted mean squared
// residual.
inline FilterState rls_step(FilterState state, const Observation& obs, const FilterConfig& cfg) {
    validate(cfg);
    detail::check_shapes(state, obs, cfg);
    const double e = detail::residual(state, obs);
    for (std::size_t i = 0; i < state.a_hat.size(); ++i) {
        const double ed = obs.ed[i];
        state.b[i] = cfg.lambda * state.b[i] + ed * ed;
        if (state.b[i] > 0.0) state.a_hat[i] += ed / state.b[i] * e;
    }
    state.last_v2 = 1.0;
    state.last_u2 = 0.0;
    detail::update_scale(state, std::max(e * e, cfg.v_floor * state.sigma2_hat), cfg.lambda);
    return state;
}

inline FilterState step(const FilterState& state, const Observation& obs, const FilterConfig& cfg) {
    switch (cfg.kind) {
        case FilterKind::gc2: return gc2_step(state, obs, cfg);
        case FilterKind::gc3: return gc3_step(state, obs, cfg);
        case FilterKind::rls: return rls_step(state, obs, cfg);
    }
    throw std::logic_error("filter: unhandled kind");
}

// Folds the configured step over the observations from the initial state and
// returns the state after every step.
inline std::vector<FilterState> run_filter(const FilterConfig& cfg, std::span<const Observation> observations) {
    validate(cfg);
    if (observations.empty()) throw std::invalid_argument("run_filter: no observations");
    for (std::size_t k = 0; k < observations.size(); ++k)
        if (observations[k].ed.size() != cfg.dim)
            throw std::invalid_argument("run_filter: observation " + std::to_string(k) + " has " +
                                        std::to_string(observations[k].ed.size()) +
                                        " excess demands, expected " + std::to_string(cfg.dim));
    std::vector<FilterState> out;
    out.reserve(observations.size());
    FilterState s = FilterState::initial(cfg.dim);
    for (const auto& obs : observations) {
        s = step(s, obs, cfg);
        out.push_back(s);
    }
    return out;
}

}  // namespace gchain
