#pragma once

// End-to-end RideMood backtest over a daily close series:
// prices -> log-ratio state -> excess demands -> filter -> mood -> 5-bar mean
// -> trades. Deterministic; no random numbers on this path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gchain/filter.hpp"
#include "gchain/price_model.hpp"
#include "gchain/price_series.hpp"
#include "gchain/strategy.hpp"

namespace gchain {

struct BacktestConfig {
    FilterKind kind = FilterKind::gc2;
    double lambda = 0.95;
    std::size_t n = 20;
    double v_floor = 1e-12;
};

struct TraceRow {
    Date date;
    double close = 0.0;
    std::optional<double> mood;
    std::optional<double> mood_ma;
    Position position = Position::flat;
};

struct BacktestResult {
    BacktestReport report;
    std::vector<TraceRow> trace;
};

// Filter updates start at bar n (the first bar whose previous bar has a full
// moving-average window), so the first mood average is defined at bar n + 4.
inline BacktestResult run_backtest(const BacktestConfig& cfg, const PriceSeries& series) {
    if (cfg.n < 1) throw std::domain_error("backtest: n must be >= 1");
    validate(series);
    if (series.size() <= std::max(cfg.n, kMoodWindow) + 1)
        throw std::domain_error("backtest: series of " + std::to_string(series.size()) +
                                " bars is too short for n = " + std::to_string(cfg.n));

    FilterConfig fc;
    fc.kind = cfg.kind;
    fc.lambda = cfg.lambda;
    fc.dim = 2;
    fc.v_floor = cfg.v_floor;
    validate(fc);

    const std::vector<double> closes = series.closes();
    const std::size_t N = closes.size();

    std::vector<std::optional<double>> moods(N);
    std::vector<double> defined_moods;
    FilterState state = FilterState::initial(2);
    for (std::size_t t = cfg.n; t < N; ++t) {
        const double x_prev = log_ratio(std::span<const double>(closes).subspan(t - cfg.n, cfg.n));
        const ExcessDemand ed = excess_demands(x_prev);
        const Observation obs{std::log(closes[t] / closes[t - 1]), {ed.buyer, ed.seller}};
        state = step(state, obs, fc);
        moods[t] = mood(state.a_hat);
        defined_moods.push_back(*moods[t]);
    }

    std::vector<std::optional<double>> avg(N);
    const auto ma = mood_ma(defined_moods);
    for (std::size_t k = 0; k < ma.size(); ++k) avg[cfg.n + k] = ma[k];

    RideMoodRun run = ride_mood_run(avg, series);

    BacktestResult result;
    result.report.symbol = series.symbol;
    result.report.cycles = std::move(run.cycles);
    result.report.accumulated_return = accumulate(result.report.cycles);
    result.report.buy_hold_return = buy_hold(closes);
    result.trace.reserve(N);
    for (std::size_t t = 0; t < N; ++t)
        result.trace.push_back({series.bars[t].date, closes[t], moods[t], avg[t], run.positions[t]});
    return result;
}

}  // namespace gchain
