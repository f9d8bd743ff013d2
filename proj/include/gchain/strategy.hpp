#pragma once

// Market mood and the long-only Ride-the-Mood strategy.
//
// mood(t) = a_hat_{t,1} + a_hat_{t,2}: estimated big-buyer strength plus the
// (negative) big-seller strength. Its 5-bar trailing mean drives a two-state
// machine that buys when the average turns positive and sells when it turns
// negative. Returns are simple per-cycle fractions; the accumulated return of a
// run is their arithmetic sum.

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gchain/price_series.hpp"

namespace gchain {

inline constexpr std::size_t kMoodWindow = 5;

inline double mood(std::span<const double> a_hat) {
    if (a_hat.size() != 2) throw std::invalid_argument("mood: expected a 2-component estimate");
    return a_hat[0] + a_hat[1];
}

// Trailing mean over `window` points; empty until the window is full.
inline std::vector<std::optional<double>> mood_ma(std::span<const double> moods,
                                                  std::size_t window = kMoodWindow) {
    if (window == 0) throw std::invalid_argument("mood_ma: window must be positive");
    std::vector<std::optional<double>> out(moods.size());
    for (std::size_t t = window - 1; t < moods.size(); ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < window; ++i) sum += moods[t - i];
        out[t] = sum / static_cast<double>(window);
    }
    return out;
}

enum class Position { flat, held };
enum class Action { none, buy, sell };

// Sign-crossing state machine. Only strict crossings act: a buy needs the previous
// average <= 0 and the current one > 0 while flat; a sell needs previous >= 0 and
// current < 0 while holding. Undefined averages neither act nor update the
// previous value.
class RideMood {
public:
    Position position() const { return position_; }

    Action on_bar(std::optional<double> avg) {
        Action act = Action::none;
        if (avg && prev_) {
            if (position_ == Position::flat && *prev_ <= 0.0 && *avg > 0.0) {
                act = Action::buy;
                position_ = Position::held;
            } else if (position_ == Position::held && *prev_ >= 0.0 && *avg < 0.0) {
                act = Action::sell;
                position_ = Position::flat;
            }
        }
        if (avg) prev_ = avg;
        return act;
    }

private:
    Position position_ = Position::flat;
    std::optional<double> prev_;
};

struct TradeCycle {
    std::size_t buy_index = 0;
    std::size_t sell_index = 0;
    double buy_price = 0.0;
    Date buy_date;
    double sell_price = 0.0;
    Date sell_date;
    double cycle_return = 0.0;  // (sell - buy) / buy
};

inline TradeCycle make_cycle(double buy_price, Date buy_date, double sell_price, Date sell_date) {
    TradeCycle c;
    c.buy_price = buy_price;
    c.buy_date = buy_date;
    c.sell_price = sell_price;
    c.sell_date = sell_date;
    c.cycle_return = (sell_price - buy_price) / buy_price;
    return c;
}

struct RideMoodRun {
    std::vector<TradeCycle> cycles;
    std::vector<Position> positions;  // position held at the close of each bar
};

// Runs the strategy over aligned mood averages and prices, trading at each
// signal bar's close. A position still open at the last bar is sold at the last
// close; a buy signal on the last bar itself is not taken, since it could only
// produce a same-day round trip.
inline RideMoodRun ride_mood_run(std::span<const std::optional<double>> avg, const PriceSeries& prices) {
    if (avg.size() != prices.size())
        throw std::invalid_argument("ride_mood: mood average and price series differ in length");
    RideMoodRun run;
    run.positions.resize(avg.size(), Position::flat);
    RideMood machine;
    std::optional<std::size_t> entry;
    const std::size_t last = avg.empty() ? 0 : avg.size() - 1;
    for (std::size_t t = 0; t < avg.size(); ++t) {
        if (t == last && machine.position() == Position::flat) break;
        const Action act = machine.on_bar(avg[t]);
        if (act == Action::buy) {
            entry = t;
        } else if (act == Action::sell || (t == last && entry)) {
            TradeCycle c = make_cycle(prices.bars[*entry].close, prices.bars[*entry].date,
                                      prices.bars[t].close, prices.bars[t].date);
            c.buy_index = *entry;
            c.sell_index = t;
            run.cycles.push_back(c);
            entry.reset();
        }
        run.positions[t] = entry ? Position::held : Position::flat;
    }
    return run;
}

inline std::vector<TradeCycle> ride_mood(std::span<const std::optional<double>> avg, const PriceSeries& prices) {
    return ride_mood_run(avg, prices).cycles;
}

// Arithmetic (non-compounded) sum of per-cycle returns.
inline double accumulate(std::span<const TradeCycle> cycles) {
    double sum = 0.0;
    for (const auto& c : cycles) sum += c.cycle_return;
    return sum;
}

inline double accumulate(std::span<const double> cycle_returns) {
    return std::accumulate(cycle_returns.begin(), cycle_returns.end(), 0.0);
}

inline double buy_hold(std::span<const double> closes) {
    if (closes.size() < 2) throw std::domain_error("buy_hold: need at least two prices");
    if (!(closes.front() > 0.0)) throw std::domain_error("buy_hold: first price must be positive");
    return (closes.back() - closes.front()) / closes.front();
}

inline double buy_hold(const PriceSeries& prices) { return buy_hold(prices.closes()); }

// Equally weighted portfolio: the mean of the per-symbol returns.
inline double portfolio_return(std::span<const double> per_symbol) {
    if (per_symbol.empty()) throw std::domain_error("portfolio_return: no symbols");
    return std::accumulate(per_symbol.begin(), per_symbol.end(), 0.0) / static_cast<double>(per_symbol.size());
}

struct BacktestReport {
    std::string symbol;
    std::vector<TradeCycle> cycles;
    double accumulated_return = 0.0;
    double buy_hold_return = 0.0;
};

}  // namespace gchain
