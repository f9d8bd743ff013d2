#pragma once

// Text renderings of backtest results. The report is TSV laid out like a
// per-symbol column of a buy/sell cycle table:
//
//   symbol              HK1398
//   cycle  buy                   sell                  return
//   1      buy: 4.00; 2012-09-18 sell: 4.07; 2012-09-27 return: 1.75%
//   Accumulated Return  1.75%
//   Buy&Hold Return     4.40%
//
// Lines starting with '#' are comments (the CLI records its resolved config
// there). Percentages are rounded half away from zero to 2 decimals.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gchain/backtest.hpp"
#include "gchain/price_series.hpp"
#include "gchain/strategy.hpp"

namespace gchain {

// Rounds to `decimals` places, halves away from zero. The relative nudge keeps
// values like 0.0175 * 100 (stored as 1.74999...) rounding the way they print.
inline double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double scaled = std::abs(value) * scale;
    const double rounded = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, scaled)) / scale;
    return std::copysign(rounded, value) + 0.0;  // + 0.0 turns -0 into 0
}

inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_up(value, decimals));
    return buf;
}

// Fraction -> "x.xx%".
inline std::string format_percent(double fraction) { return format_fixed(100.0 * fraction, 2) + "%"; }

inline std::string emit_report(const BacktestReport& report, std::span<const std::string> comments = {}) {
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "symbol\t" << report.symbol << '\n';
    out << "cycle\tbuy\tsell\treturn\n";
    for (std::size_t i = 0; i < report.cycles.size(); ++i) {
        const TradeCycle& c = report.cycles[i];
        out << (i + 1) << "\tbuy: " << format_fixed(c.buy_price, 2) << "; " << format_date(c.buy_date)
            << "\tsell: " << format_fixed(c.sell_price, 2) << "; " << format_date(c.sell_date)
            << "\treturn: " << format_percent(c.cycle_return) << '\n';
    }
    out << "Accumulated Return\t" << format_percent(report.accumulated_return) << '\n';
    out << "Buy&Hold Return\t" << format_percent(report.buy_hold_return) << '\n';
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') fields.back().pop_back();
    return fields;
}

inline double parse_percent(std::string_view s) {
    s = trim(s);
    if (s.empty() || s.back() != '%') throw std::invalid_argument("expected a percentage, got '" + std::string(s) + "'");
    return parse_double(s.substr(0, s.size() - 1)) / 100.0;
}

// "<label>: <price>; <date>"
inline std::pair<double, Date> parse_leg(std::string_view s, std::string_view label) {
    s = trim(s);
    if (s.substr(0, label.size()) != label || s.size() <= label.size() || s[label.size()] != ':')
        throw std::invalid_argument("expected '" + std::string(label) + ": price; date'");
    s.remove_prefix(label.size() + 1);
    const auto semi = s.find(';');
    if (semi == std::string_view::npos) throw std::invalid_argument("missing ';' between price and date");
    return {parse_double(trim(s.substr(0, semi))), parse_date(trim(s.substr(semi + 1)))};
}

}  // namespace detail

// Inverse of emit_report, up to the 2-decimal rounding of the rendered values.
inline BacktestReport parse_report(std::istream& in, const std::string& source) {
    BacktestReport report;
    bool have_acc = false, have_bh = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = detail::split_tabs(line);
        try {
            if (f[0] == "symbol" && f.size() == 2) {
                report.symbol = f[1];
            } else if (f[0] == "cycle") {
                continue;
            } else if (f[0] == "Accumulated Return" && f.size() == 2) {
                report.accumulated_return = detail::parse_percent(f[1]);
                have_acc = true;
            } else if (f[0] == "Buy&Hold Return" && f.size() == 2) {
                report.buy_hold_return = detail::parse_percent(f[1]);
                have_bh = true;
            } else if (f.size() == 4) {
                const auto [bp, bd] = detail::parse_leg(f[1], "buy");
                const auto [sp, sd] = detail::parse_leg(f[2], "sell");
                std::string_view ret = detail::trim(f[3]);
                if (ret.substr(0, 7) != "return:") throw std::invalid_argument("expected 'return: x%'");
                TradeCycle c = make_cycle(bp, bd, sp, sd);
                c.cycle_return = detail::parse_percent(ret.substr(7));
                report.cycles.push_back(c);
            } else {
                throw std::invalid_argument("unrecognized row");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    if (!have_acc || !have_bh) throw ParseError(source, lineno, "report lacks Accumulated Return or Buy&Hold Return row");
    return report;
}

inline BacktestReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report '" + path + "'");
    return parse_report(in, path);
}

inline std::string format_optional(const std::optional<double>& v) {
    if (!v) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

// Plot data: one row per bar.
inline std::string emit_trace(std::span<const TraceRow> trace, std::span<const std::string> comments = {}) {
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "date\tclose\tmood\tmood_ma\tposition\n";
    for (const auto& row : trace) {
        out << format_date(row.date) << '\t' << format_optional(row.close) << '\t' << format_optional(row.mood)
            << '\t' << format_optional(row.mood_ma) << '\t' << (row.position == Position::held ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace gchain
