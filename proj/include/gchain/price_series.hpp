#pragma once

// Daily closing-price series and its CSV ingestion. Input schema:
//
//   date,close
//   2012-04-02,100
//   ...
//
// ISO dates, strictly increasing, closes > 0. Anything else is rejected with the
// offending line number.

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gchain {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Calendar date. Ordering and weekday arithmetic go through std::chrono.
struct Date {
    std::chrono::year_month_day ymd{};

    auto operator<=>(const Date& o) const { return days() <=> o.days(); }
    bool operator==(const Date& o) const { return ymd == o.ymd; }

    std::chrono::sys_days days() const { return std::chrono::sys_days{ymd}; }

    static Date from_days(std::chrono::sys_days d) { return Date{std::chrono::year_month_day{d}}; }

    static Date ymd_of(int y, unsigned m, unsigned d) {
        return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
    }
};

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.ymd.year()),
                  static_cast<unsigned>(d.ymd.month()), static_cast<unsigned>(d.ymd.day()));
    return buf;
}

// Parses YYYY-MM-DD; throws std::invalid_argument on anything else.
inline Date parse_date(std::string_view s) {
    auto field = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        const char* b = s.data() + pos;
        auto [p, ec] = std::from_chars(b, b + len, v);
        if (ec != std::errc{} || p != b + len) throw std::invalid_argument("bad date '" + std::string(s) + "'");
        return v;
    };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw std::invalid_argument("bad date '" + std::string(s) + "' (expected YYYY-MM-DD)");
    const Date d = Date::ymd_of(field(0, 4), static_cast<unsigned>(field(5, 2)), static_cast<unsigned>(field(8, 2)));
    if (!d.ymd.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(s) + "'");
    return d;
}

// Next Monday-to-Friday date after d.
inline Date next_weekday(const Date& d) {
    using namespace std::chrono;
    sys_days n = d.days() + days{1};
    while (weekday{n} == Saturday || weekday{n} == Sunday) n += days{1};
    return Date::from_days(n);
}

struct Bar {
    Date date;
    double close = 0.0;
};

struct PriceSeries {
    std::string symbol;
    std::vector<Bar> bars;

    std::size_t size() const { return bars.size(); }
    bool empty() const { return bars.empty(); }

    std::vector<double> closes() const {
        std::vector<double> out;
        out.reserve(bars.size());
        for (const auto& b : bars) out.push_back(b.close);
        return out;
    }

    // ln(p_t / p_{t-1}) for t >= 1; element 0 is 0.
    std::vector<double> log_returns() const {
        std::vector<double> out(bars.size(), 0.0);
        for (std::size_t t = 1; t < bars.size(); ++t) out[t] = std::log(bars[t].close / bars[t - 1].close);
        return out;
    }
};

inline void validate(const PriceSeries& s) {
    for (std::size_t i = 0; i < s.bars.size(); ++i) {
        if (!(s.bars[i].close > 0.0) || !std::isfinite(s.bars[i].close))
            throw std::domain_error("price series: close at bar " + std::to_string(i) + " is not positive");
        if (i > 0 && !(s.bars[i - 1].date < s.bars[i].date))
            throw std::domain_error("price series: dates not strictly increasing at bar " + std::to_string(i));
    }
}

// Weekday-dated series starting at `start` with the given closes.
inline PriceSeries make_series(std::string symbol, const std::vector<double>& closes, Date start) {
    PriceSeries s{std::move(symbol), {}};
    s.bars.reserve(closes.size());
    Date d = start;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        if (i > 0) d = next_weekday(d);
        s.bars.push_back({d, closes[i]});
    }
    validate(s);
    return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view s) {
    // std::from_chars for double is not available in every libstdc++ we target.
    std::string tmp(s);
    std::size_t pos = 0;
    double v = std::stod(tmp, &pos);
    if (pos != tmp.size()) throw std::invalid_argument("trailing characters in number '" + tmp + "'");
    return v;
}

}  // namespace detail

inline PriceSeries parse_prices(std::istream& in, const std::string& source, std::string symbol = {}) {
    PriceSeries series;
    series.symbol = std::move(symbol);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view view = detail::trim(line);
        if (view.empty() || view.front() == '#') continue;
        if (!header_seen) {
            std::string lower(view);
            for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (lower != "date,close") throw ParseError(source, lineno, "bad header '" + line + "' (expected 'date,close')");
            header_seen = true;
            continue;
        }
        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(source, lineno, "expected exactly two fields 'date,close'");
        Bar bar;
        try {
            bar.date = parse_date(detail::trim(view.substr(0, comma)));
            bar.close = detail::parse_double(detail::trim(view.substr(comma + 1)));
        } catch (const std::exception& e) {
            throw ParseError(source, lineno, e.what());
        }
        if (!(bar.close > 0.0) || !std::isfinite(bar.close))
            throw ParseError(source, lineno, "close must be positive");
        if (!series.bars.empty() && !(series.bars.back().date < bar.date))
            throw ParseError(source, lineno,
                             series.bars.back().date == bar.date ? "duplicate date " + format_date(bar.date)
                                                                 : "date " + format_date(bar.date) + " is not after the previous row");
        series.bars.push_back(bar);
    }
    if (!header_seen) throw ParseError(source, lineno, "missing 'date,close' header");
    return series;
}

// Loads a price CSV. The symbol defaults to the file name without extension.
inline PriceSeries load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open price file '" + path + "'");
    std::string symbol = path;
    if (auto slash = symbol.find_last_of('/'); slash != std::string::npos) symbol = symbol.substr(slash + 1);
    if (auto dot = symbol.find_last_of('.'); dot != std::string::npos) symbol = symbol.substr(0, dot);
    return parse_prices(in, path, symbol);
}

}  // namespace gchain
