#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gchain/backtest.hpp"
#include "gchain/report.hpp"

using namespace gchain;

#ifndef GCHAIN_DATA_DIR
#error "GCHAIN_DATA_DIR must be defined"
#endif

namespace {

const std::string kData = GCHAIN_DATA_DIR;

std::size_t parse_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_prices(in, "t.csv");
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(LoadPrices, TwoRows) {
    std::istringstream in("date,close\n2013-01-02,10.5\n2013-01-03,11\n");
    const auto s = parse_prices(in, "t.csv", "X");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(format_date(s.bars[0].date), "2013-01-02");
    EXPECT_EQ(s.bars[1].close, 11.0);
    EXPECT_EQ(s.symbol, "X");
}

TEST(LoadPrices, CommentsBlankLinesAndCaseInsensitiveHeader) {
    std::istringstream in("# source: test\nDate,Close\r\n\n2013-01-02, 10.5\n");
    EXPECT_EQ(parse_prices(in, "t.csv").size(), 1u);
}

TEST(LoadPrices, ErrorsNameTheLine) {
    EXPECT_EQ(parse_error_line("date,close\n2013-01-02,10\n2013-01-03,-1\n"), 3u);
    EXPECT_EQ(parse_error_line("date,close\n2013-01-02,abc\n"), 2u);
    EXPECT_EQ(parse_error_line("date,close\n2013-01-02,1\n2013-01-02,2\n"), 3u);
    EXPECT_EQ(parse_error_line("date,close\n2013-01-03,1\n2013-01-02,2\n"), 3u);
    EXPECT_EQ(parse_error_line("date,price\n2013-01-02,1\n"), 1u);
    EXPECT_EQ(parse_error_line("date,close\n2013-13-02,1\n"), 2u);
    EXPECT_EQ(parse_error_line("date,close\n2013-01-02,1,2\n"), 2u);
    std::istringstream empty("");
    EXPECT_THROW(parse_prices(empty, "t.csv"), ParseError);
}

TEST(LoadPrices, MissingFile) {
    EXPECT_THROW(load_prices("/nonexistent/prices.csv"), std::runtime_error);
}

TEST(LoadPrices, Fixture) {
    const auto s = load_prices(kData + "/hk0005_synthetic.csv");
    EXPECT_EQ(s.symbol, "hk0005_synthetic");
    ASSERT_EQ(s.size(), 521u);
    EXPECT_EQ(format_date(s.bars.front().date), "2012-04-02");
    EXPECT_EQ(format_date(s.bars.back().date), "2014-03-31");
    EXPECT_EQ(format_percent(buy_hold(s)), "15.40%");
}

TEST(Dates, ParseFormatAndWeekdays) {
    EXPECT_EQ(format_date(parse_date("2012-02-29")), "2012-02-29");
    EXPECT_THROW(parse_date("2013-02-29"), std::invalid_argument);
    EXPECT_THROW(parse_date("2013-2-01"), std::invalid_argument);
    EXPECT_EQ(format_date(next_weekday(parse_date("2013-01-04"))), "2013-01-07");
}

TEST(Backtest, ConstantSeriesNeverTrades) {
    const auto s = make_series("FLAT", std::vector<double>(100, 50.0), Date::ymd_of(2013, 1, 7));
    for (auto kind : {FilterKind::gc2, FilterKind::gc3, FilterKind::rls}) {
        BacktestConfig cfg;
        cfg.kind = kind;
        const auto r = run_backtest(cfg, s);
        EXPECT_TRUE(r.report.cycles.empty());
        EXPECT_EQ(r.report.buy_hold_return, 0.0);
        EXPECT_EQ(r.report.accumulated_return, 0.0);
    }
}

TEST(Backtest, TraceAlignment) {
    const auto s = load_prices(kData + "/hk0005_synthetic.csv");
    BacktestConfig cfg;
    const auto r = run_backtest(cfg, s);
    ASSERT_EQ(r.trace.size(), s.size());
    for (std::size_t t = 0; t < cfg.n; ++t) EXPECT_FALSE(r.trace[t].mood);
    EXPECT_TRUE(r.trace[cfg.n].mood);
    EXPECT_FALSE(r.trace[cfg.n + 3].mood_ma);
    EXPECT_TRUE(r.trace[cfg.n + 4].mood_ma);
    EXPECT_EQ(r.trace.back().position, Position::flat);
    double sum = 0.0;
    for (const auto& c : r.report.cycles) sum += c.cycle_return;
    EXPECT_DOUBLE_EQ(r.report.accumulated_return, sum);
}

TEST(Backtest, BuyerRegimeTriggersBuy) {
    // Flat, then a steady decline (price below its average), then a sustained
    // recovery: buyers dominate, so the mood turns positive and a buy follows.
    std::vector<double> closes(30, 100.0);
    for (int i = 0; i < 30; ++i) closes.push_back(closes.back() * (i % 2 ? 0.985 : 0.995));
    for (int i = 0; i < 40; ++i) closes.push_back(closes.back() * (i % 3 ? 1.01 : 0.999));
    const auto s = make_series("UPDOWN", closes, Date::ymd_of(2013, 1, 7));
    const auto r = run_backtest(BacktestConfig{}, s);
    ASSERT_FALSE(r.report.cycles.empty());
    EXPECT_GE(r.report.cycles.front().buy_index, 30u);
}

TEST(Backtest, DeterministicAndValidated) {
    const auto s = load_prices(kData + "/hk0005_synthetic.csv");
    BacktestConfig cfg;
    cfg.kind = FilterKind::gc3;
    EXPECT_EQ(emit_report(run_backtest(cfg, s).report), emit_report(run_backtest(cfg, s).report));
    const auto tiny = make_series("T", std::vector<double>(21, 1.0), Date::ymd_of(2013, 1, 7));
    EXPECT_THROW(run_backtest(BacktestConfig{}, tiny), std::domain_error);
    cfg.lambda = 1.5;
    EXPECT_THROW(run_backtest(cfg, s), std::domain_error);
}

TEST(Report, SingleCycleLayout) {
    BacktestReport rep;
    rep.symbol = "HK1398";
    rep.cycles.push_back(make_cycle(4.00, Date::ymd_of(2012, 9, 18), 4.07, Date::ymd_of(2012, 9, 27)));
    rep.accumulated_return = rep.cycles[0].cycle_return;
    rep.buy_hold_return = 0.044;
    const std::vector<std::string> comments{"filter=gc2"};
    EXPECT_EQ(emit_report(rep, comments),
              "# filter=gc2\n"
              "symbol\tHK1398\n"
              "cycle\tbuy\tsell\treturn\n"
              "1\tbuy: 4.00; 2012-09-18\tsell: 4.07; 2012-09-27\treturn: 1.75%\n"
              "Accumulated Return\t1.75%\n"
              "Buy&Hold Return\t4.40%\n");
}

TEST(Report, EmptyReportShowsZero) {
    BacktestReport rep;
    rep.symbol = "X";
    const auto text = emit_report(rep);
    EXPECT_NE(text.find("Accumulated Return\t0.00%"), std::string::npos);
}

TEST(Report, RoundTrip) {
    const auto s = load_prices(kData + "/hk0005_synthetic.csv");
    const auto rep = run_backtest(BacktestConfig{}, s).report;
    std::istringstream in(emit_report(rep));
    const auto back = parse_report(in, "r.tsv");
    EXPECT_EQ(back.symbol, rep.symbol);
    ASSERT_EQ(back.cycles.size(), rep.cycles.size());
    for (std::size_t i = 0; i < rep.cycles.size(); ++i) {
        EXPECT_EQ(back.cycles[i].buy_date, rep.cycles[i].buy_date);
        EXPECT_NEAR(back.cycles[i].cycle_return, rep.cycles[i].cycle_return, 0.00005 + 1e-12);
    }
    EXPECT_NEAR(back.accumulated_return, rep.accumulated_return, 0.00005 + 1e-12);
    EXPECT_EQ(emit_report(back), emit_report(rep));
}

TEST(Report, FixtureParsesToPrintedTotals) {
    const auto rep = load_report(kData + "/hk0005_gc2_cycles.tsv");
    EXPECT_EQ(rep.cycles.size(), 12u);
    EXPECT_NEAR(100.0 * accumulate(rep.cycles), 23.47, 1e-9);
    EXPECT_EQ(format_percent(rep.accumulated_return), "23.50%");
    EXPECT_EQ(format_percent(rep.buy_hold_return), "15.40%");
}

TEST(Report, MalformedRowNamesLine) {
    std::istringstream in("symbol\tX\ncycle\tbuy\tsell\treturn\n1\tbuy: x; 2013-01-01\tsell: 1; 2013-01-02\treturn: 1%\n");
    try {
        parse_report(in, "r.tsv");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}
