#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gchain/price_model.hpp"

using namespace gchain;

TEST(LogRatio, Examples) {
    const std::vector<double> flat{5.0, 5.0, 5.0, 5.0};
    EXPECT_EQ(log_ratio(flat), 0.0);
    // ln(2 / 1.25)
    const std::vector<double> jump{1.0, 1.0, 1.0, 2.0};
    EXPECT_NEAR(log_ratio(jump), 0.47000362924573563, 1e-15);
    const std::vector<double> one{7.0};
    EXPECT_EQ(log_ratio(one), 0.0);
}

TEST(LogRatio, SignFollowsLastPriceAgainstMean) {
    const std::vector<double> below{10.0, 11.0, 12.0, 9.0};
    const std::vector<double> above{10.0, 9.0, 8.0, 11.0};
    EXPECT_LT(log_ratio(below), 0.0);
    EXPECT_GT(log_ratio(above), 0.0);
}

TEST(LogRatio, Errors) {
    EXPECT_THROW(log_ratio(std::vector<double>{}), std::domain_error);
    EXPECT_THROW(log_ratio(std::vector<double>{1.0, 0.0, 2.0}), std::domain_error);
}

TEST(ExcessDemands, Examples) {
    auto a = excess_demands(-0.1);
    EXPECT_EQ(a.buyer, 0.1);
    EXPECT_EQ(a.seller, 0.0);
    auto b = excess_demands(0.05);
    EXPECT_EQ(b.buyer, 0.0);
    EXPECT_EQ(b.seller, 0.05);
    auto c = excess_demands(0.0);
    EXPECT_EQ(c.buyer, 0.0);
    EXPECT_EQ(c.seller, 0.0);
}

TEST(ExcessDemands, AtMostOneNonzeroAndNonNegative) {
    for (double x = -1.0; x <= 1.0; x += 0.013) {
        const auto ed = excess_demands(x);
        EXPECT_GE(ed.buyer, 0.0);
        EXPECT_GE(ed.seller, 0.0);
        EXPECT_EQ(ed.buyer * ed.seller, 0.0);
        EXPECT_DOUBLE_EQ(ed.buyer + ed.seller, std::abs(x));
    }
}

namespace {

StrengthPath constant_path(std::size_t T, double a1, double a2) {
    return StrengthPath{std::vector<double>(T, a1), std::vector<double>(T, a2)};
}

}  // namespace

TEST(SimulatePrices, ZeroStrengthMeansPureNoise) {
    ModelConfig cfg;
    const auto sim = simulate_prices(cfg, constant_path(300, 0.0, 0.0), 3);
    for (std::size_t t = cfg.n; t < sim.bars.size(); ++t) {
        EXPECT_EQ(sim.bars[t].signal, 0.0);
        EXPECT_EQ(sim.bars[t].r, sim.bars[t].noise);
    }
    EXPECT_EQ(sim.snr, 0.0);
}

TEST(SimulatePrices, WarmupHeldAtInitialPrice) {
    ModelConfig cfg;
    cfg.n = 15;
    cfg.p0 = 42.0;
    const auto sim = simulate_prices(cfg, constant_path(100, 1.6, -0.3), 1);
    ASSERT_EQ(sim.bars.size(), 100u);
    for (std::size_t t = 0; t < cfg.n; ++t) {
        EXPECT_EQ(sim.bars[t].price, 42.0);
        EXPECT_FALSE(sim.bars[t].x_prev.has_value());
    }
    EXPECT_TRUE(sim.bars[cfg.n].x_prev.has_value());
    EXPECT_EQ(*sim.bars[cfg.n].x_prev, 0.0);  // flat warmup window
}

TEST(SimulatePrices, DeterministicAndSeedSensitive) {
    ModelConfig cfg;
    const auto path = constant_path(400, 1.6, -0.3);
    EXPECT_EQ(simulate_prices(cfg, path, 9).prices(), simulate_prices(cfg, path, 9).prices());
    EXPECT_NE(simulate_prices(cfg, path, 9).prices(), simulate_prices(cfg, path, 10).prices());
}

TEST(SimulatePrices, PricesPositiveAndRecomputable) {
    ModelConfig cfg;
    cfg.q = 3;
    cfg.sigma = 0.05;
    const auto sim = simulate_prices(cfg, constant_path(1000, 0.3, -1.6), 21);
    const auto p = sim.prices();
    for (std::size_t t = 0; t < p.size(); ++t) {
        ASSERT_GT(p[t], 0.0);
        if (t < cfg.n) continue;
        const auto& bar = sim.bars[t];
        const double x = log_ratio(std::span<const double>(p).subspan(t - cfg.n, cfg.n));
        EXPECT_NEAR(*bar.x_prev, x, 1e-12);
        const auto ed = excess_demands(x);
        EXPECT_NEAR(bar.ed1, ed.buyer, 1e-12);
        EXPECT_NEAR(bar.ed2, ed.seller, 1e-12);
        EXPECT_NEAR(std::log(p[t] / p[t - 1]), bar.r, 1e-12);
        EXPECT_NEAR(bar.r, 0.3 * bar.ed1 - 1.6 * bar.ed2 + bar.noise, 1e-15);
    }
}

TEST(SimulatePrices, RejectsBadConfig) {
    ModelConfig cfg;
    cfg.sigma = 0.0;
    EXPECT_THROW(simulate_prices(cfg, constant_path(50, 0, 0), 1), std::domain_error);
    cfg = {};
    cfg.n = 0;
    EXPECT_THROW(simulate_prices(cfg, constant_path(50, 0, 0), 1), std::domain_error);
    StrengthPath bad{{1.0, 1.0}, {1.0}};
    EXPECT_THROW(simulate_prices(ModelConfig{}, bad, 1), std::invalid_argument);
}

TEST(Snr, Examples) {
    const std::vector<double> a{1.0, -2.0, 3.0};
    EXPECT_DOUBLE_EQ(snr(a, a), 1.0);
    std::vector<double> twice = a;
    for (auto& v : twice) v *= 2.0;
    EXPECT_DOUBLE_EQ(snr(twice, a), 2.0);
    EXPECT_DOUBLE_EQ(snr(a, twice), 0.5);
    EXPECT_THROW(snr(a, std::vector<double>(3, 0.0)), std::domain_error);
    EXPECT_THROW(snr(a, std::vector<double>(2, 1.0)), std::invalid_argument);
}

TEST(Segments, ExpandPiecewiseConstant) {
    const std::vector<StrengthSegment> segs{{0, 1.6, -0.3}, {3, 0.3, -1.6}};
    const auto path = expand_segments(segs, 5);
    EXPECT_EQ(path.a1, (std::vector<double>{1.6, 1.6, 1.6, 0.3, 0.3}));
    EXPECT_EQ(path.a2, (std::vector<double>{-0.3, -0.3, -0.3, -1.6, -1.6}));
}

TEST(Segments, Errors) {
    const std::vector<StrengthSegment> late{{1, 0, 0}};
    EXPECT_THROW(expand_segments(late, 5), std::invalid_argument);
    const std::vector<StrengthSegment> unsorted{{0, 0, 0}, {4, 0, 0}, {4, 1, 1}};
    EXPECT_THROW(expand_segments(unsorted, 5), std::invalid_argument);
}

TEST(Segments, Parse) {
    std::istringstream in("# t a1 a2\n0 1.6 -0.3\n\n270\t0.3\t-1.6\n");
    const auto segs = parse_segments(in, "path");
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_EQ(segs[1].t_start, 270u);
    EXPECT_EQ(segs[1].a2, -1.6);

    std::istringstream bad("0 1.6\n");
    try {
        parse_segments(bad, "path");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    std::istringstream extra("0 1 2 3\n");
    EXPECT_THROW(parse_segments(extra, "path"), ParseError);
}
