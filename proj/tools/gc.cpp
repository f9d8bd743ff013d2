// gc: command-line front end for the Gaussian-Chain library.
//
//   gc tail-table  --orders 1..20 --x 1..9 --samples 7500000 --seed S
//   gc sample      --q Q --m M --sigma S --n N --seed S
//   gc density     --q Q --grid lo:hi:step [--samples N] --seed S
//   gc track-sim   --filter gc2|gc3|rls --q 5 --sigma 40 --T 1000 --lambda L --seed S
//   gc price-sim   --q 2 --sigma 0.01 --n N --T T --path segments.tsv --seed S
//   gc backtest    --prices file.csv --filter gc2|gc3 --lambda L --n N
//   gc portfolio   --reports r1.tsv ... rk.tsv
//
// All tabular output is TSV with '#' comment lines recording the resolved
// configuration. The seed falls back to $GC_SEED, then to kDefaultSeed.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gchain/gchain.hpp"

namespace {

using namespace gchain;

constexpr std::uint64_t kDefaultSeed = 20140331;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g10(double v) { return fmt("%.10g", v); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("GC_SEED"); env && *env) {
        std::size_t pos = 0;
        const std::string s(env);
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("GC_SEED is not an unsigned integer: '" + s + "'");
        return v;
    }
    return kDefaultSeed;
}

// "1..20", "1,2,5" or a mix such as "1..3,10".
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty item in list '" + text + "'");
        if (auto dots = item.find(".."); dots != std::string::npos) {
            const int lo = std::stoi(item.substr(0, dots));
            const int hi = std::stoi(item.substr(dots + 2));
            if (hi < lo) throw std::invalid_argument("descending range '" + item + "'");
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            std::size_t pos = 0;
            out.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("bad integer '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    if (text.find("..") != std::string::npos) {
        std::vector<double> out;
        for (int v : parse_int_list(text)) out.push_back(v);
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
    return out;
}

// lo:hi:step, inclusive of hi up to rounding.
std::vector<double> parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw std::invalid_argument("grid must be lo:hi:step, got '" + text + "'");
    const double lo = std::stod(text.substr(0, a));
    const double hi = std::stod(text.substr(a + 1, b - a - 1));
    const double step = std::stod(text.substr(b + 1));
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("grid needs step > 0 and hi >= lo");
    std::vector<double> xs;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) xs.push_back(lo + static_cast<double>(i) * step);
    return xs;
}

void write_file_or_stdout(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path);
    if (!out) throw std::runtime_error("cannot write '" + *path + "'");
    out << text;
}

// ---------------------------------------------------------------------------

struct TailTableArgs {
    std::string orders = "1..20";
    std::string x = "1..9";
    std::size_t samples = 7'500'000;
    std::optional<std::uint64_t> seed;
};

void run_tail_table(const TailTableArgs& a) {
    const auto orders = parse_int_list(a.orders);
    const auto xs = parse_real_list(a.x);
    const std::uint64_t seed = resolve_seed(a.seed);
    const TailTable table = tail_table(orders, xs, a.samples, seed);

    std::ostringstream out;
    out << "# gc tail-table orders=" << a.orders << " x=" << a.x << " samples=" << a.samples << " seed=" << seed
        << '\n';
    out << "# values in percent: 1-2F(1) for x=1, 2F(x) otherwise\n";
    out << "q";
    for (double x : xs) out << '\t' << (x == 1.0 ? std::string("1-2F(1)") : "x=" + g10(x));
    out << '\n';
    for (std::size_t i = 0; i < orders.size(); ++i) {
        out << orders[i];
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double v = xs[k] == 1.0 ? table.central_mass[i] : table.cells[i][k];
            out << '\t' << fmt("%.4f", v);
        }
        out << '\n';
    }
    std::cout << out.str();
}

struct SampleArgs {
    int q = 1;
    double m = 0.0;
    double sigma = 1.0;
    std::size_t n = 1000;
    std::optional<std::uint64_t> seed;
};

void run_sample(const SampleArgs& a) {
    const std::uint64_t seed = resolve_seed(a.seed);
    const auto xs = sample_n(GcParams{a.q, a.m, a.sigma}, a.n, seed);
    std::ostringstream out;
    out << "# gc sample q=" << a.q << " m=" << g10(a.m) << " sigma=" << g10(a.sigma) << " n=" << a.n
        << " seed=" << seed << '\n';
    for (double x : xs) out << fmt("%.17g", x) << '\n';
    std::cout << out.str();
}

struct DensityArgs {
    int q = 1;
    double m = 0.0;
    double sigma = 1.0;
    std::string grid = "0.1:10:0.1";
    std::size_t samples = 1'000'000;
    std::optional<std::uint64_t> seed;
};

void run_density(const DensityArgs& a) {
    const std::uint64_t seed = resolve_seed(a.seed);
    const auto xs = parse_grid(a.grid);
    const auto f = density_mc(GcParams{a.q, a.m, a.sigma}, xs, a.samples, seed);
    std::ostringstream out;
    out << "# gc density q=" << a.q << " m=" << g10(a.m) << " sigma=" << g10(a.sigma) << " grid=" << a.grid
        << " samples=" << a.samples << " seed=" << seed << '\n';
    out << "x\tf\n";
    for (std::size_t i = 0; i < xs.size(); ++i) out << g10(xs[i]) << '\t' << g10(f[i]) << '\n';
    std::cout << out.str();
}

struct TrackArgs {
    std::string filter = "gc2";
    int q = 5;
    double sigma = 40.0;
    std::size_t T = 1000;
    double lambda = 0.8;
    std::optional<std::uint64_t> seed;
};

void run_track_sim(const TrackArgs& a) {
    const std::uint64_t seed = resolve_seed(a.seed);
    TrackingConfig cfg;
    cfg.kind = parse_filter_kind(a.filter);
    cfg.q = a.q;
    cfg.sigma = a.sigma;
    cfg.T = a.T;
    cfg.lambda = a.lambda;
    const TrackingResult res = run_tracking(cfg, seed);
    std::ostringstream out;
    out << "# gc track-sim filter=" << a.filter << " q=" << a.q << " sigma=" << g10(a.sigma) << " T=" << a.T
        << " lambda=" << g10(a.lambda) << " seed=" << seed << '\n';
    out << "t\tr\ta_true\ta_hat\n";
    for (const auto& row : res.rows)
        out << row.t << '\t' << g10(row.r) << '\t' << g10(row.a_true) << '\t' << g10(row.a_hat) << '\n';
    out << "# rmse=" << g10(res.rmse) << " max_jump=" << g10(res.max_jump) << '\n';
    std::cout << out.str();
}

struct PriceSimArgs {
    int q = 2;
    double sigma = 0.01;
    std::size_t n = 20;
    std::size_t T = 1000;
    double p0 = 100.0;
    std::string path;
    std::optional<std::uint64_t> seed;
};

void run_price_sim(const PriceSimArgs& a) {
    const std::uint64_t seed = resolve_seed(a.seed);
    std::ifstream in(a.path);
    if (!in) throw std::runtime_error("cannot open path file '" + a.path + "'");
    const auto segments = parse_segments(in, a.path);
    const StrengthPath path = expand_segments(segments, a.T);
    ModelConfig cfg;
    cfg.n = a.n;
    cfg.sigma = a.sigma;
    cfg.q = a.q;
    cfg.p0 = a.p0;
    const SimulatedPrices sim = simulate_prices(cfg, path, seed);

    std::ostringstream out;
    out << "# gc price-sim q=" << a.q << " sigma=" << g10(a.sigma) << " n=" << a.n << " T=" << a.T
        << " p0=" << g10(a.p0) << " path=" << a.path << " seed=" << seed << '\n';
    out << "t\tp\tx_prev\ted1\ted2\tr\n";
    for (std::size_t t = 0; t < sim.bars.size(); ++t) {
        const auto& b = sim.bars[t];
        out << t << '\t' << g10(b.price) << '\t' << format_optional(b.x_prev) << '\t' << g10(b.ed1) << '\t'
            << g10(b.ed2) << '\t' << g10(b.r) << '\n';
    }
    out << "# snr=" << g10(sim.snr) << '\n';
    std::cout << out.str();
}

struct BacktestArgs {
    std::string prices;
    std::string filter = "gc2";
    double lambda = 0.95;
    std::size_t n = 20;
    std::optional<std::string> report_path;
    std::optional<std::string> trace_path;
};

void run_backtest_cmd(const BacktestArgs& a) {
    const PriceSeries series = load_prices(a.prices);
    BacktestConfig cfg;
    cfg.kind = parse_filter_kind(a.filter);
    cfg.lambda = a.lambda;
    cfg.n = a.n;
    const BacktestResult res = run_backtest(cfg, series);

    const std::vector<std::string> comments{"gc backtest prices=" + a.prices + " filter=" + a.filter +
                                            " lambda=" + g10(a.lambda) + " n=" + std::to_string(a.n)};
    const std::string report = emit_report(res.report, comments);
    const std::string trace = emit_trace(res.trace, comments);
    if (!a.report_path && !a.trace_path) {
        std::cout << report << '\n' << trace;
        return;
    }
    write_file_or_stdout(a.report_path, report);
    if (a.trace_path) write_file_or_stdout(a.trace_path, trace);
}

void run_portfolio(const std::vector<std::string>& paths) {
    std::vector<double> acc, bh;
    std::ostringstream out;
    out << "# gc portfolio reports=" << paths.size() << '\n';
    out << "symbol\taccumulated\tbuy_hold\n";
    for (const auto& p : paths) {
        const BacktestReport r = load_report(p);
        acc.push_back(r.accumulated_return);
        bh.push_back(r.buy_hold_return);
        out << r.symbol << '\t' << format_percent(r.accumulated_return) << '\t' << format_percent(r.buy_hold_return)
            << '\n';
    }
    out << "portfolio\t" << format_percent(portfolio_return(acc)) << '\t' << format_percent(portfolio_return(bh))
        << '\n';
    std::cout << out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-Chain distribution, filters and RideMood backtests"};
    app.require_subcommand(1);

    TailTableArgs tt;
    auto* c_tail = app.add_subcommand("tail-table", "Monte-Carlo table of two-sided tail probabilities 2F(x), percent");
    c_tail->add_option("--orders", tt.orders, "Chain orders, e.g. 1..20 or 1,2,5")->capture_default_str();
    c_tail->add_option("--x", tt.x, "Thresholds in standard deviations, e.g. 1..9")->capture_default_str();
    c_tail->add_option("--samples", tt.samples, "Samples per order")->capture_default_str()->check(CLI::PositiveNumber);
    c_tail->add_option("--seed", tt.seed, "Random seed");

    SampleArgs sa;
    auto* c_sample = app.add_subcommand("sample", "Draw Gaussian-Chain samples, one per line");
    c_sample->add_option("--q", sa.q, "Chain order")->capture_default_str();
    c_sample->add_option("--m", sa.m, "Location")->capture_default_str();
    c_sample->add_option("--sigma", sa.sigma, "Scale")->capture_default_str();
    c_sample->add_option("--n", sa.n, "Number of samples")->capture_default_str();
    c_sample->add_option("--seed", sa.seed, "Random seed");

    DensityArgs da;
    auto* c_density = app.add_subcommand("density", "Monte-Carlo density estimate on a grid");
    c_density->add_option("--q", da.q, "Chain order")->capture_default_str();
    c_density->add_option("--m", da.m, "Location")->capture_default_str();
    c_density->add_option("--sigma", da.sigma, "Scale")->capture_default_str();
    c_density->add_option("--grid", da.grid, "lo:hi:step")->capture_default_str();
    c_density->add_option("--samples", da.samples, "Chain draws")->capture_default_str()->check(CLI::PositiveNumber);
    c_density->add_option("--seed", da.seed, "Random seed");

    TrackArgs ta;
    auto* c_track = app.add_subcommand("track-sim", "Track a(t) = 20(1 + sin(8 pi t/1000)) under chain noise");
    c_track->add_option("--filter", ta.filter, "gc2, gc3 or rls")->capture_default_str();
    c_track->add_option("--q", ta.q, "Noise chain order")->capture_default_str();
    c_track->add_option("--sigma", ta.sigma, "Noise scale")->capture_default_str();
    c_track->add_option("--T", ta.T, "Steps")->capture_default_str();
    c_track->add_option("--lambda", ta.lambda, "Forgetting factor")->capture_default_str();
    c_track->add_option("--seed", ta.seed, "Random seed");

    PriceSimArgs pa;
    auto* c_price = app.add_subcommand("price-sim", "Simulate the big-buyer/big-seller price model");
    c_price->add_option("--q", pa.q, "Noise chain order")->capture_default_str();
    c_price->add_option("--sigma", pa.sigma, "Noise scale")->capture_default_str();
    c_price->add_option("--n", pa.n, "Moving-average window")->capture_default_str();
    c_price->add_option("--T", pa.T, "Bars")->capture_default_str();
    c_price->add_option("--p0", pa.p0, "Initial price")->capture_default_str();
    c_price->add_option("--path", pa.path, "Strength segments file: t_start a1 a2 per line")->required();
    c_price->add_option("--seed", pa.seed, "Random seed");

    BacktestArgs ba;
    auto* c_bt = app.add_subcommand("backtest", "RideMood backtest on a date,close CSV");
    c_bt->add_option("--prices", ba.prices, "Price CSV")->required();
    c_bt->add_option("--filter", ba.filter, "gc2 or gc3")->capture_default_str();
    c_bt->add_option("--lambda", ba.lambda, "Forgetting factor")->capture_default_str();
    c_bt->add_option("--n", ba.n, "Moving-average window")->capture_default_str();
    c_bt->add_option("--report", ba.report_path, "Write the cycle report here instead of stdout");
    c_bt->add_option("--trace", ba.trace_path, "Write per-bar plot data here");

    std::vector<std::string> reports;
    auto* c_pf = app.add_subcommand("portfolio", "Equally weighted aggregate of backtest reports");
    c_pf->add_option("--reports", reports, "Report files written by 'gc backtest --report'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (c_tail->parsed()) run_tail_table(tt);
        else if (c_sample->parsed()) run_sample(sa);
        else if (c_density->parsed()) run_density(da);
        else if (c_track->parsed()) run_track_sim(ta);
        else if (c_price->parsed()) run_price_sim(pa);
        else if (c_bt->parsed()) run_backtest_cmd(ba);
        else if (c_pf->parsed()) run_portfolio(reports);
    } catch (const std::exception& e) {
        std::cerr << "gc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
