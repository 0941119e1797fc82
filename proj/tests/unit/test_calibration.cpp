#include "wwr/calibration.hpp"
#include "wwr/errors.hpp"
#include "wwr/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace wwr;

namespace {

MarketSnapshot make_snapshot(const Date& d, double rate, double cds, double fund) {
    std::vector<ZeroCurve::Pillar> zero;
    for (double t : {1.0, 5.0, 10.0, 30.0}) zero.push_back({t, rate});
    CdsCurve cpty;
    cpty.recovery = 0.4;
    cpty.pillars = {{1.0, cds}, {5.0, cds}, {10.0, cds}};
    FundingCurve f;
    f.recovery = 0.4;
    f.pillars = {{1.0, fund}, {10.0, fund}};
    std::vector<double> exp{0.25, 1.0, 5.0, 10.0, 30.0};
    std::vector<double> ten{1.0, 5.0, 10.0, 30.0};
    std::vector<double> vols(exp.size() * ten.size(), 0.006);
    return MarketSnapshot{d,
                          ZeroCurve(std::move(zero)),
                          std::move(cpty),
                          std::move(f),
                          NormalVolSurface(std::move(exp), std::move(ten), std::move(vols)),
                          {{0.5, d, rate}},
                          0.6};
}

HistoryStore constant_history(std::size_t n) {
    std::vector<MarketSnapshot> snaps;
    Date d(2019, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        snaps.push_back(make_snapshot(d, 0.02, 0.02, 0.01));
        d = d.next_business_day();
    }
    return HistoryStore(std::move(snaps));
}

Portfolio one_trade_portfolio(double maturity = 10.0, double k = 0.02,
                              Direction dir = Direction::ReceiveFixed) {
    IrsTrade t;
    t.id = "t1";
    t.direction = dir;
    t.notional = 1.0e6;
    t.fixed_rate = k;
    t.start = 0.0;
    t.maturity = maturity;
    t.fixed_freq = 1;
    t.float_freq = 2;
    Portfolio p;
    p.trades = {t};
    return p;
}

} // namespace

TEST_CASE("build_panel: constant history gives constant series") {
    const HistoryStore h = constant_history(5);
    const auto grid = uniform_grid(10.0, 0.5);
    const ProfilePanel panel = build_panel(one_trade_portfolio(), h, h.back().fixings, grid, 0.5);
    REQUIRE(panel.dates.size() == 5);
    for (const char* name : {"default_rate", "survival", "fund_df", "fund_carry", "ee", "ene"}) {
        const SeriesMatrix& s = panel.series(name);
        for (std::size_t j = 0; j < s.n_buckets(); ++j)
            for (std::size_t d = 1; d < s.n_dates(); ++d)
                CHECK(s.at(d, j) == s.at(0, j));
    }
}

TEST_CASE("build_panel: two-date history yields two rows; fewer errors out") {
    const HistoryStore h = constant_history(2);
    const auto grid = uniform_grid(5.0, 0.25);
    const ProfilePanel panel = build_panel(one_trade_portfolio(5.0), h, {}, grid, 0.25);
    CHECK(panel.series("ee").n_dates() == 2);
    const HistoryStore h1 = constant_history(1);
    CHECK_THROWS_AS(build_panel(one_trade_portfolio(5.0), h1, {}, grid, 0.25), DataError);
}

TEST_CASE("build_panel: asof row matches a standalone exposure profile bit for bit") {
    std::vector<MarketSnapshot> snaps;
    Date d(2021, 3, 1);
    double rate = 0.015;
    for (int i = 0; i < 4; ++i) {
        snaps.push_back(make_snapshot(d, rate, 0.025, 0.012));
        d = d.next_business_day();
        rate += 0.001;
    }
    const HistoryStore h{std::move(snaps)};
    const Portfolio p = one_trade_portfolio();
    const auto grid = uniform_grid(10.0, 0.25);
    const ProfilePanel panel = build_panel(p, h, h.back().fixings, grid, 0.25);

    MarketSnapshot asof = h.back();
    const ExposureProfile prof = exposure_profile(p, asof, grid);
    const std::size_t last = panel.dates.size() - 1;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(panel.series("ee").at(last, j) == prof.ee[j]);
        CHECK(panel.series("ene").at(last, j) == prof.ene[j]);
        CHECK(panel.series("m2_pos_sq").at(last, j) == prof.m2_pos_sq[j]);
    }
}

TEST_CASE("build_panel: default-probability profiles telescope to 1 - survival(T)") {
    std::vector<MarketSnapshot> snaps;
    Date d(2021, 3, 1);
    for (double cds : {0.01, 0.02, 0.05}) {
        snaps.push_back(make_snapshot(d, 0.02, cds, 0.01));
        d = d.next_business_day();
    }
    const HistoryStore h{std::move(snaps)};
    const double dt = 0.25, maturity = 10.0;
    const auto grid = uniform_grid(maturity, dt);
    const ProfilePanel panel = build_panel(one_trade_portfolio(maturity), h, {}, grid, dt);

    for (std::size_t row = 0; row < panel.dates.size(); ++row) {
        const HazardCurve hz = h.at(row).counterparty_hazard();
        double sum = 0.0;
        for (std::size_t j = 0; j + 1 < grid.size(); ++j)
            sum += panel.series("default_rate").at(row, j) * dt / h.at(row).lgd;
        CHECK(sum == doctest::Approx(1.0 - hz.survival(maturity)).epsilon(1e-14));
    }
}

TEST_CASE("build_panel: skip-bad-dates vs hard error") {
    std::vector<MarketSnapshot> snaps;
    Date d(2021, 3, 1);
    snaps.push_back(make_snapshot(d, 0.02, 0.02, 0.01));
    d = d.next_business_day();
    snaps.push_back(make_snapshot(d, 0.02, 0.02, 0.01));
    d = d.next_business_day();
    // inverted CDS curve that the bootstrap cannot attain
    MarketSnapshot bad = make_snapshot(d, 0.02, 0.02, 0.01);
    bad.counterparty_cds.pillars = {{1.0, 0.06}, {5.0, 0.001}, {10.0, 0.001}};
    snaps.push_back(bad);
    const HistoryStore h{std::move(snaps)};
    const auto grid = uniform_grid(5.0, 0.5);

    CHECK_THROWS_AS(build_panel(one_trade_portfolio(5.0), h, {}, grid, 0.5), CalibrationError);
    PanelOptions opts;
    opts.skip_bad_dates = true;
    const ProfilePanel panel = build_panel(one_trade_portfolio(5.0), h, {}, grid, 0.5, opts);
    CHECK(panel.dates.size() == 2);
}

TEST_CASE("terminal correlation: degenerate and analytic cases") {
    const std::vector<double> grid{0.5, 1.0};
    SeriesMatrix a(4, 2), b(4, 2), neg(4, 2), flat(4, 2);
    for (std::size_t d = 0; d < 4; ++d)
        for (std::size_t j = 0; j < 2; ++j) {
            a.at(d, j) = static_cast<double>(d * (j + 1)) + 1.0;
            b.at(d, j) = a.at(d, j);
            neg.at(d, j) = -a.at(d, j);
            flat.at(d, j) = 7.0;
        }
    const TermStructure self = terminal_correlation(a, b, grid, 0, 3);
    const TermStructure anti = terminal_correlation(a, neg, grid, 0, 3);
    const TermStructure degen = terminal_correlation(a, flat, grid, 0, 3);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(self.values[j] == doctest::Approx(1.0));
        CHECK(anti.values[j] == doctest::Approx(-1.0));
        CHECK(degen.values[j] == 0.0);
    }
    CHECK_THROWS_AS(terminal_correlation(a, b, grid, 0, 0), DataError);
}

TEST_CASE("terminal correlation recovers a known bivariate correlation") {
    const double rho = 0.7;
    const std::size_t dates = 1260;
    const std::vector<double> grid{1.0, 2.0, 3.0};
    SeriesMatrix a(dates, 3), b(dates, 3);
    Rng rng(1912);
    const double c = std::sqrt(1.0 - rho * rho);
    for (std::size_t d = 0; d < dates; ++d)
        for (std::size_t j = 0; j < 3; ++j) {
            const double z1 = rng.normal(), z2 = rng.normal();
            a.at(d, j) = z1;
            b.at(d, j) = rho * z1 + c * z2;
        }
    const TermStructure ts = terminal_correlation(a, b, grid, 0, dates - 1);
    for (double v : ts.values) CHECK(std::fabs(v - rho) < 0.05);
}

TEST_CASE("historical sd: conventions and direct recomputation") {
    const std::vector<double> grid{0.5};
    SeriesMatrix constant(6, 1);
    for (std::size_t d = 0; d < 6; ++d) constant.at(d, 0) = 3.25;
    CHECK(historical_sd(constant, grid, 0, 5).values[0] == 0.0);

    SeriesMatrix two(2, 1);
    two.at(0, 0) = 1.0;
    two.at(1, 0) = 5.0;
    CHECK(historical_sd(two, grid, 0, 1).values[0] == doctest::Approx(2.0)); // |x - y| / 2

    SeriesMatrix rand_m(50, 1);
    Rng rng(9);
    std::vector<double> vals(50);
    for (std::size_t d = 0; d < 50; ++d) {
        vals[d] = rng.normal();
        rand_m.at(d, 0) = vals[d];
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= 50.0;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    CHECK(historical_sd(rand_m, grid, 0, 49).values[0] ==
          doctest::Approx(std::sqrt(ss / 50.0)).epsilon(1e-14));
}

TEST_CASE("crossover tenor analytics") {
    CHECK(crossover_tenor(0.05, 0.05) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(crossover_tenor(0.02, 0.01) == doctest::Approx(std::log(2.0) / 0.01).epsilon(1e-12));
    CHECK(crossover_tenor(0.045, 0.015) == doctest::Approx(std::log(3.0) / 0.03).epsilon(1e-12));
    // symmetric in its arguments
    CHECK(crossover_tenor(0.01, 0.02) == doctest::Approx(crossover_tenor(0.02, 0.01)));
    // continuity through the equal-hazard limit: the first-order deviation is
    // eps/2 * (1/lambda), so small eps must land within 1e-8 of the limit
    for (double eps : {1e-10, 1e-12, 1e-15, 0.0})
        CHECK(std::fabs(crossover_tenor(0.05, 0.05 * (1.0 + eps)) - 20.0) < 1e-8);
    // and no numerical breakdown anywhere on the approach
    for (double eps = 1e-4; eps > 1e-14; eps *= 0.1) {
        const double v = crossover_tenor(0.05, 0.05 * (1.0 + eps));
        CHECK(std::isfinite(v));
        CHECK(std::fabs(v - 20.0) < 20.0 * eps); // within the first-order envelope
    }
    CHECK_THROWS_AS(crossover_tenor(0.0, 0.01), DomainError);
    CHECK_THROWS_AS(crossover_tenor(0.01, -0.02), DomainError);
}

TEST_CASE("calibrate: constant history degenerates to zero correlations and SDs") {
    const HistoryStore h = constant_history(30);
    CalibrationConfig cfg;
    cfg.grid_dt = 0.5;
    cfg.sd_window_years = 0.05; // a few dates
    const CalibrationSet cs = calibrate(one_trade_portfolio(5.0), h, cfg);

    const TradeCorrelations& tc = cs.correlations_for("t1");
    for (double v : tc.rho_reg.values) CHECK(v == 0.0);
    for (double v : tc.c1.values) CHECK(v == 0.0);
    for (double v : tc.f2.values) CHECK(v == 0.0);
    for (double v : cs.sd_default.values) CHECK(v == 0.0);
    for (double v : cs.sd_fund_carry.values) CHECK(v == 0.0);
    CHECK(cs.trades.count(CalibrationSet::net_key) == 1);
    // no crisis window configured: crisis SD falls back to the recent SD
    for (std::size_t i = 0; i < cs.sd_default.size(); ++i)
        CHECK(cs.sd_default_crisis.values[i] == cs.sd_default.values[i]);
}

TEST_CASE("calibrate: estimates are within correlation bounds on a noisy history") {
    std::vector<MarketSnapshot> snaps;
    Date d(2019, 1, 1);
    Rng rng(55);
    double rate = 0.02, cds = 0.02, fund = 0.01;
    for (int i = 0; i < 40; ++i) {
        snaps.push_back(make_snapshot(d, rate, cds, fund));
        d = d.next_business_day();
        rate = std::max(0.001, rate + 0.002 * rng.normal());
        cds = std::max(0.001, cds + 0.001 * rng.normal());
        fund = std::max(0.001, fund + 0.0005 * rng.normal());
    }
    const HistoryStore h{std::move(snaps)};
    CalibrationConfig cfg;
    cfg.grid_dt = 0.5;
    cfg.sd_window_years = 0.06;
    const CalibrationSet cs = calibrate(one_trade_portfolio(10.0), h, cfg);
    for (const auto& [id, tc] : cs.trades) {
        for (const TermStructure* ts : {&tc.rho_reg, &tc.c1, &tc.c2, &tc.c2_1, &tc.f1, &tc.f2, &tc.f2_1})
            for (double v : ts->values) {
                CHECK(std::fabs(v) <= 1.0);
                CHECK(std::isfinite(v));
            }
    }
    for (double v : cs.sd_default.values) CHECK(v >= 0.0);
}

TEST_CASE("calibrate: deterministic across worker counts") {
    const HistoryStore h = constant_history(20);
    CalibrationConfig cfg;
    cfg.grid_dt = 0.5;
    cfg.sd_window_years = 0.05;
    cfg.panel.n_threads = 1;
    const CalibrationSet a = calibrate(one_trade_portfolio(5.0), h, cfg);
    cfg.panel.n_threads = 3;
    const CalibrationSet b = calibrate(one_trade_portfolio(5.0), h, cfg);

    const std::string fa = "/tmp/xvawwr_test_calib_a.json";
    const std::string fb = "/tmp/xvawwr_test_calib_b.json";
    write_calibration_file(fa, a);
    write_calibration_file(fb, b);
    std::ifstream ia(fa), ib(fb);
    std::stringstream sa, sb;
    sa << ia.rdbuf();
    sb << ib.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("calibration set round-trips through its file format") {
    const HistoryStore h = constant_history(20);
    CalibrationConfig cfg;
    cfg.grid_dt = 0.5;
    cfg.sd_window_years = 0.05;
    const CalibrationSet cs = calibrate(one_trade_portfolio(5.0), h, cfg);
    const std::string path = "/tmp/xvawwr_test_calib_rt.json";
    write_calibration_file(path, cs);
    const CalibrationSet back = read_calibration_file(path);
    CHECK(back.asof == cs.asof);
    CHECK(back.grid == cs.grid);
    CHECK(back.sd_default.values == cs.sd_default.values);
    CHECK(back.correlations_for("t1").rho_reg.values == cs.correlations_for("t1").rho_reg.values);
    CHECK(back.corr_dates == cs.corr_dates);
    CHECK_THROWS_AS(back.correlations_for("missing"), DataError);

    SUBCASE("out-of-range correlations are rejected on read") {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string doc = ss.str();
        const std::string needle = "\"rho_reg\": [";
        const auto at = doc.find(needle);
        REQUIRE(at != std::string::npos);
        doc.replace(at, needle.size(), "\"rho_reg\": [7.0,");
        // drop one trailing element to keep the length: replace first ","
        const auto comma = doc.find(',', at + needle.size() + 5);
        doc.erase(comma, doc.find_first_of(",]", comma + 1) - comma);
        std::ofstream out(path);
        out << doc;
        out.close();
        CHECK_THROWS_AS(read_calibration_file(path), DataError);
    }
}

TEST_CASE("calibrate rejects the reserved net trade id") {
    const HistoryStore h = constant_history(10);
    Portfolio p = one_trade_portfolio(5.0);
    p.trades[0].id = CalibrationSet::net_key;
    CalibrationConfig cfg;
    cfg.grid_dt = 0.5;
    cfg.sd_window_years = 0.03;
    CHECK_THROWS_AS(calibrate(p, h, cfg), DataError);
}
