#include "wwr/calibration.hpp"
#include "wwr/errors.hpp"
#include "wwr/moments.hpp"

#include "parallel_for.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace wwr {

using nlohmann::json;

const SeriesMatrix& ProfilePanel::series(const std::string& name) const {
    if (name == "default_rate") return credit_funding.default_rate;
    if (name == "survival") return credit_funding.survival;
    if (name == "fund_df") return credit_funding.fund_df;
    if (name == "fund_carry") return credit_funding.fund_carry;
    if (name == "fund_df_sq") return credit_funding.fund_df_sq;
    if (name == "fund_carry_sq") return credit_funding.fund_carry_sq;
    if (name == "ee") return exposure.ee;
    if (name == "ene") return exposure.ene;
    if (name == "m2_pos_sq") return exposure.m2_pos_sq;
    if (name == "m2_net_sq") return exposure.m2_net_sq;
    throw DataError("ProfilePanel: unknown series '" + name + "'");
}

namespace {

// Per-date credit and funding profile row from one snapshot.
void fill_credit_funding_row(CreditFundingSeries& out, std::size_t row, const MarketSnapshot& snap,
                             const std::vector<double>& grid, double dt) {
    const HazardCurve hz = snap.counterparty_hazard();
    const SpreadCurve sf = snap.funding_spread();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double tau = grid[i];
        out.default_rate.at(row, i) = snap.lgd * hz.forward_default_prob(tau, dt) / dt;
        out.survival.at(row, i) = hz.survival(tau);
        const double df = sf.discount(tau);
        const double carry = sf.spread(tau) * df;
        out.fund_df.at(row, i) = df;
        out.fund_carry.at(row, i) = carry;
        out.fund_df_sq.at(row, i) = df * df;
        out.fund_carry_sq.at(row, i) = carry * carry;
    }
}

void fill_exposure_row(ExposureSeries& out, std::size_t row, const Portfolio& p,
                       const MarketSnapshot& snap, const std::vector<double>& grid) {
    const ExposureProfile prof = exposure_profile(p, snap, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.ee.at(row, i) = prof.ee[i];
        out.ene.at(row, i) = prof.ene[i];
        out.m2_pos_sq.at(row, i) = prof.m2_pos_sq[i];
        out.m2_net_sq.at(row, i) = prof.m2_net_sq[i];
    }
}

ExposureSeries make_exposure_series(const Portfolio& p, const std::vector<MarketSnapshot>& snaps,
                                    const std::vector<double>& grid, unsigned n_threads) {
    ExposureSeries out;
    const std::size_t n = snaps.size(), m = grid.size();
    out.ee = SeriesMatrix(n, m);
    out.ene = SeriesMatrix(n, m);
    out.m2_pos_sq = SeriesMatrix(n, m);
    out.m2_net_sq = SeriesMatrix(n, m);
    detail::parallel_for(n, n_threads,
                         [&](std::size_t d) { fill_exposure_row(out, d, p, snaps[d], grid); });
    return out;
}

// Dates the panel can use: snapshots whose hazard bootstrap succeeds, or a
// hard error when skipping is not enabled.
std::vector<MarketSnapshot> usable_snapshots(const HistoryStore& h,
                                             const std::vector<Fixing>& asof_fixings,
                                             const PanelOptions& opts) {
    std::vector<MarketSnapshot> snaps;
    snaps.reserve(h.size());
    for (const auto& s : h.snapshots()) {
        MarketSnapshot copy = s;
        copy.fixings = asof_fixings;
        try {
            (void)copy.counterparty_hazard();
        } catch (const DataError& e) {
            if (!opts.skip_bad_dates) throw;
            std::cerr << "calibration: skipping " << s.date.to_string() << ": " << e.what() << "\n";
            continue;
        }
        snaps.push_back(std::move(copy));
    }
    return snaps;
}

} // namespace

ProfilePanel build_panel(const Portfolio& p, const HistoryStore& h,
                         const std::vector<Fixing>& asof_fixings, const std::vector<double>& grid,
                         double bucket_dt, const PanelOptions& opts) {
    p.validate();
    if (h.size() < 2) throw DataError("build_panel: need at least 2 history dates");
    if (grid.empty()) throw DataError("build_panel: empty grid");
    if (!(bucket_dt > 0.0)) throw DataError("build_panel: bucket_dt must be > 0");

    const std::vector<MarketSnapshot> snaps = usable_snapshots(h, asof_fixings, opts);
    if (snaps.size() < 2) throw DataError("build_panel: fewer than 2 usable dates");

    ProfilePanel panel;
    panel.grid = grid;
    panel.bucket_dt = bucket_dt;
    panel.dates.reserve(snaps.size());
    for (const auto& s : snaps) panel.dates.push_back(s.date);

    const std::size_t n = snaps.size(), m = grid.size();
    panel.credit_funding.default_rate = SeriesMatrix(n, m);
    panel.credit_funding.survival = SeriesMatrix(n, m);
    panel.credit_funding.fund_df = SeriesMatrix(n, m);
    panel.credit_funding.fund_carry = SeriesMatrix(n, m);
    panel.credit_funding.fund_df_sq = SeriesMatrix(n, m);
    panel.credit_funding.fund_carry_sq = SeriesMatrix(n, m);
    detail::parallel_for(n, opts.n_threads, [&](std::size_t d) {
        fill_credit_funding_row(panel.credit_funding, d, snaps[d], grid, bucket_dt);
    });
    panel.exposure = make_exposure_series(p, snaps, grid, opts.n_threads);
    return panel;
}

TermStructure terminal_correlation(const SeriesMatrix& a, const SeriesMatrix& b,
                                   const std::vector<double>& grid, std::size_t d0, std::size_t d1) {
    if (a.n_dates() != b.n_dates() || a.n_buckets() != b.n_buckets())
        throw DataError("terminal_correlation: series shape mismatch");
    if (a.n_buckets() != grid.size()) throw DataError("terminal_correlation: grid mismatch");
    if (d1 >= a.n_dates() || d0 > d1 || d1 - d0 + 1 < 2)
        throw DataError("terminal_correlation: need at least 2 dates in window");

    const std::size_t n = d1 - d0 + 1;
    TermStructure ts;
    ts.taus = grid;
    ts.values.resize(grid.size());
    std::vector<double> xa(n), xb(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (std::size_t d = 0; d < n; ++d) {
            xa[d] = a.at(d0 + d, j);
            xb[d] = b.at(d0 + d, j);
        }
        ts.values[j] = SampleStats::correlation(xa, xb);
    }
    return ts;
}

TermStructure historical_sd(const SeriesMatrix& s, const std::vector<double>& grid, std::size_t d0,
                            std::size_t d1) {
    if (s.n_buckets() != grid.size()) throw DataError("historical_sd: grid mismatch");
    if (d1 >= s.n_dates() || d0 > d1 || d1 - d0 + 1 < 2)
        throw DataError("historical_sd: need at least 2 dates in window");
    const std::size_t n = d1 - d0 + 1;
    TermStructure ts;
    ts.taus = grid;
    ts.values.resize(grid.size());
    std::vector<double> x(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (std::size_t d = 0; d < n; ++d) x[d] = s.at(d0 + d, j);
        ts.values[j] = SampleStats::sd(x);
    }
    return ts;
}

double crossover_tenor(double lambda1, double lambda2) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw DomainError("crossover_tenor: hazard levels must be > 0");
    const double m = 0.5 * (lambda1 + lambda2);
    const double u = 0.5 * (lambda1 - lambda2) / m;
    // log(l1/l2)/(l1-l2) = artanh(u)/(m u); series for nearly equal levels
    if (std::fabs(u) < 1e-5) return (1.0 + u * u / 3.0) / m;
    return std::log(lambda1 / lambda2) / (lambda1 - lambda2);
}

const TradeCorrelations& CalibrationSet::correlations_for(const std::string& trade_id) const {
    auto it = trades.find(trade_id);
    if (it == trades.end())
        throw DataError("calibration set has no correlation block for trade '" + trade_id + "'");
    return it->second;
}

namespace {

struct DateWindow {
    std::size_t first = 0, last = 0; // inclusive row indices
    std::size_t count() const { return last - first + 1; }
};

DateWindow window_rows(const std::vector<Date>& dates, const Date& start, const Date& end,
                       const char* name) {
    std::size_t first = dates.size(), last = 0;
    for (std::size_t i = 0; i < dates.size(); ++i) {
        if (dates[i] < start || end < dates[i]) continue;
        first = std::min(first, i);
        last = std::max(last, i);
    }
    if (first >= dates.size() || last < first || last - first + 1 < 2)
        throw DataError(std::string(name) + " window [" + start.to_string() + ", " + end.to_string() +
                        "] covers fewer than 2 history dates");
    return {first, last};
}

TradeCorrelations correlations_from_series(const CreditFundingSeries& cf, const ExposureSeries& ex,
                                           const std::vector<double>& grid, const DateWindow& w) {
    // product series for the second WWR correlations
    const std::size_t n = cf.default_rate.n_dates(), m = grid.size();
    SeriesMatrix prod_c(n, m), prod_f(n, m);
    for (std::size_t d = w.first; d <= w.last; ++d)
        for (std::size_t j = 0; j < m; ++j) {
            prod_c.at(d, j) = cf.fund_df.at(d, j) * ex.ee.at(d, j);
            prod_f.at(d, j) = cf.fund_carry.at(d, j) * ex.ene.at(d, j);
        }

    TradeCorrelations tc;
    tc.rho_reg = terminal_correlation(cf.default_rate, ex.ee, grid, w.first, w.last);
    tc.c1 = terminal_correlation(cf.fund_df, ex.ee, grid, w.first, w.last);
    tc.c2 = terminal_correlation(cf.default_rate, prod_c, grid, w.first, w.last);
    tc.c2_1 = terminal_correlation(cf.fund_df_sq, ex.m2_pos_sq, grid, w.first, w.last);
    tc.f1 = terminal_correlation(cf.fund_carry, ex.ene, grid, w.first, w.last);
    tc.f2 = terminal_correlation(cf.survival, prod_f, grid, w.first, w.last);
    tc.f2_1 = terminal_correlation(cf.fund_carry_sq, ex.m2_net_sq, grid, w.first, w.last);
    return tc;
}

} // namespace

CalibrationSet calibrate(const Portfolio& p, const HistoryStore& h, const CalibrationConfig& cfg) {
    p.validate();
    if (h.size() < 2) throw DataError("calibrate: need at least 2 history dates");

    const Date asof = cfg.asof.value_or(h.back().date);
    const MarketSnapshot* asof_snap = h.find(asof);
    if (!asof_snap) throw DataError("calibrate: asof " + asof.to_string() + " not in history");

    const std::vector<double> grid = uniform_grid(p.max_maturity(), cfg.grid_dt);

    const std::vector<MarketSnapshot> snaps = usable_snapshots(h, asof_snap->fixings, cfg.panel);
    if (snaps.size() < 2) throw DataError("calibrate: fewer than 2 usable dates");
    std::vector<Date> dates;
    dates.reserve(snaps.size());
    for (const auto& s : snaps) dates.push_back(s.date);

    const Date corr_start = cfg.corr_start.value_or(dates.front());
    const Date corr_end = cfg.corr_end.value_or(dates.back());
    const DateWindow corr_w = window_rows(dates, corr_start, corr_end, "correlation");
    const Date sd_start = asof.plus_days(-static_cast<int>(std::lround(cfg.sd_window_years * 365.0)));
    const DateWindow sd_w = window_rows(dates, sd_start, asof, "recent-SD");

    CalibrationSet cs;
    cs.asof = asof;
    cs.grid_dt = cfg.grid_dt;
    cs.grid = grid;
    cs.corr_start = corr_start;
    cs.corr_end = corr_end;
    cs.sd_start = sd_start;
    cs.sd_end = asof;
    cs.corr_dates = corr_w.count();
    cs.sd_dates = sd_w.count();

    // credit/funding profiles, shared across trades
    CreditFundingSeries cf;
    const std::size_t n = snaps.size(), m = grid.size();
    cf.default_rate = SeriesMatrix(n, m);
    cf.survival = SeriesMatrix(n, m);
    cf.fund_df = SeriesMatrix(n, m);
    cf.fund_carry = SeriesMatrix(n, m);
    cf.fund_df_sq = SeriesMatrix(n, m);
    cf.fund_carry_sq = SeriesMatrix(n, m);
    detail::parallel_for(n, cfg.panel.n_threads,
                         [&](std::size_t d) { fill_credit_funding_row(cf, d, snaps[d], grid, cfg.grid_dt); });

    cs.sd_default = historical_sd(cf.default_rate, grid, sd_w.first, sd_w.last);
    cs.sd_surv = historical_sd(cf.survival, grid, sd_w.first, sd_w.last);
    cs.sd_fund_df = historical_sd(cf.fund_df, grid, sd_w.first, sd_w.last);
    cs.sd_fund_carry = historical_sd(cf.fund_carry, grid, sd_w.first, sd_w.last);
    cs.sd_fund_df_sq = historical_sd(cf.fund_df_sq, grid, sd_w.first, sd_w.last);
    cs.sd_fund_carry_sq = historical_sd(cf.fund_carry_sq, grid, sd_w.first, sd_w.last);

    if (cfg.crisis_start && cfg.crisis_end) {
        const DateWindow crisis_w = window_rows(dates, *cfg.crisis_start, *cfg.crisis_end, "crisis");
        cs.sd_default_crisis = historical_sd(cf.default_rate, grid, crisis_w.first, crisis_w.last);
        cs.crisis_start = cfg.crisis_start;
        cs.crisis_end = cfg.crisis_end;
        cs.crisis_dates = crisis_w.count();
    } else {
        cs.sd_default_crisis = cs.sd_default; // no crisis window: WW+Crisis == WW
    }

    // per-trade correlation blocks plus the netted portfolio
    for (const auto& trade : p.trades) {
        if (trade.id == CalibrationSet::net_key)
            throw DataError("calibrate: trade id '" + trade.id + "' is reserved");
        Portfolio single;
        single.counterparty = p.counterparty;
        single.trades = {trade};
        const ExposureSeries ex = make_exposure_series(single, snaps, grid, cfg.panel.n_threads);
        if (cs.trades.count(trade.id))
            throw DataError("calibrate: duplicate trade id '" + trade.id + "'");
        cs.trades[trade.id] = correlations_from_series(cf, ex, grid, corr_w);
    }
    {
        const ExposureSeries ex = make_exposure_series(p, snaps, grid, cfg.panel.n_threads);
        cs.trades[CalibrationSet::net_key] = correlations_from_series(cf, ex, grid, corr_w);
    }
    return cs;
}

// ---------------------------------------------------------------------------
// serialization (versioned JSON schema)

namespace {

json ts_values(const TermStructure& ts) { return json(ts.values); }

TermStructure ts_from_values(const json& j, const std::vector<double>& grid) {
    TermStructure ts;
    ts.taus = grid;
    ts.values = j.get<std::vector<double>>();
    if (ts.values.size() != grid.size())
        throw DataError("calibration file: term structure length does not match grid");
    return ts;
}

json correlations_to_json(const TradeCorrelations& tc) {
    return json{{"rho_reg", ts_values(tc.rho_reg)}, {"c1", ts_values(tc.c1)},
                {"c2", ts_values(tc.c2)},           {"c2.1", ts_values(tc.c2_1)},
                {"f1", ts_values(tc.f1)},           {"f2", ts_values(tc.f2)},
                {"f2.1", ts_values(tc.f2_1)}};
}

TradeCorrelations correlations_from_json(const json& j, const std::vector<double>& grid) {
    TradeCorrelations tc;
    tc.rho_reg = ts_from_values(j.at("rho_reg"), grid);
    tc.c1 = ts_from_values(j.at("c1"), grid);
    tc.c2 = ts_from_values(j.at("c2"), grid);
    tc.c2_1 = ts_from_values(j.at("c2.1"), grid);
    tc.f1 = ts_from_values(j.at("f1"), grid);
    tc.f2 = ts_from_values(j.at("f2"), grid);
    tc.f2_1 = ts_from_values(j.at("f2.1"), grid);
    tc.rho_reg.validate("rho_reg", true);
    tc.c1.validate("c1", true);
    tc.c2.validate("c2", true);
    tc.c2_1.validate("c2.1", true);
    tc.f1.validate("f1", true);
    tc.f2.validate("f2", true);
    tc.f2_1.validate("f2.1", true);
    return tc;
}

} // namespace

void write_calibration_file(const std::string& path, const CalibrationSet& cs) {
    json j;
    j["schema_version"] = cs.schema_version;
    j["asof"] = cs.asof.to_string();
    j["grid_dt"] = cs.grid_dt;
    j["grid"] = cs.grid;
    j["windows"] = {
        {"correlation", {{"start", cs.corr_start.to_string()}, {"end", cs.corr_end.to_string()}, {"dates", cs.corr_dates}}},
        {"recent_sd", {{"start", cs.sd_start.to_string()}, {"end", cs.sd_end.to_string()}, {"dates", cs.sd_dates}}},
    };
    if (cs.crisis_start)
        j["windows"]["crisis_sd"] = {{"start", cs.crisis_start->to_string()},
                                     {"end", cs.crisis_end->to_string()},
                                     {"dates", cs.crisis_dates}};
    j["historical_sd"] = {
        {"default", ts_values(cs.sd_default)},
        {"survival", ts_values(cs.sd_surv)},
        {"fund_df", ts_values(cs.sd_fund_df)},
        {"fund_carry", ts_values(cs.sd_fund_carry)},
        {"fund_df_sq", ts_values(cs.sd_fund_df_sq)},
        {"fund_carry_sq", ts_values(cs.sd_fund_carry_sq)},
        {"default_crisis", ts_values(cs.sd_default_crisis)},
    };
    j["trades"] = json::object();
    for (const auto& [id, tc] : cs.trades) j["trades"][id] = correlations_to_json(tc);

    std::ofstream out(path);
    if (!out) throw DataError("cannot write calibration file '" + path + "'");
    out << j.dump(2) << "\n";
}

CalibrationSet read_calibration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open calibration file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("calibration file '" + path + "': " + e.what());
    }
    try {
        CalibrationSet cs;
        cs.schema_version = j.at("schema_version").get<int>();
        if (cs.schema_version != 1)
            throw DataError("calibration file '" + path + "': unsupported schema_version " +
                            std::to_string(cs.schema_version));
        cs.asof = Date::parse(j.at("asof").get<std::string>());
        cs.grid_dt = j.at("grid_dt").get<double>();
        cs.grid = j.at("grid").get<std::vector<double>>();
        const auto& w = j.at("windows");
        cs.corr_start = Date::parse(w.at("correlation").at("start").get<std::string>());
        cs.corr_end = Date::parse(w.at("correlation").at("end").get<std::string>());
        cs.corr_dates = w.at("correlation").at("dates").get<std::size_t>();
        cs.sd_start = Date::parse(w.at("recent_sd").at("start").get<std::string>());
        cs.sd_end = Date::parse(w.at("recent_sd").at("end").get<std::string>());
        cs.sd_dates = w.at("recent_sd").at("dates").get<std::size_t>();
        if (w.contains("crisis_sd")) {
            cs.crisis_start = Date::parse(w.at("crisis_sd").at("start").get<std::string>());
            cs.crisis_end = Date::parse(w.at("crisis_sd").at("end").get<std::string>());
            cs.crisis_dates = w.at("crisis_sd").at("dates").get<std::size_t>();
        }
        const auto& sd = j.at("historical_sd");
        cs.sd_default = ts_from_values(sd.at("default"), cs.grid);
        cs.sd_surv = ts_from_values(sd.at("survival"), cs.grid);
        cs.sd_fund_df = ts_from_values(sd.at("fund_df"), cs.grid);
        cs.sd_fund_carry = ts_from_values(sd.at("fund_carry"), cs.grid);
        cs.sd_fund_df_sq = ts_from_values(sd.at("fund_df_sq"), cs.grid);
        cs.sd_fund_carry_sq = ts_from_values(sd.at("fund_carry_sq"), cs.grid);
        cs.sd_default_crisis = ts_from_values(sd.at("default_crisis"), cs.grid);
        for (const auto& [id, tc] : j.at("trades").items())
            cs.trades[id] = correlations_from_json(tc, cs.grid);
        return cs;
    } catch (const json::exception& e) {
        throw DataError("calibration file '" + path + "': " + e.what());
    }
}

void write_term_structure_csv(const std::string& path, const TermStructure& ts) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write term structure file '" + path + "'");
    out << "tau_years,value\n";
    char buf[64];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", ts.taus[i], ts.values[i]);
        out << buf;
    }
}

} // namespace wwr
