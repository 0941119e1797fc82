#include "wwr/synthetic.hpp"
#include "wwr/errors.hpp"
#include "wwr/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace wwr {

using nlohmann::json;

void RegimeConfig::validate() const {
    if (!(start_date < end_date)) throw DataError("RegimeConfig: start_date must precede end_date");
    if (business_days_per_year <= 0) throw DataError("RegimeConfig: business_days_per_year must be > 0");
    if (segments.empty()) throw DataError("RegimeConfig: no segments");
    if (!(segments.front().start == start_date) || !(segments.back().end == end_date))
        throw DataError("RegimeConfig: segments must tile [start_date, end_date)");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].start < segments[i].end))
            throw DataError("RegimeConfig: empty segment " + std::to_string(i));
        if (i > 0 && !(segments[i - 1].end == segments[i].start))
            throw DataError("RegimeConfig: segments must be contiguous");
        if (segments[i].rate_vol < 0.0 || segments[i].cds_vol < 0.0 || segments[i].funding_idio_vol < 0.0)
            throw DataError("RegimeConfig: vols must be >= 0");
    }
    if (base_zero.empty() || base_cds.empty() || base_funding.empty())
        throw DataError("RegimeConfig: base curves missing");
    if (vol_expiries.empty() || vol_tenors.empty())
        throw DataError("RegimeConfig: vol surface axes missing");
    for (const auto& p : base_cds)
        if (p.spread < spread_floor)
            throw DataError("RegimeConfig: base CDS level below the spread floor");
    for (const auto& p : base_funding)
        if (p.spread < spread_floor)
            throw DataError("RegimeConfig: base funding level below the spread floor");
}

std::size_t RegimeConfig::n_dates() const {
    const double years = start_date.year_fraction_to(end_date);
    return static_cast<std::size_t>(std::llround(years * business_days_per_year));
}

RegimeConfig default_regime_config() {
    RegimeConfig cfg;
    cfg.start_date = Date(2008, 1, 1);
    cfg.end_date = Date(2012, 12, 30); // 1825 days = 5.0y -> 1260 business days
    cfg.seed = 20081115u;

    RegimeSegment calm1{Date(2008, 1, 1), Date(2008, 9, 1), 0.0, 0.005, 0.0, 0.0002, 0.35, 0.003};
    RegimeSegment crisis{Date(2008, 9, 1), Date(2009, 9, 1), -0.03, 0.008, 0.05, 0.002, 0.35, 0.003};
    RegimeSegment calm2{Date(2009, 9, 1), Date(2012, 12, 30), 0.0, 0.005, 0.0, 0.0002, 0.35, 0.003};
    cfg.segments = {calm1, crisis, calm2};

    for (double t : {0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0})
        cfg.base_zero.push_back({t, 0.045});
    for (double t : {1.0, 3.0, 5.0, 7.0, 10.0})
        cfg.base_cds.push_back({t, 0.03});
    for (double t : {1.0, 3.0, 5.0, 10.0})
        cfg.base_funding.push_back({t, 0.01});
    cfg.vol_expiries = {0.25, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 30.0};
    cfg.vol_tenors = {1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 30.0};
    cfg.atm_normal_vol = 0.006;
    return cfg;
}

namespace {

const RegimeSegment& segment_at(const RegimeConfig& cfg, const Date& d) {
    for (const auto& s : cfg.segments)
        if (!(d < s.start) && d < s.end) return s;
    return cfg.segments.back();
}

} // namespace

HistoryStore generate(const RegimeConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_dates();
    if (n == 0) throw DataError("RegimeConfig: span produces no dates");

    Rng rng(cfg.seed);
    const double dt = 1.0 / cfg.business_days_per_year;
    const double sqrt_dt = std::sqrt(dt);

    double rate_shift = 0.0, cds_shift = 0.0, fund_idio = 0.0;

    std::vector<MarketSnapshot> snaps;
    snaps.reserve(n);
    Date d = cfg.start_date;
    while (d.is_weekend()) d = d.plus_days(1);

    for (std::size_t i = 0; i < n; ++i) {
        const RegimeSegment& seg = segment_at(cfg, d);

        std::vector<ZeroCurve::Pillar> zero = cfg.base_zero;
        for (auto& p : zero) p.zero_rate = std::max(p.zero_rate + rate_shift, cfg.rate_floor);
        CdsCurve cds;
        cds.recovery = cfg.recovery;
        for (const auto& p : cfg.base_cds)
            cds.pillars.push_back({p.tenor, std::max(p.spread + cds_shift, cfg.spread_floor)});
        FundingCurve fund;
        fund.recovery = cfg.recovery;
        for (const auto& p : cfg.base_funding)
            fund.pillars.push_back(
                {p.tenor, std::max(p.spread + seg.funding_beta * cds_shift + fund_idio, cfg.spread_floor)});

        std::vector<double> vols(cfg.vol_expiries.size() * cfg.vol_tenors.size(), cfg.atm_normal_vol);
        NormalVolSurface surface(cfg.vol_expiries, cfg.vol_tenors, std::move(vols));

        std::vector<Fixing> fixings{
            {cfg.fixing_index_tenor, d, std::max(cfg.base_zero.front().zero_rate + rate_shift, cfg.rate_floor)}};

        snaps.push_back(MarketSnapshot{d, ZeroCurve(std::move(zero)), std::move(cds), std::move(fund),
                                       std::move(surface), std::move(fixings), cfg.lgd});

        // evolve to the next business day
        rate_shift += seg.rate_drift * dt + seg.rate_vol * sqrt_dt * rng.normal();
        cds_shift += seg.cds_drift * dt + seg.cds_vol * sqrt_dt * rng.normal();
        fund_idio += seg.funding_idio_vol * sqrt_dt * rng.normal();
        d = d.next_business_day();
    }
    return HistoryStore(std::move(snaps));
}

Portfolio default_portfolio_grid() {
    Portfolio p;
    p.counterparty = "SYNTH-CPTY";
    const double tenors[] = {5.0, 10.0, 20.0, 30.0};
    const double strikes[] = {-0.0025, 0.0, 0.005, 0.01, 0.02};
    char id[64];
    for (double t : tenors)
        for (double k : strikes)
            for (Direction dir : {Direction::ReceiveFloat, Direction::ReceiveFixed}) {
                IrsTrade trade;
                std::snprintf(id, sizeof(id), "%s_%gy_K%g", dir == Direction::ReceiveFloat ? "flt" : "fix",
                              t, k * 100.0);
                trade.id = id;
                trade.direction = dir;
                trade.notional = 1.0e6;
                trade.fixed_rate = k;
                trade.start = 0.0;
                trade.maturity = t;
                trade.fixed_freq = 1;
                trade.float_freq = 2;
                p.trades.push_back(trade);
            }
    return p;
}

// ---------------------------------------------------------------------------
// config JSON

namespace {

json segment_to_json(const RegimeSegment& s) {
    return json{{"start", s.start.to_string()},
                {"end", s.end.to_string()},
                {"rate_drift", s.rate_drift},
                {"rate_vol", s.rate_vol},
                {"cds_drift", s.cds_drift},
                {"cds_vol", s.cds_vol},
                {"funding_beta", s.funding_beta},
                {"funding_idio_vol", s.funding_idio_vol}};
}

RegimeSegment segment_from_json(const json& j) {
    RegimeSegment s;
    s.start = Date::parse(j.at("start").get<std::string>());
    s.end = Date::parse(j.at("end").get<std::string>());
    s.rate_drift = j.at("rate_drift").get<double>();
    s.rate_vol = j.at("rate_vol").get<double>();
    s.cds_drift = j.at("cds_drift").get<double>();
    s.cds_vol = j.at("cds_vol").get<double>();
    s.funding_beta = j.at("funding_beta").get<double>();
    s.funding_idio_vol = j.at("funding_idio_vol").get<double>();
    return s;
}

json pillars_to_json(const std::vector<ZeroCurve::Pillar>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back({p.tenor, p.zero_rate});
    return a;
}

json spread_pillars_to_json(const std::vector<CdsCurve::Pillar>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back({p.tenor, p.spread});
    return a;
}

} // namespace

std::string regime_config_json(const RegimeConfig& cfg) {
    json j;
    j["start_date"] = cfg.start_date.to_string();
    j["end_date"] = cfg.end_date.to_string();
    j["business_days_per_year"] = cfg.business_days_per_year;
    j["seed"] = cfg.seed;
    j["segments"] = json::array();
    for (const auto& s : cfg.segments) j["segments"].push_back(segment_to_json(s));
    j["base_zero"] = pillars_to_json(cfg.base_zero);
    j["base_cds"] = spread_pillars_to_json(cfg.base_cds);
    j["base_funding"] = spread_pillars_to_json(cfg.base_funding);
    j["vol_expiries"] = cfg.vol_expiries;
    j["vol_tenors"] = cfg.vol_tenors;
    j["atm_normal_vol"] = cfg.atm_normal_vol;
    j["recovery"] = cfg.recovery;
    j["lgd"] = cfg.lgd;
    j["rate_floor"] = cfg.rate_floor;
    j["spread_floor"] = cfg.spread_floor;
    j["fixing_index_tenor"] = cfg.fixing_index_tenor;
    return j.dump(2);
}

void write_regime_config(const std::string& path, const RegimeConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write config file '" + path + "'");
    out << regime_config_json(cfg) << "\n";
}

RegimeConfig load_regime_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("config file '" + path + "': " + e.what());
    }
    try {
        RegimeConfig cfg;
        cfg.start_date = Date::parse(j.at("start_date").get<std::string>());
        cfg.end_date = Date::parse(j.at("end_date").get<std::string>());
        cfg.business_days_per_year = j.at("business_days_per_year").get<int>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& s : j.at("segments")) cfg.segments.push_back(segment_from_json(s));
        for (const auto& p : j.at("base_zero")) cfg.base_zero.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        for (const auto& p : j.at("base_cds")) cfg.base_cds.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        for (const auto& p : j.at("base_funding"))
            cfg.base_funding.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        cfg.vol_expiries = j.at("vol_expiries").get<std::vector<double>>();
        cfg.vol_tenors = j.at("vol_tenors").get<std::vector<double>>();
        cfg.atm_normal_vol = j.at("atm_normal_vol").get<double>();
        cfg.recovery = j.at("recovery").get<double>();
        cfg.lgd = j.at("lgd").get<double>();
        cfg.rate_floor = j.at("rate_floor").get<double>();
        cfg.spread_floor = j.at("spread_floor").get<double>();
        cfg.fixing_index_tenor = j.at("fixing_index_tenor").get<double>();
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw DataError("config file '" + path + "': " + e.what());
    }
}

} // namespace wwr
