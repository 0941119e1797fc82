#include "wwr/report.hpp"
#include "wwr/errors.hpp"
#include "wwr/pricing.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wwr {

AsofMarket AsofMarket::build(const MarketSnapshot& s) {
    return AsofMarket{s, s.counterparty_hazard(), s.funding_spread()};
}

std::vector<double> trade_pricing_grid(const IrsTrade& trade, const CalibrationSet& cs) {
    if (cs.grid.empty()) throw DataError("calibration set has an empty grid");
    std::vector<double> grid;
    bool maturity_on_grid = false;
    for (double tau : cs.grid) {
        if (tau > trade.maturity + 1e-9) break;
        grid.push_back(tau);
        if (std::fabs(tau - trade.maturity) < 1e-9) maturity_on_grid = true;
    }
    if (!maturity_on_grid)
        throw DataError("trade " + trade.id + ": maturity " + std::to_string(trade.maturity) +
                        "y does not land on the calibration grid (dt = " + std::to_string(cs.grid_dt) +
                        "); recalibrate with a compatible grid");
    return grid;
}

namespace {

struct UnitExposure {
    std::vector<double> grid;
    ExposureProfile prof; // per unit notional
};

UnitExposure unit_exposure(const IrsTrade& trade, const MarketSnapshot& snap, const CalibrationSet& cs) {
    UnitExposure u;
    u.grid = trade_pricing_grid(trade, cs);
    IrsTrade unit = trade;
    unit.notional = 1.0;
    Portfolio single;
    single.trades = {unit};
    u.prof = exposure_profile(single, snap, u.grid);
    return u;
}

std::vector<double> slice(const TermStructure& ts, std::size_t n, const char* name) {
    if (ts.values.size() < n)
        throw DataError(std::string("calibration term structure ") + name + " shorter than trade grid");
    return std::vector<double>(ts.values.begin(), ts.values.begin() + static_cast<std::ptrdiff_t>(n));
}

} // namespace

RegInputs build_reg_inputs(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs) {
    const UnitExposure u = unit_exposure(trade, asof.snap, cs);
    const std::size_t n = u.grid.size();
    const TradeCorrelations& tc = cs.correlations_for(trade.id);

    RegInputs in;
    in.grid = u.grid;
    in.weights = trapezoid_weights(u.grid);
    in.e_exposure = u.prof.ee;
    in.sd_exposure = u.prof.sd_pos;
    in.rho = slice(tc.rho_reg, n, "rho_reg");
    in.sd_default = slice(cs.sd_default, n, "sd_default");
    in.e_default.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        in.e_default[i] =
            asof.snap.lgd * asof.hazard.forward_default_prob(u.grid[i], cs.grid_dt) / cs.grid_dt;
    return in;
}

AcctInputs build_acct_inputs(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs) {
    const UnitExposure u = unit_exposure(trade, asof.snap, cs);
    const std::size_t n = u.grid.size();
    const TradeCorrelations& tc = cs.correlations_for(trade.id);

    AcctInputs in;
    in.grid = u.grid;
    in.weights = trapezoid_weights(u.grid);
    in.e_exp_pos = u.prof.ee;
    in.e_exp_net = u.prof.ene;
    in.sd_exp_pos = u.prof.sd_pos;
    in.sd_exp_net = u.prof.sd_net;
    in.m2_exp_pos_sq = u.prof.m2_pos_sq;
    in.sd_exp_pos_sq = u.prof.sd_pos_sq;
    in.m2_exp_net_sq = u.prof.m2_net_sq;
    in.sd_exp_net_sq = u.prof.sd_net_sq;

    in.e_default.resize(n);
    in.e_surv.resize(n);
    in.e_fund_df.resize(n);
    in.e_fund_carry.resize(n);
    in.e_fund_df_sq.resize(n);
    in.e_fund_carry_sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = u.grid[i];
        in.e_default[i] = asof.snap.lgd * asof.hazard.forward_default_prob(tau, cs.grid_dt) / cs.grid_dt;
        in.e_surv[i] = asof.hazard.survival(tau);
        const double df = asof.funding.discount(tau);
        const double carry = asof.funding.spread(tau) * df;
        in.e_fund_df[i] = df;
        in.e_fund_carry[i] = carry;
        in.e_fund_df_sq[i] = df * df;
        in.e_fund_carry_sq[i] = carry * carry;
    }

    in.sd_default = slice(cs.sd_default, n, "sd_default");
    in.sd_surv = slice(cs.sd_surv, n, "sd_surv");
    in.sd_fund_df = slice(cs.sd_fund_df, n, "sd_fund_df");
    in.sd_fund_carry = slice(cs.sd_fund_carry, n, "sd_fund_carry");
    in.sd_fund_df_sq = slice(cs.sd_fund_df_sq, n, "sd_fund_df_sq");
    in.sd_fund_carry_sq = slice(cs.sd_fund_carry_sq, n, "sd_fund_carry_sq");

    in.c1 = slice(tc.c1, n, "c1");
    in.c2 = slice(tc.c2, n, "c2");
    in.c2_1 = slice(tc.c2_1, n, "c2.1");
    in.f1 = slice(tc.f1, n, "f1");
    in.f2 = slice(tc.f2, n, "f2");
    in.f2_1 = slice(tc.f2_1, n, "f2.1");

    // historically estimated square correlations can sit below the floor the
    // market second moments allow; project them onto the feasible set
    clamp_square_correlations(in);
    return in;
}

RegReportRow price_regulatory(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs) {
    const RegInputs in = build_reg_inputs(trade, asof, cs);
    const std::size_t n = in.grid.size();

    TermStructure recent{in.grid, slice(cs.sd_default, n, "sd_default")};
    TermStructure crisis{in.grid, slice(cs.sd_default_crisis, n, "sd_default_crisis")};
    const RegResult base = regulatory_cva(in);
    const RegResult stressed = regulatory_cva(crisis_rescale(in, crisis, recent));

    RegReportRow row;
    row.trade_id = trade.id;
    row.tenor = trade.maturity;
    row.strike_pct = trade.fixed_rate * 100.0;
    row.direction = trade.direction;
    row.cva_indep_bps = base.cva_indep * 1e4;
    row.ww_bps = base.cva_wwr * 1e4;
    row.ww_crisis_bps = stressed.cva_wwr * 1e4;
    return row;
}

AcctReportRow price_accounting(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs) {
    const AcctInputs in = build_acct_inputs(trade, asof, cs);
    const WwrTerms cva = accounting_cva(in);
    const WwrTerms fva = accounting_fva(in);

    AcctReportRow row;
    row.trade_id = trade.id;
    row.tenor = trade.maturity;
    row.strike_pct = trade.fixed_rate * 100.0;
    row.direction = trade.direction;
    row.cva_indep = cva.indep * 1e4;
    row.cva_ww1 = cva.ww1 * 1e4;
    row.cva_ww2 = cva.ww2 * 1e4;
    row.fva_indep = fva.indep * 1e4;
    row.fva_ww1 = fva.ww1 * 1e4;
    row.fva_ww2 = fva.ww2 * 1e4;
    row.cva_total = cva.total * 1e4;
    row.fva_total = fva.total * 1e4;
    return row;
}

void write_regulatory_report(const std::string& path, const std::vector<RegReportRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report file '" + path + "'");
    out << "tenor,strike,direction,cva_indep_bps,ww_bps,ww_crisis_bps\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", r.tenor, r.strike_pct,
                      to_string(r.direction), r.cva_indep_bps, r.ww_bps, r.ww_crisis_bps);
        out << buf;
    }
}

void write_accounting_report(const std::string& path, const std::vector<AcctReportRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report file '" + path + "'");
    out << "tenor,strike,direction,cva_indep,cva_ww1,cva_ww2,fva_indep,fva_ww1,fva_ww2,cva_total,"
           "fva_total\n";
    char buf[384];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.tenor, r.strike_pct, to_string(r.direction), r.cva_indep, r.cva_ww1, r.cva_ww2,
                      r.fva_indep, r.fva_ww1, r.fva_ww2, r.cva_total, r.fva_total);
        out << buf;
    }
}

} // namespace wwr
