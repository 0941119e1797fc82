#pragma once

#include "wwr/accounting.hpp"
#include "wwr/calibration.hpp"
#include "wwr/regulatory.hpp"

#include <string>
#include <vector>

namespace wwr {

/// Asof snapshot with its bootstrapped counterparty hazard and funding
/// spread curves, built once per pricing run.
struct AsofMarket {
    MarketSnapshot snap;
    HazardCurve hazard;
    SpreadCurve funding;

    static AsofMarket build(const MarketSnapshot& s);
};

/// One row of the regulatory report, values in bps of notional.
struct RegReportRow {
    std::string trade_id;
    double tenor = 0.0;
    double strike_pct = 0.0;
    Direction direction = Direction::ReceiveFixed;
    double cva_indep_bps = 0.0;
    double ww_bps = 0.0;
    double ww_crisis_bps = 0.0;
};

/// One row of the accounting report, values in bps of notional.
struct AcctReportRow {
    std::string trade_id;
    double tenor = 0.0;
    double strike_pct = 0.0;
    Direction direction = Direction::ReceiveFixed;
    double cva_indep = 0.0, cva_ww1 = 0.0, cva_ww2 = 0.0;
    double fva_indep = 0.0, fva_ww1 = 0.0, fva_ww2 = 0.0;
    double cva_total = 0.0, fva_total = 0.0;
};

/// Per-unit-notional decomposition inputs for one trade on the calibration
/// grid (market-implied exposure statistics from the asof snapshot,
/// historical SDs and correlations from the calibration set).
RegInputs build_reg_inputs(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs);
AcctInputs build_acct_inputs(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs);

/// Trade grid: the calibration-grid prefix covering the trade's maturity.
/// Throws when the maturity does not land on the calibration grid (no
/// silent resampling).
std::vector<double> trade_pricing_grid(const IrsTrade& trade, const CalibrationSet& cs);

RegReportRow price_regulatory(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs);
AcctReportRow price_accounting(const IrsTrade& trade, const AsofMarket& asof, const CalibrationSet& cs);

void write_regulatory_report(const std::string& path, const std::vector<RegReportRow>& rows);
void write_accounting_report(const std::string& path, const std::vector<AcctReportRow>& rows);

} // namespace wwr
