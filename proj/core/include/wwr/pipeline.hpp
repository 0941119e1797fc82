#pragma once

#include "wwr/calibration.hpp"
#include "wwr/report.hpp"
#include "wwr/synthetic.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace wwr {

/// End-to-end command bodies shared by the CLI and the acceptance suite.

struct SynthResult {
    std::string market_csv;
    std::string portfolio_csv;
    std::string manifest_json;
    std::string config_hash; // FNV-1a of the canonical config dump
    std::size_t n_dates = 0;
};

/// Writes <out_dir>/market.csv, <out_dir>/portfolio.csv (default 40-trade
/// grid) and <out_dir>/manifest.json.
SynthResult run_synth(const RegimeConfig& cfg, const std::string& out_dir);

struct CalibrateOptions {
    std::string history_path;
    std::string portfolio_path;
    std::string out_path;
    CalibrationConfig config;
    std::string export_csv_dir; // optional: per-structure tau_years,value CSVs
    std::ostream* log = nullptr;
};

CalibrationSet run_calibrate(const CalibrateOptions& opts);

enum class PriceMode { Regulatory, Accounting };

struct PriceOptions {
    std::string calibration_path;
    std::string history_path; // file or directory holding the asof snapshot
    std::string portfolio_path;
    std::string out_path;
    std::optional<Date> asof; // default: the calibration asof
    PriceMode mode = PriceMode::Regulatory;
};

struct PriceResult {
    std::vector<RegReportRow> reg_rows;
    std::vector<AcctReportRow> acct_rows;
};

PriceResult run_price(const PriceOptions& opts);

std::string fnv1a_hex(const std::string& data);

} // namespace wwr
