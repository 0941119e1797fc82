#include "wwr/pipeline.hpp"
#include "wwr/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace wwr {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SynthResult run_synth(const RegimeConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + out_dir + "': " + ec.message());

    const HistoryStore history = generate(cfg);

    SynthResult res;
    res.n_dates = history.size();
    res.market_csv = (fs::path(out_dir) / "market.csv").string();
    res.portfolio_csv = (fs::path(out_dir) / "portfolio.csv").string();
    res.manifest_json = (fs::path(out_dir) / "manifest.json").string();

    write_snapshot_file(res.market_csv, history);
    write_portfolio_file(res.portfolio_csv, default_portfolio_grid());

    const std::string cfg_json = regime_config_json(cfg);
    res.config_hash = fnv1a_hex(cfg_json);
    json manifest;
    manifest["generator"] = "gaussian-walk-v1";
    manifest["seed"] = cfg.seed;
    manifest["config_hash"] = res.config_hash;
    manifest["n_dates"] = res.n_dates;
    manifest["first_date"] = history.front().date.to_string();
    manifest["last_date"] = history.back().date.to_string();
    std::ofstream out(res.manifest_json);
    if (!out) throw DataError("cannot write manifest '" + res.manifest_json + "'");
    out << manifest.dump(2) << "\n";
    return res;
}

CalibrationSet run_calibrate(const CalibrateOptions& opts) {
    const HistoryStore history = read_history(opts.history_path);
    const Portfolio portfolio = read_portfolio_file(opts.portfolio_path);

    const CalibrationSet cs = calibrate(portfolio, history, opts.config);

    if (opts.log) {
        *opts.log << "calibrated " << portfolio.trades.size() << " trades, asof " << cs.asof.to_string()
                  << "\n"
                  << "  correlation window [" << cs.corr_start.to_string() << ", "
                  << cs.corr_end.to_string() << "]: " << cs.corr_dates << " dates\n"
                  << "  recent-SD window  [" << cs.sd_start.to_string() << ", " << cs.sd_end.to_string()
                  << "]: " << cs.sd_dates << " dates\n";
        if (cs.crisis_start)
            *opts.log << "  crisis-SD window  [" << cs.crisis_start->to_string() << ", "
                      << cs.crisis_end->to_string() << "]: " << cs.crisis_dates << " dates\n";
    }

    write_calibration_file(opts.out_path, cs);

    if (!opts.export_csv_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(opts.export_csv_dir, ec);
        if (ec) throw DataError("cannot create export directory '" + opts.export_csv_dir + "'");
        auto path = [&](const std::string& n) { return (fs::path(opts.export_csv_dir) / (n + ".csv")).string(); };
        write_term_structure_csv(path("sd_default"), cs.sd_default);
        write_term_structure_csv(path("sd_default_crisis"), cs.sd_default_crisis);
        write_term_structure_csv(path("sd_survival"), cs.sd_surv);
        write_term_structure_csv(path("sd_fund_df"), cs.sd_fund_df);
        write_term_structure_csv(path("sd_fund_carry"), cs.sd_fund_carry);
        for (const auto& [id, tc] : cs.trades) {
            write_term_structure_csv(path(id + "_rho_reg"), tc.rho_reg);
            write_term_structure_csv(path(id + "_c1"), tc.c1);
            write_term_structure_csv(path(id + "_c2"), tc.c2);
            write_term_structure_csv(path(id + "_c2.1"), tc.c2_1);
            write_term_structure_csv(path(id + "_f1"), tc.f1);
            write_term_structure_csv(path(id + "_f2"), tc.f2);
            write_term_structure_csv(path(id + "_f2.1"), tc.f2_1);
        }
    }
    return cs;
}

PriceResult run_price(const PriceOptions& opts) {
    const CalibrationSet cs = read_calibration_file(opts.calibration_path);
    const HistoryStore history = read_history(opts.history_path);
    const Portfolio portfolio = read_portfolio_file(opts.portfolio_path);

    const Date asof = opts.asof.value_or(cs.asof);
    const MarketSnapshot* snap = history.find(asof);
    if (!snap) throw DataError("asof snapshot " + asof.to_string() + " not found in history");
    const AsofMarket asof_market = AsofMarket::build(*snap);

    PriceResult res;
    if (opts.mode == PriceMode::Regulatory) {
        for (const auto& t : portfolio.trades)
            res.reg_rows.push_back(price_regulatory(t, asof_market, cs));
        write_regulatory_report(opts.out_path, res.reg_rows);
    } else {
        for (const auto& t : portfolio.trades)
            res.acct_rows.push_back(price_accounting(t, asof_market, cs));
        write_accounting_report(opts.out_path, res.acct_rows);
    }
    return res;
}

} // namespace wwr
