// xvawwr: model-independent wrong-way risk for regulatory CVA and
// accounting CVA/FVA. Subcommands: synth, calibrate, price, crossover,
// oracle. Exit codes: 0 ok, 1 usage, 2 data error, 3 verification failure.

#include "wwr/calibration.hpp"
#include "wwr/errors.hpp"
#include "wwr/oracle.hpp"
#include "wwr/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

std::optional<wwr::Date> parse_optional_date(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return wwr::Date::parse(s);
}

int cmd_synth(const std::string& config_path, const std::string& out_dir, bool write_default) {
    if (write_default) {
        wwr::write_regime_config(config_path, wwr::default_regime_config());
        std::cout << "wrote default config to " << config_path << "\n";
        return kExitOk;
    }
    const wwr::RegimeConfig cfg =
        config_path.empty() ? wwr::default_regime_config() : wwr::load_regime_config(config_path);
    const wwr::SynthResult res = wwr::run_synth(cfg, out_dir);
    std::cout << "generated " << res.n_dates << " snapshots\n"
              << "  market:    " << res.market_csv << "\n"
              << "  portfolio: " << res.portfolio_csv << "\n"
              << "  manifest:  " << res.manifest_json << " (config hash " << res.config_hash << ")\n";
    return kExitOk;
}

int cmd_calibrate(const wwr::CalibrateOptions& opts) {
    const wwr::CalibrationSet cs = wwr::run_calibrate(opts);
    std::cout << "wrote calibration (" << cs.trades.size() << " correlation blocks, grid "
              << cs.grid.size() << " x " << cs.grid_dt << "y)\n";
    return kExitOk;
}

int cmd_price(const wwr::PriceOptions& opts) {
    const wwr::PriceResult res = wwr::run_price(opts);
    const std::size_t rows = res.reg_rows.size() + res.acct_rows.size();
    std::cout << "wrote " << rows << " report rows to " << opts.out_path << "\n";
    return kExitOk;
}

int cmd_crossover(double lambda1, double lambda2) {
    std::printf("crossover tenor: %.10g years\n", wwr::crossover_tenor(lambda1, lambda2));
    return kExitOk;
}

int cmd_oracle(std::uint64_t seed, std::size_t n) {
    const wwr::OracleReport rep = wwr::run_oracle_suite(seed, n);
    std::printf("%-34s %14s %12s %s\n", "check", "residual", "threshold", "status");
    for (const auto& e : rep.entries)
        std::printf("%-34s %14.3e %12.0e %s\n", e.name.c_str(), e.residual, e.threshold,
                    e.pass ? "pass" : "FAIL");
    if (!rep.all_pass()) {
        std::cerr << "oracle: verification threshold breached\n";
        return kExitVerification;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-independent WWR for regulatory CVA and accounting CVA/FVA"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic market history");
    std::string synth_config, synth_out = "synth_out";
    bool synth_write_default = false;
    synth->add_option("--config", synth_config, "Regime config JSON (defaults to the built-in config)");
    synth->add_option("--out", synth_out, "Output directory");
    synth->add_flag("--write-default-config", synth_write_default,
                    "Write the built-in default config to --config and exit");

    // calibrate
    auto* calib = app.add_subcommand("calibrate", "Estimate correlation and variance term structures");
    std::string cal_history, cal_portfolio, cal_out = "calibration.json", cal_export;
    std::string cal_asof, cal_corr_start, cal_corr_end, cal_crisis_start, cal_crisis_end;
    double cal_grid_dt = 0.25, cal_sd_years = 1.0;
    bool cal_skip_bad = false;
    unsigned cal_threads = 0;
    calib->add_option("--history", cal_history, "Snapshot CSV file or directory")->required();
    calib->add_option("--portfolio", cal_portfolio, "Portfolio CSV")->required();
    calib->add_option("--out", cal_out, "Calibration output file");
    calib->add_option("--asof", cal_asof, "Asof date (default: last history date)");
    calib->add_option("--grid-dt", cal_grid_dt, "Horizon grid spacing in years");
    calib->add_option("--corr-start", cal_corr_start, "Correlation window start (default: full span)");
    calib->add_option("--corr-end", cal_corr_end, "Correlation window end");
    calib->add_option("--sd-years", cal_sd_years, "Trailing SD window length in years");
    calib->add_option("--crisis-start", cal_crisis_start, "Crisis SD window start");
    calib->add_option("--crisis-end", cal_crisis_end, "Crisis SD window end");
    calib->add_option("--export-csv", cal_export, "Directory for tau_years,value CSV exports");
    calib->add_flag("--skip-bad-dates", cal_skip_bad, "Skip snapshots that fail curve construction");
    calib->add_option("--threads", cal_threads, "Worker threads (0 = hardware)");

    // price
    auto* price = app.add_subcommand("price", "Produce a WWR report for a portfolio");
    std::string pr_calib, pr_history, pr_portfolio, pr_out = "report.csv", pr_mode = "reg", pr_asof;
    price->add_option("--calib", pr_calib, "Calibration file")->required();
    price->add_option("--history", pr_history, "Snapshot CSV file or directory with the asof date")
        ->required();
    price->add_option("--portfolio", pr_portfolio, "Portfolio CSV")->required();
    price->add_option("--mode", pr_mode, "reg | acct")->check(CLI::IsMember({"reg", "acct"}));
    price->add_option("--asof", pr_asof, "Asof date (default: calibration asof)");
    price->add_option("--out", pr_out, "Report CSV path");

    // crossover
    auto* xover = app.add_subcommand("crossover", "Forward default probability crossover tenor");
    double xo_l1 = 0.0, xo_l2 = 0.0;
    xover->add_option("--lambda1", xo_l1, "First hazard level (/yr)")->required();
    xover->add_option("--lambda2", xo_l2, "Second hazard level (/yr)")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Run the moment-identity verification battery");
    std::uint64_t or_seed = 7;
    std::size_t or_n = 100000;
    oracle->add_option("--seed", or_seed, "Sampler seed");
    oracle->add_option("--draws", or_n, "Draws per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_config, synth_out, synth_write_default);
        if (calib->parsed()) {
            wwr::CalibrateOptions opts;
            opts.history_path = cal_history;
            opts.portfolio_path = cal_portfolio;
            opts.out_path = cal_out;
            opts.export_csv_dir = cal_export;
            opts.config.grid_dt = cal_grid_dt;
            opts.config.sd_window_years = cal_sd_years;
            opts.config.asof = parse_optional_date(cal_asof);
            opts.config.corr_start = parse_optional_date(cal_corr_start);
            opts.config.corr_end = parse_optional_date(cal_corr_end);
            opts.config.crisis_start = parse_optional_date(cal_crisis_start);
            opts.config.crisis_end = parse_optional_date(cal_crisis_end);
            opts.config.panel.skip_bad_dates = cal_skip_bad;
            opts.config.panel.n_threads = cal_threads;
            opts.log = &std::cout;
            return cmd_calibrate(opts);
        }
        if (price->parsed()) {
            wwr::PriceOptions opts;
            opts.calibration_path = pr_calib;
            opts.history_path = pr_history;
            opts.portfolio_path = pr_portfolio;
            opts.out_path = pr_out;
            opts.asof = parse_optional_date(pr_asof);
            opts.mode = (pr_mode == "acct") ? wwr::PriceMode::Accounting : wwr::PriceMode::Regulatory;
            return cmd_price(opts);
        }
        if (xover->parsed()) return cmd_crossover(xo_l1, xo_l2);
        if (oracle->parsed()) return cmd_oracle(or_seed, or_n);
    } catch (const wwr::VerificationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const wwr::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const wwr::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
