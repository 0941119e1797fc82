#pragma once

#include "wwr/pricing.hpp"
#include "wwr/snapshot.hpp"
#include "wwr/term_structure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wwr {

/// Rectangular (date x tau-bucket) matrix of conditional statistics.
class SeriesMatrix {
public:
    SeriesMatrix() = default;
    SeriesMatrix(std::size_t n_dates, std::size_t n_buckets)
        : n_dates_(n_dates), n_buckets_(n_buckets), values_(n_dates * n_buckets, 0.0) {}

    double& at(std::size_t date, std::size_t bucket) { return values_[date * n_buckets_ + bucket]; }
    double at(std::size_t date, std::size_t bucket) const { return values_[date * n_buckets_ + bucket]; }

    std::size_t n_dates() const { return n_dates_; }
    std::size_t n_buckets() const { return n_buckets_; }

private:
    std::size_t n_dates_ = 0, n_buckets_ = 0;
    std::vector<double> values_;
};

/// Credit and funding conditional profiles, one row per history date.
/// default_rate is the bucket-average default intensity term
/// LGD (S(tau) - S(tau+dt)) / dt; survival is D_lambda(tau); fund_df is
/// D_sF(tau); fund_carry is sF(tau) D_sF(tau).
struct CreditFundingSeries {
    SeriesMatrix default_rate, survival;
    SeriesMatrix fund_df, fund_carry, fund_df_sq, fund_carry_sq;
};

/// Per-date conditional exposure statistics of one netting set.
struct ExposureSeries {
    SeriesMatrix ee, ene, m2_pos_sq, m2_net_sq;
};

/// Conditional profiles of the constant portfolio over every history date:
/// each date is one sample of the expected exposure and expected default
/// probability profiles.
struct ProfilePanel {
    std::vector<Date> dates;
    std::vector<double> grid;
    double bucket_dt = 0.25;
    CreditFundingSeries credit_funding;
    ExposureSeries exposure;

    const SeriesMatrix& series(const std::string& name) const;
};

struct PanelOptions {
    bool skip_bad_dates = false; // default: a failing snapshot is a hard error
    unsigned n_threads = 0;      // 0 = hardware concurrency
};

/// Revalues the constant portfolio against every history date. asof fixings
/// are injected into the historical snapshots before revaluation.
ProfilePanel build_panel(const Portfolio& p, const HistoryStore& h,
                         const std::vector<Fixing>& asof_fixings, const std::vector<double>& grid,
                         double bucket_dt, const PanelOptions& opts = {});

/// Pearson correlation across dates, bucket by bucket, over date rows
/// [d0, d1]. Buckets where either series has zero variance map to 0.
TermStructure terminal_correlation(const SeriesMatrix& a, const SeriesMatrix& b,
                                   const std::vector<double>& grid, std::size_t d0, std::size_t d1);

/// Per-bucket standard deviation across the date window [d0, d1],
/// 1/n normalization.
TermStructure historical_sd(const SeriesMatrix& s, const std::vector<double>& grid, std::size_t d0,
                            std::size_t d1);

/// Horizon where the instantaneous forward default probabilities of two flat
/// hazard levels cross: log(l1/l2) / (l1 - l2), continuous limit 1/l.
double crossover_tenor(double lambda1, double lambda2);

/// Correlation term structures for one netting set.
struct TradeCorrelations {
    TermStructure rho_reg; // default vs EE
    TermStructure c1, c2, c2_1;
    TermStructure f1, f2, f2_1;
};

/// All correlation and historical-variance term structures for a portfolio.
struct CalibrationSet {
    int schema_version = 1;
    Date asof;
    double grid_dt = 0.25;
    std::vector<double> grid;

    // historical SDs over the recent window
    TermStructure sd_default, sd_surv;
    TermStructure sd_fund_df, sd_fund_carry, sd_fund_df_sq, sd_fund_carry_sq;
    // default SD over the crisis window
    TermStructure sd_default_crisis;

    // per-trade correlation blocks, plus "__net__" for the netted portfolio
    std::map<std::string, TradeCorrelations> trades;

    Date corr_start, corr_end, sd_start, sd_end;
    std::optional<Date> crisis_start, crisis_end;
    std::size_t corr_dates = 0, sd_dates = 0, crisis_dates = 0;

    static constexpr const char* net_key = "__net__";
    const TradeCorrelations& correlations_for(const std::string& trade_id) const;
};

struct CalibrationConfig {
    double grid_dt = 0.25;
    std::optional<Date> asof;       // default: last history date
    std::optional<Date> corr_start; // default: full span
    std::optional<Date> corr_end;
    double sd_window_years = 1.0;   // trailing window ending at asof
    std::optional<Date> crisis_start;
    std::optional<Date> crisis_end;
    PanelOptions panel;
};

/// Full calibration: per-date revaluation of the portfolio and every trade,
/// terminal correlations over the correlation window, default/funding SDs
/// over the trailing window, crisis default SD over the crisis window.
CalibrationSet calibrate(const Portfolio& p, const HistoryStore& h, const CalibrationConfig& cfg);

void write_calibration_file(const std::string& path, const CalibrationSet& cs);
CalibrationSet read_calibration_file(const std::string& path);

/// CSV export of a single term structure: header tau_years,value.
void write_term_structure_csv(const std::string& path, const TermStructure& ts);

} // namespace wwr
