#pragma once

#include "wwr/portfolio.hpp"
#include "wwr/snapshot.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wwr {

/// One regime of the synthetic market: Gaussian random walks with drift for
/// the rate and counterparty CDS levels; the funding spread tracks the CDS
/// level with a beta plus its own idiosyncratic walk.
struct RegimeSegment {
    Date start, end;              // [start, end)
    double rate_drift = 0.0;      // /yr, parallel shift of all zero pillars
    double rate_vol = 0.0;        // /yr
    double cds_drift = 0.0;       // /yr
    double cds_vol = 0.0;         // /yr
    double funding_beta = 0.0;    // funding response to the CDS shift
    double funding_idio_vol = 0.0;
};

struct RegimeConfig {
    Date start_date, end_date;
    int business_days_per_year = 252;
    std::uint64_t seed = 0;
    std::vector<RegimeSegment> segments;

    std::vector<ZeroCurve::Pillar> base_zero;
    std::vector<CdsCurve::Pillar> base_cds;
    std::vector<CdsCurve::Pillar> base_funding;
    std::vector<double> vol_expiries;
    std::vector<double> vol_tenors;
    double atm_normal_vol = 0.006;

    double recovery = 0.4;
    double lgd = 0.6;
    double rate_floor = -0.005;
    double spread_floor = 0.0005;
    double fixing_index_tenor = 0.5;

    void validate() const;
    std::size_t n_dates() const;
};

/// Built-in default: five years at 252 dates/yr with a one-year crisis
/// segment (rates 4.5% -> 1.5%, CDS +500bp) inside a calmer span.
RegimeConfig default_regime_config();

RegimeConfig load_regime_config(const std::string& path);
void write_regime_config(const std::string& path, const RegimeConfig& cfg);

/// Canonical JSON dump (used for the manifest hash).
std::string regime_config_json(const RegimeConfig& cfg);

/// One snapshot per business day, deterministic in the seed.
HistoryStore generate(const RegimeConfig& cfg);

/// Default 40-trade book: tenors x strikes x directions, unit notionals.
Portfolio default_portfolio_grid();

} // namespace wwr
