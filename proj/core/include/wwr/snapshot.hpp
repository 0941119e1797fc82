#pragma once

#include "wwr/curves.hpp"
#include "wwr/dates.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wwr {

struct Fixing {
    double index_tenor = 0.0; // years, e.g. 0.5 for a 6m index
    Date fixing_date;
    double rate = 0.0;
};

/// One dated set of market curves. Immutable after construction; snapshots
/// are revalued concurrently during calibration.
struct MarketSnapshot {
    Date date;
    ZeroCurve zero_curve;
    CdsCurve counterparty_cds;
    FundingCurve funding_cds;
    NormalVolSurface vol_surface;
    std::vector<Fixing> fixings;
    double lgd = 0.6;

    /// Counterparty hazard curve bootstrapped from this snapshot's CDS quotes.
    HazardCurve counterparty_hazard() const;
    SpreadCurve funding_spread() const { return SpreadCurve(funding_cds); }
};

/// Date-ordered snapshot history.
class HistoryStore {
public:
    HistoryStore() = default;
    explicit HistoryStore(std::vector<MarketSnapshot> snapshots);

    const std::vector<MarketSnapshot>& snapshots() const { return snapshots_; }
    std::size_t size() const { return snapshots_.size(); }
    bool empty() const { return snapshots_.empty(); }
    const MarketSnapshot& at(std::size_t i) const { return snapshots_[i]; }
    const MarketSnapshot& front() const { return snapshots_.front(); }
    const MarketSnapshot& back() const { return snapshots_.back(); }

    const MarketSnapshot* find(const Date& d) const;

private:
    std::vector<MarketSnapshot> snapshots_;
};

/// Long-format snapshot CSV:
///   date,record_type,tenor_years,key,value
/// with record_type in {ZERO, CDS_CPTY, CDS_FUND, NVOL, FIXING, META}.
/// NVOL rows use key = underlying tenor in years; FIXING rows use
/// tenor_years = index tenor and key = fixing date; META rows carry
/// recovery / lgd in key with tenor_years empty.
HistoryStore read_snapshot_csv(std::istream& in, const std::string& origin = "<stream>");
HistoryStore read_snapshot_file(const std::string& path);
/// Reads every *.csv in a directory (or a single file path) and merges.
HistoryStore read_history(const std::string& path);

void write_snapshot_csv(std::ostream& out, const HistoryStore& history);
void write_snapshot_file(const std::string& path, const HistoryStore& history);

} // namespace wwr
