#include "wwr/snapshot.hpp"
#include "wwr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace wwr {

HazardCurve MarketSnapshot::counterparty_hazard() const {
    return bootstrap_hazard(counterparty_cds, zero_curve);
}

HistoryStore::HistoryStore(std::vector<MarketSnapshot> snapshots) : snapshots_(std::move(snapshots)) {
    std::sort(snapshots_.begin(), snapshots_.end(),
              [](const MarketSnapshot& a, const MarketSnapshot& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < snapshots_.size(); ++i)
        if (!(snapshots_[i - 1].date < snapshots_[i].date))
            throw DataError("HistoryStore: duplicate snapshot date " + snapshots_[i].date.to_string());
}

const MarketSnapshot* HistoryStore::find(const Date& d) const {
    auto it = std::lower_bound(snapshots_.begin(), snapshots_.end(), d,
                               [](const MarketSnapshot& s, const Date& x) { return s.date < x; });
    if (it == snapshots_.end() || !(it->date == d)) return nullptr;
    return &*it;
}

// ---------------------------------------------------------------------------
// CSV parsing

namespace {

struct RawRow {
    std::string record_type;
    std::string tenor;
    std::string key;
    std::string value;
};

double parse_number(const std::string& s, const std::string& what, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(origin + ": cannot parse " + what + " from '" + s + "'");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

MarketSnapshot build_snapshot(const Date& date, const std::vector<RawRow>& rows,
                              const std::string& origin) {
    std::vector<ZeroCurve::Pillar> zero;
    CdsCurve cpty, fund;
    std::vector<double> vol_expiries, vol_tenors;
    std::map<std::pair<double, double>, double> vol_cells;
    std::vector<Fixing> fixings;
    double lgd = 0.6;
    bool lgd_given = false, recovery_given = false;
    double recovery = 0.4;

    for (const auto& r : rows) {
        if (r.record_type == "ZERO") {
            zero.push_back({parse_number(r.tenor, "ZERO tenor", origin),
                            parse_number(r.value, "ZERO rate", origin)});
        } else if (r.record_type == "CDS_CPTY") {
            cpty.pillars.push_back({parse_number(r.tenor, "CDS_CPTY tenor", origin),
                                    parse_number(r.value, "CDS_CPTY spread", origin)});
        } else if (r.record_type == "CDS_FUND") {
            fund.pillars.push_back({parse_number(r.tenor, "CDS_FUND tenor", origin),
                                    parse_number(r.value, "CDS_FUND spread", origin)});
        } else if (r.record_type == "NVOL") {
            const double e = parse_number(r.tenor, "NVOL expiry", origin);
            const double u = parse_number(r.key, "NVOL underlying tenor", origin);
            vol_cells[{e, u}] = parse_number(r.value, "NVOL vol", origin);
        } else if (r.record_type == "FIXING") {
            Fixing f;
            f.index_tenor = parse_number(r.tenor, "FIXING index tenor", origin);
            f.fixing_date = Date::parse(r.key);
            f.rate = parse_number(r.value, "FIXING rate", origin);
            fixings.push_back(f);
        } else if (r.record_type == "META") {
            if (r.key == "lgd") {
                lgd = parse_number(r.value, "META lgd", origin);
                lgd_given = true;
            } else if (r.key == "recovery") {
                recovery = parse_number(r.value, "META recovery", origin);
                recovery_given = true;
            } else {
                throw DataError(origin + ": unknown META key '" + r.key + "'");
            }
        } else {
            throw DataError(origin + ": unknown record_type '" + r.record_type + "'");
        }
    }

    if (zero.empty()) throw DataError(origin + ": snapshot " + date.to_string() + " has no ZERO rows");
    if (cpty.pillars.empty())
        throw DataError(origin + ": snapshot " + date.to_string() + " has no CDS_CPTY rows");
    if (fund.pillars.empty())
        throw DataError(origin + ": snapshot " + date.to_string() + " has no CDS_FUND rows");
    if (vol_cells.empty())
        throw DataError(origin + ": snapshot " + date.to_string() + " has no NVOL rows");

    if (recovery_given && !lgd_given) lgd = 1.0 - recovery;
    if (lgd_given && !recovery_given) recovery = 1.0 - lgd;
    if (lgd_given && recovery_given && std::fabs(recovery + lgd - 1.0) > 1e-12)
        throw DataError(origin + ": snapshot " + date.to_string() + " has recovery " +
                        std::to_string(recovery) + " and lgd " + std::to_string(lgd) +
                        " that do not sum to 1");
    cpty.recovery = recovery;
    fund.recovery = recovery;

    // assemble the rectangular vol grid
    for (const auto& [k, v] : vol_cells) {
        vol_expiries.push_back(k.first);
        vol_tenors.push_back(k.second);
    }
    std::sort(vol_expiries.begin(), vol_expiries.end());
    vol_expiries.erase(std::unique(vol_expiries.begin(), vol_expiries.end()), vol_expiries.end());
    std::sort(vol_tenors.begin(), vol_tenors.end());
    vol_tenors.erase(std::unique(vol_tenors.begin(), vol_tenors.end()), vol_tenors.end());
    std::vector<double> vols(vol_expiries.size() * vol_tenors.size(), -1.0);
    for (const auto& [k, v] : vol_cells) {
        const auto ie = std::lower_bound(vol_expiries.begin(), vol_expiries.end(), k.first) -
                        vol_expiries.begin();
        const auto it = std::lower_bound(vol_tenors.begin(), vol_tenors.end(), k.second) -
                        vol_tenors.begin();
        vols[static_cast<std::size_t>(ie) * vol_tenors.size() + static_cast<std::size_t>(it)] = v;
    }
    for (double v : vols)
        if (v < 0.0)
            throw DataError(origin + ": snapshot " + date.to_string() + " has an incomplete NVOL grid");

    std::sort(zero.begin(), zero.end(), [](auto& a, auto& b) { return a.tenor < b.tenor; });
    auto by_tenor = [](auto& a, auto& b) { return a.tenor < b.tenor; };
    std::sort(cpty.pillars.begin(), cpty.pillars.end(), by_tenor);
    std::sort(fund.pillars.begin(), fund.pillars.end(), by_tenor);
    cpty.validate();
    fund.validate();

    return MarketSnapshot{date, ZeroCurve(std::move(zero)), std::move(cpty), std::move(fund),
                          NormalVolSurface(std::move(vol_expiries), std::move(vol_tenors), std::move(vols)),
                          std::move(fixings), lgd};
}

} // namespace

HistoryStore read_snapshot_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(origin + ": empty snapshot file");
    if (split_csv_line(line) != std::vector<std::string>{"date", "record_type", "tenor_years", "key", "value"})
        throw DataError(origin + ": bad header, expected date,record_type,tenor_years,key,value");

    std::map<Date, std::vector<RawRow>> by_date;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw DataError(origin + ":" + std::to_string(lineno) + ": expected 5 fields, got " +
                            std::to_string(fields.size()));
        by_date[Date::parse(fields[0])].push_back(RawRow{fields[1], fields[2], fields[3], fields[4]});
    }

    std::vector<MarketSnapshot> snaps;
    snaps.reserve(by_date.size());
    for (const auto& [date, rows] : by_date) snaps.push_back(build_snapshot(date, rows, origin));
    return HistoryStore(std::move(snaps));
}

HistoryStore read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open snapshot file '" + path + "'");
    return read_snapshot_csv(in, path);
}

HistoryStore read_history(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw DataError("history path '" + path + "' does not exist");
    if (fs::is_regular_file(path)) return read_snapshot_file(path);

    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
    if (files.empty()) throw DataError("history directory '" + path + "' contains no .csv files");
    std::sort(files.begin(), files.end());

    std::vector<MarketSnapshot> all;
    for (const auto& f : files) {
        HistoryStore h = read_snapshot_file(f);
        for (const auto& s : h.snapshots()) all.push_back(s);
    }
    return HistoryStore(std::move(all));
}

// ---------------------------------------------------------------------------
// CSV writing

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_snapshot_csv(std::ostream& out, const HistoryStore& history) {
    out << "date,record_type,tenor_years,key,value\n";
    for (const auto& s : history.snapshots()) {
        const std::string d = s.date.to_string();
        for (const auto& p : s.zero_curve.pillars())
            out << d << ",ZERO," << fmt(p.tenor) << ",," << fmt(p.zero_rate) << "\n";
        for (const auto& p : s.counterparty_cds.pillars)
            out << d << ",CDS_CPTY," << fmt(p.tenor) << ",," << fmt(p.spread) << "\n";
        for (const auto& p : s.funding_cds.pillars)
            out << d << ",CDS_FUND," << fmt(p.tenor) << ",," << fmt(p.spread) << "\n";
        const auto& vs = s.vol_surface;
        for (std::size_t i = 0; i < vs.expiries().size(); ++i)
            for (std::size_t j = 0; j < vs.tenors().size(); ++j)
                out << d << ",NVOL," << fmt(vs.expiries()[i]) << "," << fmt(vs.tenors()[j]) << ","
                    << fmt(vs.values()[i * vs.tenors().size() + j]) << "\n";
        for (const auto& f : s.fixings)
            out << d << ",FIXING," << fmt(f.index_tenor) << "," << f.fixing_date.to_string() << ","
                << fmt(f.rate) << "\n";
        out << d << ",META,,recovery," << fmt(s.counterparty_cds.recovery) << "\n";
        out << d << ",META,,lgd," << fmt(s.lgd) << "\n";
    }
}

void write_snapshot_file(const std::string& path, const HistoryStore& history) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write snapshot file '" + path + "'");
    write_snapshot_csv(out, history);
}

} // namespace wwr
