#include "wwr/portfolio.hpp"
#include "wwr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wwr {

const char* to_string(Direction d) {
    return d == Direction::ReceiveFixed ? "ReceiveFixed" : "ReceiveFloat";
}

Direction direction_from_string(const std::string& s) {
    if (s == "ReceiveFixed") return Direction::ReceiveFixed;
    if (s == "ReceiveFloat") return Direction::ReceiveFloat;
    throw DataError("unknown direction '" + s + "', expected ReceiveFixed or ReceiveFloat");
}

void IrsTrade::validate() const {
    if (!(notional > 0.0)) throw DataError("trade " + id + ": notional must be > 0");
    if (start < 0.0 || !(maturity > start))
        throw DataError("trade " + id + ": need 0 <= start < maturity");
    auto ok_freq = [](int f) { return f == 1 || f == 2 || f == 4; };
    if (!ok_freq(fixed_freq) || !ok_freq(float_freq))
        throw DataError("trade " + id + ": frequencies must be in {1, 2, 4}");
    if (!std::isfinite(fixed_rate)) throw DataError("trade " + id + ": bad fixed rate");
}

void Portfolio::validate() const {
    if (trades.empty()) throw DataError("portfolio is empty");
    for (const auto& t : trades) t.validate();
}

double Portfolio::max_maturity() const {
    double m = 0.0;
    for (const auto& t : trades) m = std::max(m, t.maturity);
    return m;
}

Portfolio read_portfolio_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(origin + ": empty portfolio file");
    if (line != "trade_id,direction,notional,fixed_rate,start_years,maturity_years,fixed_freq,float_freq")
        throw DataError(origin + ": bad portfolio header");

    Portfolio p;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[8];
        for (int i = 0; i < 8; ++i)
            if (!std::getline(ss, f[i], ','))
                throw DataError(origin + ":" + std::to_string(lineno) + ": expected 8 fields");
        IrsTrade t;
        t.id = f[0];
        t.direction = direction_from_string(f[1]);
        try {
            t.notional = std::stod(f[2]);
            t.fixed_rate = std::stod(f[3]);
            t.start = std::stod(f[4]);
            t.maturity = std::stod(f[5]);
            t.fixed_freq = std::stoi(f[6]);
            t.float_freq = std::stoi(f[7]);
        } catch (const std::exception&) {
            throw DataError(origin + ":" + std::to_string(lineno) + ": cannot parse numeric fields");
        }
        t.validate();
        p.trades.push_back(std::move(t));
    }
    p.validate();
    return p;
}

Portfolio read_portfolio_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open portfolio file '" + path + "'");
    return read_portfolio_csv(in, path);
}

void write_portfolio_file(const std::string& path, const Portfolio& p) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write portfolio file '" + path + "'");
    out << "trade_id,direction,notional,fixed_rate,start_years,maturity_years,fixed_freq,float_freq\n";
    char buf[160];
    for (const auto& t : p.trades) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g,%d,%d\n", t.id.c_str(),
                      to_string(t.direction), t.notional, t.fixed_rate, t.start, t.maturity,
                      t.fixed_freq, t.float_freq);
        out << buf;
    }
}

} // namespace wwr
