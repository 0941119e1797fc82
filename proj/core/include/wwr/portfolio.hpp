#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wwr {

enum class Direction { ReceiveFixed, ReceiveFloat };

const char* to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Vanilla fixed-float swap held constant across revaluation dates.
struct IrsTrade {
    std::string id;
    Direction direction = Direction::ReceiveFixed;
    double notional = 0.0;   // > 0
    double fixed_rate = 0.0; // decimal
    double start = 0.0;      // years, >= 0
    double maturity = 0.0;   // years, > start
    int fixed_freq = 1;      // payments / yr, in {1, 2, 4}
    int float_freq = 2;

    void validate() const;
};

/// Single netting set with one counterparty.
struct Portfolio {
    std::vector<IrsTrade> trades;
    std::string counterparty = "CPTY";

    void validate() const;
    double max_maturity() const;
};

/// Portfolio CSV:
///   trade_id,direction,notional,fixed_rate,start_years,maturity_years,fixed_freq,float_freq
Portfolio read_portfolio_csv(std::istream& in, const std::string& origin = "<stream>");
Portfolio read_portfolio_file(const std::string& path);
void write_portfolio_file(const std::string& path, const Portfolio& p);

} // namespace wwr
