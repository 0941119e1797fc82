#pragma once

#include "wwr/portfolio.hpp"
#include "wwr/snapshot.hpp"

#include <vector>

namespace wwr {

enum class OptionKind { Payer, Receiver };

/// Bachelier swaption value: annuity * ((F-K) Phi(d) + sigma sqrt(T) phi(d))
/// for a payer, d = (F-K) / (sigma sqrt(T)); degenerates to intrinsic when
/// sigma sqrt(T) = 0.
double bachelier_swaption(double forward, double strike, double normal_vol, double expiry,
                          double annuity, OptionKind kind);

/// Forward swap annuity and rate seen from horizon tau, discounted to today
/// (frozen curve). annuity = sum of fixed accruals alpha_i * df(t_i) over
/// payments strictly after tau; rate = (df(float period start) - df(T)) / annuity.
struct ForwardSwap {
    double annuity = 0.0;     // discounted to today
    double rate = 0.0;        // forward swap rate
    double value = 0.0;       // discounted forward value of the trade (signed)
    double rate_sens = 0.0;   // d(value)/d(rate): signed, +/- notional * annuity
    double underlying_tenor = 0.0;
};
ForwardSwap forward_swap(const IrsTrade& trade, const MarketSnapshot& snap, double tau);

/// Present value of the trade on the snapshot date.
double swap_value(const IrsTrade& trade, const MarketSnapshot& snap);

/// Discounted exposure statistics of the netted portfolio on a horizon grid.
/// At each tau the discounted net value D_r(tau) Pi(tau) is Normal with mean
/// equal to today's forward discounted value and SD from the ATM normal vol
/// (frozen annuity); all statistics are closed-form normal / positive-part
/// moments up to order 4.
struct ExposureProfile {
    std::vector<double> grid;       // horizons tau
    std::vector<double> ee;         // E[D Pi^+]
    std::vector<double> ene;        // E[D Pi]
    std::vector<double> sd_pos;     // SD(D Pi^+)
    std::vector<double> sd_net;     // SD(D Pi)
    std::vector<double> m2_pos_sq;  // E[(D Pi^+)^2]
    std::vector<double> sd_pos_sq;  // SD((D Pi^+)^2)
    std::vector<double> m2_net_sq;  // E[(D Pi)^2]
    std::vector<double> sd_net_sq;  // SD((D Pi)^2)

    std::size_t size() const { return grid.size(); }
};

/// Uniform grid 0, dt, 2 dt, ..., horizon (inclusive, horizon appended if
/// not on the lattice).
std::vector<double> uniform_grid(double horizon, double dt);

ExposureProfile exposure_profile(const Portfolio& p, const MarketSnapshot& snap,
                                 const std::vector<double>& grid);

} // namespace wwr
