#include "wwr/pricing.hpp"
#include "wwr/errors.hpp"
#include "wwr/moments.hpp"

#include <cmath>

namespace wwr {

namespace {

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

} // namespace

double bachelier_swaption(double forward, double strike, double normal_vol, double expiry,
                          double annuity, OptionKind kind) {
    if (normal_vol < 0.0) throw DomainError("bachelier_swaption: vol must be >= 0");
    if (expiry < 0.0) throw DomainError("bachelier_swaption: expiry must be >= 0");
    if (!(annuity > 0.0)) throw DomainError("bachelier_swaption: annuity must be > 0");
    const double omega = (kind == OptionKind::Payer) ? 1.0 : -1.0;
    const double stdev = normal_vol * std::sqrt(expiry);
    if (stdev == 0.0) return annuity * std::max(omega * (forward - strike), 0.0);
    const double d = omega * (forward - strike) / stdev;
    return annuity * (omega * (forward - strike) * normal_cdf(d) + stdev * normal_pdf(d));
}

ForwardSwap forward_swap(const IrsTrade& trade, const MarketSnapshot& snap, double tau) {
    if (tau < 0.0) throw DomainError("forward_swap: tau must be >= 0");
    ForwardSwap out;
    if (tau >= trade.maturity) return out;

    const ZeroCurve& zc = snap.zero_curve;
    const double alpha = 1.0 / trade.fixed_freq;

    // fixed payments strictly after tau
    double annuity = 0.0;
    double t = trade.start;
    while (t < trade.maturity - 1e-9) {
        const double next = std::min(t + alpha, trade.maturity);
        if (next > tau + 1e-12) annuity += (next - t) * zc.discount_factor(next);
        t = next;
    }
    if (annuity <= 0.0) return out;

    // float leg dirty forward value: df at the start of the period containing
    // tau (or the swap start if tau is before it), minus df at maturity
    double float_anchor = trade.start;
    if (tau > trade.start) {
        const double beta = 1.0 / trade.float_freq;
        const double periods = std::floor((tau - trade.start) / beta + 1e-12);
        float_anchor = std::min(trade.start + periods * beta, trade.maturity);
    }
    const double float_value = zc.discount_factor(float_anchor) - zc.discount_factor(trade.maturity);

    const double rate = float_value / annuity;
    const double sign = (trade.direction == Direction::ReceiveFixed) ? 1.0 : -1.0;

    out.annuity = annuity;
    out.rate = rate;
    out.value = sign * trade.notional * annuity * (trade.fixed_rate - rate);
    out.rate_sens = -sign * trade.notional * annuity;
    out.underlying_tenor = trade.maturity - std::max(tau, trade.start);
    return out;
}

double swap_value(const IrsTrade& trade, const MarketSnapshot& snap) {
    trade.validate();
    return forward_swap(trade, snap, 0.0).value;
}

std::vector<double> uniform_grid(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0)) throw DomainError("uniform_grid: need horizon > 0, dt > 0");
    std::vector<double> g;
    const std::size_t n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    g.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.push_back(std::min(i * dt, horizon));
    if (g.back() < horizon) g.push_back(horizon);
    return g;
}

ExposureProfile exposure_profile(const Portfolio& p, const MarketSnapshot& snap,
                                 const std::vector<double>& grid) {
    p.validate();
    ExposureProfile prof;
    prof.grid = grid;
    const std::size_t n = grid.size();
    prof.ee.assign(n, 0.0);
    prof.ene.assign(n, 0.0);
    prof.sd_pos.assign(n, 0.0);
    prof.sd_net.assign(n, 0.0);
    prof.m2_pos_sq.assign(n, 0.0);
    prof.sd_pos_sq.assign(n, 0.0);
    prof.m2_net_sq.assign(n, 0.0);
    prof.sd_net_sq.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double tau = grid[i];
        if (tau < 0.0) throw DomainError("exposure_profile: negative horizon");

        // one rate factor per currency: means add, signed sensitivities add
        double mu = 0.0, sens = 0.0;
        for (const auto& trade : p.trades) {
            if (tau >= trade.maturity) continue;
            const ForwardSwap fs = forward_swap(trade, snap, tau);
            if (fs.annuity <= 0.0) continue;
            const double vol = snap.vol_surface.vol(tau, fs.underlying_tenor);
            mu += fs.value;
            sens += fs.rate_sens * vol * std::sqrt(tau);
        }
        const double sigma = std::fabs(sens);

        if (sigma == 0.0) {
            // deterministic exposure (tau = 0, zero vol, or everything expired)
            const double plus = std::max(mu, 0.0);
            prof.ee[i] = plus;
            prof.ene[i] = mu;
            prof.m2_pos_sq[i] = plus * plus;
            prof.m2_net_sq[i] = mu * mu;
            continue;
        }

        const double m1p = normal_plus_moment(mu, sigma, 1);
        const double m2p = normal_plus_moment(mu, sigma, 2);
        const double m4p = normal_plus_moment(mu, sigma, 4);
        prof.ee[i] = m1p;
        prof.ene[i] = mu;
        prof.sd_pos[i] = std::sqrt(std::max(0.0, m2p - m1p * m1p));
        prof.sd_net[i] = sigma;
        prof.m2_pos_sq[i] = m2p;
        prof.sd_pos_sq[i] = std::sqrt(std::max(0.0, m4p - m2p * m2p));
        const double m2 = normal_moment(mu, sigma, 2);
        const double m4 = normal_moment(mu, sigma, 4);
        prof.m2_net_sq[i] = m2;
        prof.sd_net_sq[i] = std::sqrt(std::max(0.0, m4 - m2 * m2));
    }
    return prof;
}

} // namespace wwr
