#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace wwr {

/// Riskless zero curve, continuously compounded rates on ACT/365 year
/// fractions. Interpolation is log-linear on discount factors (piecewise
/// constant instantaneous forward); extrapolation keeps the last segment's
/// forward flat.
class ZeroCurve {
public:
    struct Pillar {
        double tenor;     // years, strictly increasing, > 0
        double zero_rate; // cc, decimal / yr
    };

    explicit ZeroCurve(std::vector<Pillar> pillars);

    double discount_factor(double t) const;
    /// -log(df(t)), piecewise linear in t.
    double neg_log_df(double t) const;
    /// Instantaneous forward on the segment containing t (right-continuous).
    double forward(double t) const;

    const std::vector<Pillar>& pillars() const { return pillars_; }
    /// Segment boundaries, for exact piecewise integration.
    std::vector<double> breakpoints() const;

private:
    std::vector<Pillar> pillars_;
    std::vector<double> neg_log_df_; // z_i * t_i at each pillar
};

/// Par CDS spread curve plus recovery assumption.
struct CdsCurve {
    struct Pillar {
        double tenor;  // years
        double spread; // decimal / yr
    };
    std::vector<Pillar> pillars;
    double recovery = 0.4; // in [0, 1)

    void validate() const;
};

/// Funding spread term structure. Same layout as a CDS curve; the quoted
/// spreads are read directly as s_F(t), piecewise constant per segment.
using FundingCurve = CdsCurve;

/// Piecewise-constant hazard curve. Segment k applies on
/// (tenor_{k-1}, tenor_k]; the last hazard extends flat.
class HazardCurve {
public:
    struct Segment {
        double tenor;  // segment right edge, years
        double hazard; // decimal / yr, >= 0
    };

    HazardCurve(std::vector<Segment> segments, double lgd);

    double survival(double t) const;
    /// survival(tau) - survival(tau + dt); requires tau >= 0, dt > 0.
    double forward_default_prob(double tau, double dt) const;
    /// Hazard on the segment containing t (right-continuous at 0).
    double hazard(double t) const;
    double integrated_hazard(double t) const;

    double lgd() const { return lgd_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::vector<double> breakpoints() const;

private:
    std::vector<Segment> segments_;
    std::vector<double> cum_hazard_; // integrated hazard at segment edges
    double lgd_;
};

/// Spread curve read as a piecewise-constant instantaneous spread; used for
/// the funding leg where D_{s_F}(t) = exp(-int_0^t s_F).
class SpreadCurve {
public:
    explicit SpreadCurve(const FundingCurve& quotes);

    double spread(double t) const;
    double integrated(double t) const;
    /// exp(-int_0^t s)
    double discount(double t) const { return integrated(t) == 0.0 ? 1.0 : std::exp(-integrated(t)); }

private:
    HazardCurve levels_; // reuse the piecewise-constant machinery, lgd unused
};

/// ATM normal (Bachelier) volatility surface on an (expiry, underlying
/// tenor) grid. Bilinear inside the hull, flat beyond it.
class NormalVolSurface {
public:
    NormalVolSurface(std::vector<double> expiries, std::vector<double> tenors,
                     std::vector<double> vols /* row-major expiry x tenor */);

    double vol(double expiry, double tenor) const;

    const std::vector<double>& expiries() const { return expiries_; }
    const std::vector<double>& tenors() const { return tenors_; }
    const std::vector<double>& values() const { return vols_; }

private:
    std::vector<double> expiries_;
    std::vector<double> tenors_;
    std::vector<double> vols_;
};

/// Bootstraps a piecewise-constant hazard curve from par CDS spreads under
/// the continuous-premium approximation. Each pillar's par equation
///   s_k * rpv01(0, T_k) = lgd * integral(lambda * S * D)
/// is solved segment by segment; a single flat pillar reduces to the credit
/// triangle lambda = s / lgd. Throws CalibrationError naming the pillar if a
/// spread would require a negative hazard.
HazardCurve bootstrap_hazard(const CdsCurve& cds, const ZeroCurve& discount);

/// Par spread repricing of a calibrated hazard curve (continuous premium),
/// exact piecewise integration. Used by round-trip tests.
double cds_par_spread(const HazardCurve& hazard, const ZeroCurve& discount, double maturity);

namespace detail {
/// int_a^b exp(-(f + lambda) (t - a)) dt with stable small-x handling;
/// returns the integral of the normalized decay, i.e. (1 - e^{-x h}) / x
/// with x = f + lambda, h = b - a.
double decay_integral(double x, double h);
} // namespace detail

} // namespace wwr
