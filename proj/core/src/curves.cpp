#include "wwr/curves.hpp"
#include "wwr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wwr {

namespace {

void require_non_negative_time(double t, const char* who) {
    if (t < 0.0 || !std::isfinite(t))
        throw DomainError(std::string(who) + ": time must be finite and >= 0, got " + std::to_string(t));
}

} // namespace

// ---------------------------------------------------------------------------
// ZeroCurve

ZeroCurve::ZeroCurve(std::vector<Pillar> pillars) : pillars_(std::move(pillars)) {
    if (pillars_.empty()) throw DataError("ZeroCurve: no pillars");
    double prev = 0.0;
    for (const auto& p : pillars_) {
        if (!(p.tenor > prev) || !std::isfinite(p.tenor))
            throw DataError("ZeroCurve: tenors must be strictly increasing and > 0");
        if (!std::isfinite(p.zero_rate))
            throw DataError("ZeroCurve: non-finite zero rate");
        prev = p.tenor;
    }
    neg_log_df_.reserve(pillars_.size());
    for (const auto& p : pillars_) neg_log_df_.push_back(p.zero_rate * p.tenor);
}

double ZeroCurve::neg_log_df(double t) const {
    require_non_negative_time(t, "ZeroCurve::discount_factor");
    if (t == 0.0) return 0.0;
    // piecewise linear through (0, 0) and (t_i, z_i t_i); flat forward beyond
    const auto& ts = pillars_;
    if (t <= ts.front().tenor) return neg_log_df_.front() * (t / ts.front().tenor);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (t <= ts[i].tenor) {
            const double w = (t - ts[i - 1].tenor) / (ts[i].tenor - ts[i - 1].tenor);
            return neg_log_df_[i - 1] + w * (neg_log_df_[i] - neg_log_df_[i - 1]);
        }
    }
    return neg_log_df_.back() + forward(ts.back().tenor + 1.0) * (t - ts.back().tenor);
}

double ZeroCurve::discount_factor(double t) const { return std::exp(-neg_log_df(t)); }

double ZeroCurve::forward(double t) const {
    require_non_negative_time(t, "ZeroCurve::forward");
    const auto& ts = pillars_;
    if (t < ts.front().tenor || ts.size() == 1) return neg_log_df_.front() / ts.front().tenor;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (t < ts[i].tenor)
            return (neg_log_df_[i] - neg_log_df_[i - 1]) / (ts[i].tenor - ts[i - 1].tenor);
    }
    const std::size_t n = ts.size();
    return (neg_log_df_[n - 1] - neg_log_df_[n - 2]) / (ts[n - 1].tenor - ts[n - 2].tenor);
}

std::vector<double> ZeroCurve::breakpoints() const {
    std::vector<double> b;
    b.reserve(pillars_.size() + 1);
    b.push_back(0.0);
    for (const auto& p : pillars_) b.push_back(p.tenor);
    return b;
}

// ---------------------------------------------------------------------------
// CdsCurve

void CdsCurve::validate() const {
    if (pillars.empty()) throw DataError("CdsCurve: no pillars");
    if (recovery < 0.0 || recovery >= 1.0) throw DataError("CdsCurve: recovery must be in [0, 1)");
    double prev = 0.0;
    for (const auto& p : pillars) {
        if (!(p.tenor > prev)) throw DataError("CdsCurve: tenors must be strictly increasing and > 0");
        if (p.spread < 0.0 || !std::isfinite(p.spread)) throw DataError("CdsCurve: spreads must be >= 0");
        prev = p.tenor;
    }
}

// ---------------------------------------------------------------------------
// HazardCurve

HazardCurve::HazardCurve(std::vector<Segment> segments, double lgd)
    : segments_(std::move(segments)), lgd_(lgd) {
    if (segments_.empty()) throw DataError("HazardCurve: no segments");
    if (!(lgd_ > 0.0) || lgd_ > 1.0) throw DataError("HazardCurve: lgd must be in (0, 1]");
    double prev = 0.0;
    cum_hazard_.reserve(segments_.size());
    double cum = 0.0;
    for (const auto& s : segments_) {
        if (!(s.tenor > prev)) throw DataError("HazardCurve: tenors must be strictly increasing and > 0");
        if (s.hazard < 0.0 || !std::isfinite(s.hazard)) throw DataError("HazardCurve: hazards must be >= 0");
        cum += s.hazard * (s.tenor - prev);
        cum_hazard_.push_back(cum);
        prev = s.tenor;
    }
}

double HazardCurve::integrated_hazard(double t) const {
    require_non_negative_time(t, "HazardCurve::survival");
    double prev_edge = 0.0, prev_cum = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (t <= segments_[i].tenor)
            return prev_cum + segments_[i].hazard * (t - prev_edge);
        prev_edge = segments_[i].tenor;
        prev_cum = cum_hazard_[i];
    }
    return prev_cum + segments_.back().hazard * (t - prev_edge);
}

double HazardCurve::survival(double t) const { return std::exp(-integrated_hazard(t)); }

double HazardCurve::forward_default_prob(double tau, double dt) const {
    require_non_negative_time(tau, "HazardCurve::forward_default_prob");
    if (!(dt > 0.0)) throw DomainError("HazardCurve::forward_default_prob: dt must be > 0");
    return survival(tau) - survival(tau + dt);
}

double HazardCurve::hazard(double t) const {
    require_non_negative_time(t, "HazardCurve::hazard");
    for (const auto& s : segments_)
        if (t < s.tenor) return s.hazard;
    return segments_.back().hazard;
}

std::vector<double> HazardCurve::breakpoints() const {
    std::vector<double> b;
    b.reserve(segments_.size() + 1);
    b.push_back(0.0);
    for (const auto& s : segments_) b.push_back(s.tenor);
    return b;
}

// ---------------------------------------------------------------------------
// SpreadCurve

namespace {
std::vector<HazardCurve::Segment> spread_segments(const FundingCurve& quotes) {
    quotes.validate();
    std::vector<HazardCurve::Segment> segs;
    segs.reserve(quotes.pillars.size());
    for (const auto& p : quotes.pillars) segs.push_back({p.tenor, p.spread});
    return segs;
}
} // namespace

SpreadCurve::SpreadCurve(const FundingCurve& quotes) : levels_(spread_segments(quotes), 1.0) {}

double SpreadCurve::spread(double t) const { return levels_.hazard(t); }
double SpreadCurve::integrated(double t) const { return levels_.integrated_hazard(t); }

// ---------------------------------------------------------------------------
// NormalVolSurface

NormalVolSurface::NormalVolSurface(std::vector<double> expiries, std::vector<double> tenors,
                                   std::vector<double> vols)
    : expiries_(std::move(expiries)), tenors_(std::move(tenors)), vols_(std::move(vols)) {
    if (expiries_.empty() || tenors_.empty()) throw DataError("NormalVolSurface: empty axis");
    if (vols_.size() != expiries_.size() * tenors_.size())
        throw DataError("NormalVolSurface: grid size mismatch");
    if (!std::is_sorted(expiries_.begin(), expiries_.end()) ||
        !std::is_sorted(tenors_.begin(), tenors_.end()))
        throw DataError("NormalVolSurface: axes must be increasing");
    for (double v : vols_)
        if (v < 0.0 || !std::isfinite(v)) throw DataError("NormalVolSurface: vols must be >= 0");
}

namespace {
// clamped bracketing index + weight for bilinear lookup with flat tails
void bracket(const std::vector<double>& axis, double x, std::size_t& i0, double& w) {
    if (axis.size() == 1 || x <= axis.front()) { i0 = 0; w = 0.0; return; }
    if (x >= axis.back()) { i0 = axis.size() - 2; w = 1.0; return; }
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    i0 = static_cast<std::size_t>(it - axis.begin()) - 1;
    w = (x - axis[i0]) / (axis[i0 + 1] - axis[i0]);
}
} // namespace

double NormalVolSurface::vol(double expiry, double tenor) const {
    std::size_t ie = 0, it = 0;
    double we = 0.0, wt = 0.0;
    bracket(expiries_, expiry, ie, we);
    bracket(tenors_, tenor, it, wt);
    const std::size_t nt = tenors_.size();
    const std::size_t ie1 = (expiries_.size() == 1) ? ie : ie + 1;
    const std::size_t it1 = (nt == 1) ? it : it + 1;
    const double v00 = vols_[ie * nt + it], v01 = vols_[ie * nt + it1];
    const double v10 = vols_[ie1 * nt + it], v11 = vols_[ie1 * nt + it1];
    return (1.0 - we) * ((1.0 - wt) * v00 + wt * v01) + we * ((1.0 - wt) * v10 + wt * v11);
}

// ---------------------------------------------------------------------------
// CDS bootstrap (continuous premium approximation)

namespace detail {

double decay_integral(double x, double h) {
    const double xh = x * h;
    if (std::fabs(xh) < 1e-12) return h * (1.0 - 0.5 * xh);
    return -std::expm1(-xh) / x;
}

} // namespace detail

namespace {

// int_a^b S(t) D(t) dt for constant hazard over [a, b], where S(a)D(a) is
// passed in and the riskless forward is piecewise constant between zero
// pillars. Also returns S(b)D(b) through the in/out parameter.
double risky_annuity_piece(const ZeroCurve& zero, double a, double b, double hazard,
                           double& sd_at_a) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double bp : zero.breakpoints())
        if (bp > a && bp < b) cuts.push_back(bp);
    cuts.push_back(b);
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double x = zero.forward(lo) + hazard;
        integral += sd_at_a * detail::decay_integral(x, hi - lo);
        sd_at_a *= std::exp(-x * (hi - lo));
    }
    return integral;
}

} // namespace

HazardCurve bootstrap_hazard(const CdsCurve& cds, const ZeroCurve& discount) {
    cds.validate();
    const double lgd = 1.0 - cds.recovery;
    std::vector<HazardCurve::Segment> segments;
    segments.reserve(cds.pillars.size());

    double annuity_prev = 0.0;    // int_0^{T_{k-1}} S D
    double protection_prev = 0.0; // lgd int_0^{T_{k-1}} lambda S D
    double sd_prev = 1.0;         // S D at T_{k-1}
    double t_prev = 0.0;

    for (std::size_t k = 0; k < cds.pillars.size(); ++k) {
        const double t_k = cds.pillars[k].tenor;
        const double s_k = cds.pillars[k].spread;

        // par residual: premium leg minus protection leg at maturity T_k
        auto residual = [&](double lambda) {
            double sd = sd_prev;
            const double q = risky_annuity_piece(discount, t_prev, t_k, lambda, sd);
            return s_k * (annuity_prev + q) - (protection_prev + lgd * lambda * q);
        };

        double lambda_k;
        const double r0 = residual(0.0);
        if (r0 == 0.0) {
            lambda_k = 0.0;
        } else if (r0 < 0.0) {
            throw CalibrationError("bootstrap_hazard: pillar " + std::to_string(k + 1) + " (tenor " +
                                   std::to_string(t_k) + "y, spread " + std::to_string(s_k) +
                                   ") requires a negative hazard");
        } else {
            double lo = 0.0, hi = 1.0;
            while (residual(hi) > 0.0) {
                hi *= 2.0;
                if (hi > 1e4)
                    throw CalibrationError("bootstrap_hazard: pillar " + std::to_string(k + 1) +
                                           " spread unattainable (hazard out of range)");
            }
            for (int it = 0; it < 200 && (hi - lo) > 1e-16 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                (residual(mid) > 0.0 ? lo : hi) = mid;
            }
            lambda_k = 0.5 * (lo + hi);
        }

        segments.push_back({t_k, lambda_k});
        double sd = sd_prev;
        const double q = risky_annuity_piece(discount, t_prev, t_k, lambda_k, sd);
        annuity_prev += q;
        protection_prev += lgd * lambda_k * q;
        sd_prev = sd;
        t_prev = t_k;
    }
    return HazardCurve(std::move(segments), lgd);
}

double cds_par_spread(const HazardCurve& hazard, const ZeroCurve& discount, double maturity) {
    require_non_negative_time(maturity, "cds_par_spread");
    if (maturity == 0.0) throw DomainError("cds_par_spread: maturity must be > 0");
    std::vector<double> cuts{0.0};
    for (double bp : hazard.breakpoints())
        if (bp > 0.0 && bp < maturity) cuts.push_back(bp);
    cuts.push_back(maturity);
    std::sort(cuts.begin(), cuts.end());

    double annuity = 0.0, protection = 0.0, sd = 1.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lambda = hazard.hazard(cuts[i]);
        double sd_in = sd;
        const double q = risky_annuity_piece(discount, cuts[i], cuts[i + 1], lambda, sd_in);
        annuity += q;
        protection += hazard.lgd() * lambda * q;
        sd = sd_in;
    }
    return protection / annuity;
}

} // namespace wwr
