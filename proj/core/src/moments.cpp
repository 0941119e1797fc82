#include "wwr/moments.hpp"
#include "wwr/errors.hpp"

#include <cmath>
#include <string>

namespace wwr {

namespace {

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

} // namespace

double product_mean_2(const MomentPair& p) {
    return p.mean_a * p.mean_b + p.rho * p.sd_a * p.sd_b;
}

double product_mean_3(const TripleMoments& t, Pivot pivot) {
    const double eee = t.mean_a * t.mean_b * t.mean_c;
    switch (pivot) {
    case Pivot::A:
        return eee + t.mean_a * t.rho_bc * t.sd_b * t.sd_c + t.rho_a_bc * t.sd_a * t.sd_bc;
    case Pivot::B:
        return eee + t.mean_b * t.rho_ac * t.sd_a * t.sd_c + t.rho_b_ac * t.sd_b * t.sd_ac;
    case Pivot::C:
        return eee + t.mean_c * t.rho_ab * t.sd_a * t.sd_b + t.rho_c_ab * t.sd_c * t.sd_ab;
    }
    throw DomainError("product_mean_3: bad pivot");
}

double var_product(const MomentPair& p, double rho_sq, double sd_a2, double sd_b2,
                   double mean_a2, double mean_b2, double abs_tol) {
    const double cross = p.rho * p.sd_a * p.sd_b + p.mean_a * p.mean_b;
    const double v = rho_sq * sd_a2 * sd_b2 + mean_a2 * mean_b2 - cross * cross;
    if (v < -abs_tol)
        throw DataError("var_product: inconsistent moments, variance " + std::to_string(v));
    return v < 0.0 ? 0.0 : v;
}

double normal_plus_moment(double mu, double sigma, int order) {
    if (order < 1 || order > 4)
        throw DomainError("normal_plus_moment: order must be in 1..4, got " + std::to_string(order));
    if (!(sigma > 0.0))
        throw DomainError("normal_plus_moment: sigma must be > 0");
    const double h = mu / sigma;
    const double phi = normal_pdf(h);
    const double cdf = normal_cdf(h);
    // M_k = mu M_{k-1} + (k-1) sigma^2 M_{k-2},  M_0 = Phi(h), M_1 = mu Phi + sigma phi
    double m_prev = cdf;
    double m = mu * cdf + sigma * phi;
    for (int k = 2; k <= order; ++k) {
        const double next = mu * m + (k - 1) * sigma * sigma * m_prev;
        m_prev = m;
        m = next;
    }
    return m;
}

double normal_moment(double mu, double sigma, int order) {
    const double s2 = sigma * sigma;
    switch (order) {
    case 1: return mu;
    case 2: return mu * mu + s2;
    case 3: return mu * mu * mu + 3.0 * mu * s2;
    case 4: return mu * mu * mu * mu + 6.0 * mu * mu * s2 + 3.0 * s2 * s2;
    }
    throw DomainError("normal_moment: order must be in 1..4, got " + std::to_string(order));
}

double SampleStats::mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("SampleStats::mean: empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

namespace {

// a constant series has zero variance by definition, independent of
// summation roundoff
bool is_constant(std::span<const double> x) {
    for (double v : x)
        if (v != x.front()) return false;
    return true;
}

} // namespace

double SampleStats::sd(std::span<const double> x) {
    if (x.empty()) throw DomainError("SampleStats::sd: empty sample");
    if (is_constant(x)) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size()));
}

double SampleStats::correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("SampleStats::correlation: size mismatch");
    if (x.size() < 2) throw DomainError("SampleStats::correlation: need >= 2 points");
    if (is_constant(x) || is_constant(y)) return 0.0; // degenerate convention
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    double r = sxy / std::sqrt(sxx * syy);
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

} // namespace wwr
