#include "wwr/oracle.hpp"
#include "wwr/accounting.hpp"
#include "wwr/errors.hpp"
#include "wwr/moments.hpp"
#include "wwr/regulatory.hpp"

#include <algorithm>
#include <cmath>

namespace wwr {

namespace {

// Oracle-private sampler: xorshift128+ uniforms, Marsaglia polar normals.
// Deliberately a different algorithm from the production generator.
class OracleRng {
public:
    explicit OracleRng(std::uint64_t seed) {
        // scramble the seed into two nonzero words
        s0_ = seed * 0x2545f4914f6cdd1dull + 0x123456789abcdefull;
        s1_ = (seed ^ 0xdeadbeefcafebabeull) * 0x9e3779b97f4a7c15ull + 1ull;
        for (int i = 0; i < 8; ++i) (void)next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t x = s0_;
        const std::uint64_t y = s1_;
        s0_ = y;
        x ^= x << 23;
        s1_ = x ^ y ^ (x >> 17) ^ (y >> 26);
        return s1_ + y;
    }

    double uniform_signed() { // in (-1, 1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-52 - 1.0;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform_signed();
            v = uniform_signed();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::uint64_t s0_, s1_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

double rel_residual(double got, double want) {
    const double denom = std::max({std::fabs(want), std::fabs(got), 1e-12});
    return std::fabs(got - want) / denom;
}

std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
    return p;
}

std::vector<double> squares(const std::vector<double>& a) { return product(a, a); }

} // namespace

double identity_check_2(std::uint64_t seed, std::size_t n) {
    if (n < 2) throw DomainError("identity_check_2: n must be >= 2");
    OracleRng rng(seed);
    double worst = 0.0;
    for (double rho : {-1.0, 0.0, 0.37, 0.9, 1.0}) {
        std::vector<double> a(n), b(n);
        const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
        for (std::size_t i = 0; i < n; ++i) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double y = rho * z1 + c * z2;
            a[i] = std::exp(0.3 * z1);           // positive, skewed
            b[i] = 2.0 + y + 0.1 * y * y * y;    // non-Gaussian
        }
        MomentPair p{SampleStats::mean(a), SampleStats::mean(b), SampleStats::sd(a),
                     SampleStats::sd(b), SampleStats::correlation(a, b)};
        const double direct = SampleStats::mean(product(a, b));
        worst = std::max(worst, rel_residual(product_mean_2(p), direct));
    }
    return worst;
}

double identity_check_3(std::uint64_t seed, std::size_t n) {
    if (n < 2) throw DomainError("identity_check_3: n must be >= 2");
    OracleRng rng(seed);

    // random SPD correlation: C = M M^T normalized to unit diagonal
    double m[3][3];
    for (auto& row : m)
        for (double& v : row) v = rng.normal();
    double corr[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[i][k] * m[j][k];
            corr[i][j] = s;
        }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) corr[i][j] /= std::sqrt(corr[i][i] * corr[j][j]);
    for (int i = 0; i < 3; ++i) corr[i][i] = 1.0;

    // Cholesky
    double l[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = corr[i][j];
            for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            l[i][j] = (i == j) ? std::sqrt(std::max(s, 1e-12)) : s / l[j][j];
        }

    std::vector<double> a(n), b(n), cvec(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.normal(), z2 = rng.normal(), z3 = rng.normal();
        const double x1 = l[0][0] * z1;
        const double x2 = l[1][0] * z1 + l[1][1] * z2;
        const double x3 = l[2][0] * z1 + l[2][1] * z2 + l[2][2] * z3;
        a[i] = std::exp(0.3 * x1);
        b[i] = 2.0 + x2 + 0.1 * x2 * x2 * x2;
        cvec[i] = 1.5 + 0.5 * std::tanh(x3) + 0.3 * x3;
    }

    const auto ab = product(a, b), ac = product(a, cvec), bc = product(b, cvec);
    const auto abc = product(ab, cvec);
    const double direct = SampleStats::mean(abc);

    TripleMoments t;
    t.mean_a = SampleStats::mean(a); t.mean_b = SampleStats::mean(b); t.mean_c = SampleStats::mean(cvec);
    t.sd_a = SampleStats::sd(a); t.sd_b = SampleStats::sd(b); t.sd_c = SampleStats::sd(cvec);
    t.rho_ab = SampleStats::correlation(a, b);
    t.rho_ac = SampleStats::correlation(a, cvec);
    t.rho_bc = SampleStats::correlation(b, cvec);
    t.rho_a_bc = SampleStats::correlation(a, bc);
    t.rho_b_ac = SampleStats::correlation(b, ac);
    t.rho_c_ab = SampleStats::correlation(cvec, ab);
    t.sd_ab = SampleStats::sd(ab);
    t.sd_ac = SampleStats::sd(ac);
    t.sd_bc = SampleStats::sd(bc);

    double worst = 0.0;
    for (Pivot pv : {Pivot::A, Pivot::B, Pivot::C})
        worst = std::max(worst, rel_residual(product_mean_3(t, pv), direct));

    // Var(ab) expansion on the same sample
    MomentPair p{t.mean_a, t.mean_b, t.sd_a, t.sd_b, t.rho_ab};
    const double var_direct = t.sd_ab * t.sd_ab;
    const double var_expanded =
        var_product(p, SampleStats::correlation(squares(a), squares(b)), SampleStats::sd(squares(a)),
                    SampleStats::sd(squares(b)), SampleStats::mean(squares(a)),
                    SampleStats::mean(squares(b)), 1e-6 /* sampling scale */);
    worst = std::max(worst, rel_residual(var_expanded, var_direct));
    return worst;
}

double appendix2_check(double rho_true, std::size_t n_per_sample, std::size_t n_samples,
                       std::uint64_t seed) {
    if (n_per_sample < 1) throw DomainError("appendix2_check: n_per_sample must be >= 1");
    if (n_samples < 100) throw DomainError("appendix2_check: n_samples must be >= 100");
    if (std::fabs(rho_true) > 1.0) throw DomainError("appendix2_check: |rho| must be <= 1");
    OracleRng rng(seed);
    const double c = std::sqrt(std::max(0.0, 1.0 - rho_true * rho_true));
    std::vector<double> xbar(n_samples), ybar(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n_per_sample; ++i) {
            const double z1 = rng.normal(), z2 = rng.normal();
            sx += z1;
            sy += rho_true * z1 + c * z2;
        }
        xbar[s] = sx / static_cast<double>(n_per_sample);
        ybar[s] = sy / static_cast<double>(n_per_sample);
    }
    return SampleStats::correlation(xbar, ybar);
}

ReconstructionResult integral_reconstruction(std::uint64_t seed, const WorldConfig& world) {
    OracleRng rng(seed);
    ReconstructionResult res;

    const double rce = world.exposure_credit_corr;
    const double rcf = world.funding_credit_corr;
    const double ref_ = world.exposure_funding_corr;

    // Cholesky of the (credit, funding, exposure) correlation matrix
    const double l21 = rcf;
    const double l22 = std::sqrt(std::max(1e-12, 1.0 - rcf * rcf));
    const double l31 = rce;
    const double l32 = (ref_ - rce * rcf) / l22;
    const double l33 = std::sqrt(std::max(1e-12, 1.0 - l31 * l31 - l32 * l32));

    for (std::size_t bkt = 0; bkt < world.n_buckets; ++bkt) {
        const double tau = 0.5 + static_cast<double>(bkt);
        const double a0 = 0.03 * std::exp(-0.05 * tau); // default factor scale
        const double h0 = 0.05 * tau;                   // integrated hazard
        const double g0 = 0.01 * tau;                   // integrated funding spread
        const double s0 = 0.012;                        // funding spread level
        const double em = (bkt % 2 == 0 ? 0.6 : -0.6);  // exposure mean, sign alternates
        const double ev = 1.0;

        const std::size_t n = world.n_draws;
        std::vector<double> def(n), surv(n), fdf(n), carry(n), net(n), pos(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double zc = rng.normal();
            const double zf_ = rng.normal();
            const double ze = rng.normal();
            const double yc = zc;
            const double yf = l21 * zc + l22 * zf_;
            const double ye = l31 * zc + l32 * zf_ + l33 * ze;

            def[i] = a0 * std::exp(0.25 * yc);
            surv[i] = std::exp(-h0 * std::exp(0.2 * yc));
            fdf[i] = std::exp(-g0 * std::exp(0.3 * yf));
            carry[i] = s0 * std::exp(0.3 * yf) * fdf[i];
            net[i] = em + ev * ye;
            pos[i] = std::max(net[i], 0.0);
        }

        // regulatory: E[def * pos]
        {
            RegInputs in;
            in.grid = {tau};
            in.weights = {1.0};
            in.e_default = {SampleStats::mean(def)};
            in.sd_default = {SampleStats::sd(def)};
            in.e_exposure = {SampleStats::mean(pos)};
            in.sd_exposure = {SampleStats::sd(pos)};
            in.rho = {SampleStats::correlation(def, pos)};
            const RegResult r = regulatory_cva(in);
            const double direct = SampleStats::mean(product(def, pos));
            res.max_residual = std::max(res.max_residual, rel_residual(r.cva_total, direct));
            res.reg_wwr += r.cva_wwr;
        }

        // accounting CVA / FVA: E[def * fdf * pos] and E[surv * carry * net]
        {
            AcctInputs in;
            in.grid = {tau};
            in.weights = {1.0};
            in.var_clamp_tol = 1e-6; // sampling scale, never hit in practice
            in.e_exp_pos = {SampleStats::mean(pos)};
            in.e_exp_net = {SampleStats::mean(net)};
            in.sd_exp_pos = {SampleStats::sd(pos)};
            in.sd_exp_net = {SampleStats::sd(net)};
            in.m2_exp_pos_sq = {SampleStats::mean(squares(pos))};
            in.sd_exp_pos_sq = {SampleStats::sd(squares(pos))};
            in.m2_exp_net_sq = {SampleStats::mean(squares(net))};
            in.sd_exp_net_sq = {SampleStats::sd(squares(net))};
            in.e_default = {SampleStats::mean(def)};
            in.sd_default = {SampleStats::sd(def)};
            in.e_surv = {SampleStats::mean(surv)};
            in.sd_surv = {SampleStats::sd(surv)};
            in.e_fund_df = {SampleStats::mean(fdf)};
            in.sd_fund_df = {SampleStats::sd(fdf)};
            in.e_fund_carry = {SampleStats::mean(carry)};
            in.sd_fund_carry = {SampleStats::sd(carry)};
            in.e_fund_df_sq = {SampleStats::mean(squares(fdf))};
            in.sd_fund_df_sq = {SampleStats::sd(squares(fdf))};
            in.e_fund_carry_sq = {SampleStats::mean(squares(carry))};
            in.sd_fund_carry_sq = {SampleStats::sd(squares(carry))};
            const auto fdf_pos = product(fdf, pos);
            const auto carry_net = product(carry, net);
            in.c1 = {SampleStats::correlation(fdf, pos)};
            in.c2 = {SampleStats::correlation(def, fdf_pos)};
            in.c2_1 = {SampleStats::correlation(squares(fdf), squares(pos))};
            in.f1 = {SampleStats::correlation(carry, net)};
            in.f2 = {SampleStats::correlation(surv, carry_net)};
            in.f2_1 = {SampleStats::correlation(squares(carry), squares(net))};

            const WwrTerms cva = accounting_cva(in);
            const WwrTerms fva = accounting_fva(in);
            const double cva_direct = SampleStats::mean(product(def, fdf_pos));
            const double fva_direct = SampleStats::mean(product(surv, carry_net));
            res.max_residual = std::max(res.max_residual, rel_residual(cva.total, cva_direct));
            res.max_residual = std::max(res.max_residual, rel_residual(fva.total, fva_direct));
            res.cva_ww_total += cva.ww1 + cva.ww2;
            res.fva_ww_total += fva.ww1 + fva.ww2;
        }
    }
    return res;
}

bool OracleReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

OracleReport run_oracle_suite(std::uint64_t seed, std::size_t n) {
    OracleReport rep;
    auto add = [&rep](const std::string& name, double residual, double threshold) {
        rep.entries.push_back({name, residual, threshold, residual < threshold});
    };

    add("identity_check_2", identity_check_2(seed, n), 1e-10);
    add("identity_check_3", identity_check_3(seed + 1, n), 1e-10);

    const std::size_t n_samples = 1260;
    const double bound = 3.0 / std::sqrt(static_cast<double>(n_samples));
    int idx = 0;
    for (double rho : {-0.5, 0.0, 0.7}) {
        for (std::size_t nps : {std::size_t{1}, std::size_t{10}, std::size_t{100}}) {
            const double est = appendix2_check(rho, nps, n_samples, seed + 100 + idx++);
            add("appendix2 rho=" + std::to_string(rho) + " n=" + std::to_string(nps),
                std::fabs(est - rho), bound);
        }
    }

    WorldConfig independent;
    independent.n_draws = n;
    WorldConfig wrong_way = independent;
    wrong_way.exposure_credit_corr = 0.6;
    WorldConfig right_way = independent;
    right_way.exposure_credit_corr = -0.6;

    const auto r_ind = integral_reconstruction(seed + 7, independent);
    const auto r_ww = integral_reconstruction(seed + 8, wrong_way);
    const auto r_rw = integral_reconstruction(seed + 9, right_way);
    add("reconstruction independent", r_ind.max_residual, 1e-10);
    add("reconstruction wrong-way", r_ww.max_residual, 1e-10);
    add("reconstruction right-way", r_rw.max_residual, 1e-10);
    // sign diagnostics: monotone worlds must show the constructed sign
    add("wrong-way reg WWR sign", r_ww.reg_wwr > 0.0 ? 0.0 : 1.0, 0.5);
    add("right-way reg WWR sign", r_rw.reg_wwr < 0.0 ? 0.0 : 1.0, 0.5);
    return rep;
}

} // namespace wwr
