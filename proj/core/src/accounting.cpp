#include "wwr/accounting.hpp"
#include "wwr/errors.hpp"
#include "wwr/moments.hpp"

#include <cmath>
#include <string>

namespace wwr {

void AcctInputs::validate() const {
    const std::size_t n = grid.size();
    auto check = [n](const std::vector<double>& v, const char* name) {
        if (v.size() != n)
            throw DataError(std::string("AcctInputs: ") + name + " length does not match grid");
    };
    check(weights, "weights");
    check(e_exp_pos, "e_exp_pos"); check(e_exp_net, "e_exp_net");
    check(sd_exp_pos, "sd_exp_pos"); check(sd_exp_net, "sd_exp_net");
    check(m2_exp_pos_sq, "m2_exp_pos_sq"); check(sd_exp_pos_sq, "sd_exp_pos_sq");
    check(m2_exp_net_sq, "m2_exp_net_sq"); check(sd_exp_net_sq, "sd_exp_net_sq");
    check(e_default, "e_default"); check(sd_default, "sd_default");
    check(e_surv, "e_surv"); check(sd_surv, "sd_surv");
    check(e_fund_df, "e_fund_df"); check(sd_fund_df, "sd_fund_df");
    check(e_fund_carry, "e_fund_carry"); check(sd_fund_carry, "sd_fund_carry");
    check(e_fund_df_sq, "e_fund_df_sq"); check(sd_fund_df_sq, "sd_fund_df_sq");
    check(e_fund_carry_sq, "e_fund_carry_sq"); check(sd_fund_carry_sq, "sd_fund_carry_sq");
    check(c1, "c1"); check(c2, "c2"); check(c2_1, "c2_1");
    check(f1, "f1"); check(f2, "f2"); check(f2_1, "f2_1");

    auto corr_ok = [](const std::vector<double>& v) {
        for (double x : v)
            if (std::fabs(x) > 1.0 + 1e-12) return false;
        return true;
    };
    if (!corr_ok(c1) || !corr_ok(c2) || !corr_ok(c2_1) || !corr_ok(f1) || !corr_ok(f2) || !corr_ok(f2_1))
        throw DataError("AcctInputs: correlation outside [-1, 1]");
    for (std::size_t i = 0; i < n; ++i) {
        if (e_surv[i] <= 0.0 || e_surv[i] > 1.0 + 1e-12)
            throw DataError("AcctInputs: e_surv outside (0, 1] at bucket " + std::to_string(i));
        if (e_fund_df[i] <= 0.0 || e_fund_df[i] > 1.0 + 1e-12)
            throw DataError("AcctInputs: e_fund_df outside (0, 1] at bucket " + std::to_string(i));
    }
}

namespace {

// feasibility floor: rho2 * sd_a2 * sd_b2 + e_a2 * e_b2 - cross^2 >= 0
std::size_t clamp_one_side(std::vector<double>& rho2, const std::vector<double>& sd_a2,
                           const std::vector<double>& sd_b2, const std::vector<double>& e_a2,
                           const std::vector<double>& e_b2, const std::vector<double>& rho,
                           const std::vector<double>& sd_a, const std::vector<double>& sd_b,
                           const std::vector<double>& e_a, const std::vector<double>& e_b) {
    std::size_t adjusted = 0;
    for (std::size_t i = 0; i < rho2.size(); ++i) {
        const double slope = sd_a2[i] * sd_b2[i];
        if (slope <= 0.0) continue;
        const double cross = rho[i] * sd_a[i] * sd_b[i] + e_a[i] * e_b[i];
        const double floor = (cross * cross - e_a2[i] * e_b2[i]) / slope;
        if (rho2[i] < floor && floor <= 1.0) {
            rho2[i] = floor;
            ++adjusted;
        }
    }
    return adjusted;
}

} // namespace

std::size_t clamp_square_correlations(AcctInputs& in) {
    in.validate();
    std::size_t n = clamp_one_side(in.c2_1, in.sd_fund_df_sq, in.sd_exp_pos_sq, in.e_fund_df_sq,
                                   in.m2_exp_pos_sq, in.c1, in.sd_fund_df, in.sd_exp_pos,
                                   in.e_fund_df, in.e_exp_pos);
    n += clamp_one_side(in.f2_1, in.sd_fund_carry_sq, in.sd_exp_net_sq, in.e_fund_carry_sq,
                        in.m2_exp_net_sq, in.f1, in.sd_fund_carry, in.sd_exp_net, in.e_fund_carry,
                        in.e_exp_net);
    return n;
}

double var_product_c(const AcctInputs& in, std::size_t i) {
    MomentPair p{in.e_fund_df[i], in.e_exp_pos[i], in.sd_fund_df[i], in.sd_exp_pos[i], in.c1[i]};
    return var_product(p, in.c2_1[i], in.sd_fund_df_sq[i], in.sd_exp_pos_sq[i],
                       in.e_fund_df_sq[i], in.m2_exp_pos_sq[i], in.var_clamp_tol);
}

double var_product_f(const AcctInputs& in, std::size_t i) {
    MomentPair p{in.e_fund_carry[i], in.e_exp_net[i], in.sd_fund_carry[i], in.sd_exp_net[i], in.f1[i]};
    return var_product(p, in.f2_1[i], in.sd_fund_carry_sq[i], in.sd_exp_net_sq[i],
                       in.e_fund_carry_sq[i], in.m2_exp_net_sq[i], in.var_clamp_tol);
}

WwrTerms accounting_cva(const AcctInputs& in) {
    in.validate();
    WwrTerms r;
    for (std::size_t i = 0; i < in.grid.size(); ++i) {
        const double w = in.weights[i];
        r.indep += w * in.e_default[i] * in.e_fund_df[i] * in.e_exp_pos[i];
        r.ww1 += w * in.c1[i] * in.e_default[i] * in.sd_fund_df[i] * in.sd_exp_pos[i];
        r.ww2 += w * in.c2[i] * in.sd_default[i] * std::sqrt(var_product_c(in, i));
    }
    r.total = r.indep + r.ww1 + r.ww2;
    return r;
}

WwrTerms accounting_fva(const AcctInputs& in) {
    in.validate();
    WwrTerms r;
    for (std::size_t i = 0; i < in.grid.size(); ++i) {
        const double w = in.weights[i];
        r.indep += w * in.e_surv[i] * in.e_fund_carry[i] * in.e_exp_net[i];
        r.ww1 += w * in.f1[i] * in.e_surv[i] * in.sd_fund_carry[i] * in.sd_exp_net[i];
        r.ww2 += w * in.f2[i] * in.sd_surv[i] * std::sqrt(var_product_f(in, i));
    }
    r.total = r.indep + r.ww1 + r.ww2;
    return r;
}

} // namespace wwr
