#pragma once

#include <cstddef>
#include <vector>

namespace wwr {

/// Per-horizon inputs to the accounting CVA / FVA decompositions with two
/// WWR terms each. Exposure statistics and the credit/funding expectations
/// are market implied from the asof snapshot; the credit/funding SDs and
/// all terminal correlations are historically calibrated.
struct AcctInputs {
    std::vector<double> grid;
    std::vector<double> weights;

    // exposure block (asof closed forms)
    std::vector<double> e_exp_pos, e_exp_net;
    std::vector<double> sd_exp_pos, sd_exp_net;
    std::vector<double> m2_exp_pos_sq, sd_exp_pos_sq; // mean / SD of (D Pi+)^2
    std::vector<double> m2_exp_net_sq, sd_exp_net_sq; // mean / SD of (D Pi)^2

    // credit block
    std::vector<double> e_default, sd_default; // LGD lambda D_lambda
    std::vector<double> e_surv, sd_surv;       // D_lambda

    // funding block
    std::vector<double> e_fund_df, sd_fund_df;             // D_sF
    std::vector<double> e_fund_carry, sd_fund_carry;       // sF D_sF
    std::vector<double> e_fund_df_sq, sd_fund_df_sq;       // D_sF^2
    std::vector<double> e_fund_carry_sq, sd_fund_carry_sq; // (sF D_sF)^2

    // terminal correlations
    std::vector<double> c1;   // D_sF vs D Pi+
    std::vector<double> c2;   // LGD lambda D_lambda vs D_sF D Pi+
    std::vector<double> c2_1; // D_sF^2 vs (D Pi+)^2
    std::vector<double> f1;   // sF D_sF vs D Pi
    std::vector<double> f2;   // D_lambda vs sF D_sF D Pi
    std::vector<double> f2_1; // (sF D_sF)^2 vs (D Pi)^2

    double var_clamp_tol = 1e-12;

    void validate() const;
};

struct WwrTerms {
    double indep = 0.0;
    double ww1 = 0.0;
    double ww2 = 0.0;
    double total = 0.0; // indep + ww1 + ww2
};

/// Var(D_sF * D Pi+) per bucket from the product-variance expansion using
/// c1 and c2.1; tiny negatives clamp to 0, larger ones throw.
double var_product_c(const AcctInputs& in, std::size_t i);
/// Var(sF D_sF * D Pi) per bucket using f1 and f2.1.
double var_product_f(const AcctInputs& in, std::size_t i);

/// Statistics estimated from separate sources (historical correlations vs
/// market second moments) can violate the product-variance expansion's
/// feasibility. Raises c2.1 / f2.1 bucket-by-bucket to the floor that keeps
/// the expansion non-negative; a floor above +1 is left for var_product to
/// reject. Returns the number of adjusted buckets.
std::size_t clamp_square_correlations(AcctInputs& in);

/// CVA = int E[LGD l D_l] E[D_sF] E[D Pi+]
///     + int c1 E[LGD l D_l] sqrt(Var(D_sF) Var(D Pi+))
///     + int c2 sqrt(Var(LGD l D_l) Var(D_sF D Pi+))
WwrTerms accounting_cva(const AcctInputs& in);

/// FVA = int E[D_l] E[sF D_sF] E[D Pi]
///     + int f1 E[D_l] sqrt(Var(sF D_sF) Var(D Pi))
///     + int f2 sqrt(Var(D_l) Var(sF D_sF D Pi))
WwrTerms accounting_fva(const AcctInputs& in);

} // namespace wwr
