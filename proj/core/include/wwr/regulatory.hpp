#pragma once

#include "wwr/term_structure.hpp"

#include <vector>

namespace wwr {

/// Per-horizon inputs to the regulatory CVA decomposition
///   CVA = int E[LGD lambda D_lambda] E[D Pi+] dt
///       + int rho sqrt(Var(LGD lambda D_lambda) Var(D Pi+)) dt.
/// Expectations and exposure variances are market implied; default variance
/// and the terminal correlation are historically calibrated.
struct RegInputs {
    std::vector<double> grid;
    std::vector<double> weights;
    std::vector<double> e_default;   // E[LGD lambda D_lambda], 1/yr
    std::vector<double> sd_default;  // 1/yr
    std::vector<double> e_exposure;  // E[D Pi+]
    std::vector<double> sd_exposure;
    std::vector<double> rho;         // terminal correlation, in [-1, 1]

    void validate() const;
};

struct RegResult {
    double cva_indep = 0.0;
    double cva_wwr = 0.0;
    double cva_total = 0.0; // always indep + wwr
};

RegResult regulatory_cva(const RegInputs& in);

/// Rescales the default SD bucket-by-bucket by crisis_sd / recent_sd,
/// leaving rho unchanged (the WW+Crisis column). Throws on a bucket with
/// crisis_sd > 0 but recent_sd = 0.
RegInputs crisis_rescale(const RegInputs& in, const TermStructure& crisis_sd,
                         const TermStructure& recent_sd);

} // namespace wwr
