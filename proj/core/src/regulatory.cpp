#include "wwr/regulatory.hpp"
#include "wwr/term_structure.hpp"
#include "wwr/errors.hpp"

#include <cmath>
#include <string>

namespace wwr {

void RegInputs::validate() const {
    const std::size_t n = grid.size();
    auto check = [n](const std::vector<double>& v, const char* name) {
        if (v.size() != n)
            throw DataError(std::string("RegInputs: ") + name + " length " + std::to_string(v.size()) +
                            " does not match grid length " + std::to_string(n));
    };
    check(weights, "weights");
    check(e_default, "e_default");
    check(sd_default, "sd_default");
    check(e_exposure, "e_exposure");
    check(sd_exposure, "sd_exposure");
    check(rho, "rho");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(rho[i]) > 1.0 + 1e-12) throw DataError("RegInputs: |rho| > 1 at bucket " + std::to_string(i));
        if (sd_default[i] < 0.0 || sd_exposure[i] < 0.0)
            throw DataError("RegInputs: negative SD at bucket " + std::to_string(i));
        if (e_default[i] < 0.0) throw DataError("RegInputs: negative e_default at bucket " + std::to_string(i));
    }
}

RegResult regulatory_cva(const RegInputs& in) {
    in.validate();
    RegResult r;
    for (std::size_t i = 0; i < in.grid.size(); ++i) {
        r.cva_indep += in.weights[i] * in.e_default[i] * in.e_exposure[i];
        r.cva_wwr += in.weights[i] * in.rho[i] * in.sd_default[i] * in.sd_exposure[i];
    }
    r.cva_total = r.cva_indep + r.cva_wwr;
    return r;
}

RegInputs crisis_rescale(const RegInputs& in, const TermStructure& crisis_sd,
                         const TermStructure& recent_sd) {
    in.validate();
    if (crisis_sd.size() != in.grid.size() || recent_sd.size() != in.grid.size())
        throw DataError("crisis_rescale: SD term structures do not match the input grid");
    RegInputs out = in;
    for (std::size_t i = 0; i < in.grid.size(); ++i) {
        const double c = crisis_sd.values[i], r = recent_sd.values[i];
        if (r > 0.0) {
            out.sd_default[i] = in.sd_default[i] * (c / r);
        } else if (c > 0.0) {
            throw DataError("crisis_rescale: zero recent SD with nonzero crisis SD at bucket " +
                            std::to_string(i));
        }
        // both zero: nothing to rescale
    }
    return out;
}

} // namespace wwr
