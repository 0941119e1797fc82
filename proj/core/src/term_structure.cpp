#include "wwr/term_structure.hpp"
#include "wwr/errors.hpp"

#include <cmath>

namespace wwr {

void TermStructure::validate(const std::string& name, bool correlation_bounded) const {
    if (taus.size() != values.size())
        throw DataError("TermStructure " + name + ": tau/value size mismatch");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1])) throw DataError("TermStructure " + name + ": taus not increasing");
    if (correlation_bounded)
        for (double v : values)
            if (std::fabs(v) > 1.0 + 1e-12)
                throw DataError("TermStructure " + name + ": correlation outside [-1, 1]");
}

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    if (n == 0) throw DomainError("trapezoid_weights: empty grid");
    if (n == 1) return {1.0};
    std::vector<double> w(n, 0.0);
    w[0] = 0.5 * (grid[1] - grid[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (grid[i + 1] - grid[i - 1]);
    w[n - 1] = 0.5 * (grid[n - 1] - grid[n - 2]);
    return w;
}

} // namespace wwr
