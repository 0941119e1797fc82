#pragma once

#include <string>
#include <vector>

namespace wwr {

/// Time-bucketed deterministic curve of a scalar statistic over forward
/// horizons.
struct TermStructure {
    std::vector<double> taus;
    std::vector<double> values;

    std::size_t size() const { return taus.size(); }
    void validate(const std::string& name, bool correlation_bounded = false) const;
};

/// Trapezoidal quadrature weights for a strictly increasing grid; a single
/// point gets weight 1.
std::vector<double> trapezoid_weights(const std::vector<double>& grid);

} // namespace wwr
