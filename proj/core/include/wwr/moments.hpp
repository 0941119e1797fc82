#pragma once

#include <cstddef>
#include <span>

namespace wwr {

/// First/second-moment description of a correlated pair (a, b).
struct MomentPair {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double sd_a = 0.0;   // >= 0
    double sd_b = 0.0;   // >= 0
    double rho = 0.0;    // in [-1, 1]
};

/// Moments of a triple (a, b, c): marginals, pairwise correlations,
/// variable-vs-product correlations and product SDs. Only the slots needed
/// by the chosen pivot of product_mean_3 have to be populated.
struct TripleMoments {
    double mean_a = 0.0, mean_b = 0.0, mean_c = 0.0;
    double sd_a = 0.0, sd_b = 0.0, sd_c = 0.0;
    double rho_ab = 0.0, rho_ac = 0.0, rho_bc = 0.0;
    // correlation of one variable against the product of the other two
    double rho_a_bc = 0.0, rho_b_ac = 0.0, rho_c_ab = 0.0;
    // SDs of the pairwise products
    double sd_bc = 0.0, sd_ac = 0.0, sd_ab = 0.0;
};

enum class Pivot { A, B, C };

/// E[ab] = E[a]E[b] + rho sd(a) sd(b). Exact for sample statistics computed
/// with 1/n normalization.
double product_mean_2(const MomentPair& p);

/// E[abc] expanded around the chosen pivot, e.g. pivot A:
///   E[a]E[b]E[c] + E[a] rho_bc sd(b) sd(c) + rho_a_bc sd(a) sd(bc).
/// All pivots agree on consistent moments.
double product_mean_3(const TripleMoments& t, Pivot pivot);

/// Var(ab) = rho_{a2,b2} sd(a^2) sd(b^2) + E[a^2]E[b^2]
///           - (rho sd(a) sd(b) + E[a]E[b])^2.
/// Results in [-abs_tol, 0) clamp to 0; anything below -abs_tol throws
/// (inconsistent second moments).
double var_product(const MomentPair& p, double rho_sq, double sd_a2, double sd_b2,
                   double mean_a2, double mean_b2, double abs_tol = 1e-12);

/// E[(X^+)^order] for X ~ Normal(mu, sigma^2), order in 1..4.
/// Requires sigma > 0; the sigma -> 0 limit is (mu^+)^order and callers with
/// degenerate distributions handle it directly.
double normal_plus_moment(double mu, double sigma, int order);

/// Raw moment E[X^order] of X ~ Normal(mu, sigma^2), order in 1..4.
double normal_moment(double mu, double sigma, int order);

/// Sample statistics with population (1/n) normalization, which make the
/// decomposition identities above exact on any finite sample.
struct SampleStats {
    static double mean(std::span<const double> x);
    static double sd(std::span<const double> x);
    /// Pearson correlation; 0 by convention if either side has zero variance.
    static double correlation(std::span<const double> x, std::span<const double> y);
};

} // namespace wwr
