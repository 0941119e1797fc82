#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wwr {

/// Brute-force verifiers for the moment re-writing identities. These use
/// their own minimal sampler (xorshift + polar method), separate from the
/// generator behind the synthetic history.

/// Max relative residual of E[ab] = E[a]E[b] + rho sd(a) sd(b) over several
/// correlated, non-Gaussian pairs, all statistics from one 1/n sample.
double identity_check_2(std::uint64_t seed, std::size_t n);

/// Max relative residual over the three pivots of the triple-product
/// identity and the Var(ab) expansion, on a random SPD correlation
/// structure.
double identity_check_3(std::uint64_t seed, std::size_t n);

/// Correlation of per-sample means of n_per_sample draws across n_samples
/// samples; equals the underlying correlation up to sampling error.
double appendix2_check(double rho_true, std::size_t n_per_sample, std::size_t n_samples,
                       std::uint64_t seed);

/// Joint (exposure, default, funding) world per bucket for reconstructing
/// the CVA / FVA integrands from decomposed statistics.
struct WorldConfig {
    std::size_t n_buckets = 8;
    std::size_t n_draws = 100000;
    double exposure_credit_corr = 0.0; // > 0 builds a wrong-way world
    double funding_credit_corr = 0.4;
    double exposure_funding_corr = 0.2;
};

struct ReconstructionResult {
    double max_residual = 0.0; // over buckets and all three formulas
    double reg_wwr = 0.0;      // summed regulatory WWR term (sign diagnostics)
    double cva_ww_total = 0.0;
    double fva_ww_total = 0.0;
};

ReconstructionResult integral_reconstruction(std::uint64_t seed, const WorldConfig& world);

/// One named residual check.
struct OracleEntry {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct OracleReport {
    std::vector<OracleEntry> entries;
    bool all_pass() const;
};

/// Full verification battery used by the CLI and the acceptance suite.
OracleReport run_oracle_suite(std::uint64_t seed, std::size_t n = 100000);

} // namespace wwr
