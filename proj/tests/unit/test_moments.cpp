#include "wwr/errors.hpp"
#include "wwr/moments.hpp"
#include "wwr/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace wwr;

namespace {

struct Sample2 {
    std::vector<double> a, b;
};

// correlated non-Gaussian pair, everything downstream uses 1/n statistics
Sample2 draw_pair(std::uint64_t seed, std::size_t n, double rho) {
    Rng rng(seed);
    Sample2 s;
    s.a.resize(n);
    s.b.resize(n);
    const double c = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.normal(), z2 = rng.normal();
        const double y = rho * z1 + c * z2;
        s.a[i] = 1.0 + 0.5 * z1 + 0.05 * z1 * z1;
        s.b[i] = 2.0 + y;
    }
    return s;
}

std::vector<double> prod(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] * y[i];
    return p;
}

MomentPair pair_stats(const Sample2& s) {
    return {SampleStats::mean(s.a), SampleStats::mean(s.b), SampleStats::sd(s.a),
            SampleStats::sd(s.b), SampleStats::correlation(s.a, s.b)};
}

} // namespace

TEST_CASE("product_mean_2 basics") {
    CHECK(product_mean_2({2.0, 3.0, 1.0, 2.0, 0.0}) == doctest::Approx(6.0));
    // self product: E[a^2] = mu^2 + sigma^2
    const double mu = 1.3, sigma = 0.7;
    CHECK(product_mean_2({mu, mu, sigma, sigma, 1.0}) == doctest::Approx(mu * mu + sigma * sigma));
}

TEST_CASE("product_mean_2 reconstructs the sample mean exactly") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const Sample2 s = draw_pair(seed, 100000, 0.37);
        const double direct = SampleStats::mean(prod(s.a, s.b));
        const double via_identity = product_mean_2(pair_stats(s));
        CHECK(std::fabs(via_identity - direct) <= 1e-12 * std::fabs(direct));
    }
}

TEST_CASE("product_mean_3 trivial cases") {
    TripleMoments t;
    t.mean_a = 1.5; t.mean_b = -2.0; t.mean_c = 0.5;
    t.sd_a = 0.3; t.sd_b = 0.4; t.sd_c = 0.6;
    SUBCASE("mutually independent: product of means") {
        CHECK(product_mean_3(t, Pivot::A) == doctest::Approx(1.5 * -2.0 * 0.5));
        CHECK(product_mean_3(t, Pivot::B) == doctest::Approx(1.5 * -2.0 * 0.5));
    }
    SUBCASE("c deterministic reduces to the pair identity") {
        t.mean_c = 1.0;
        t.sd_c = 0.0;
        t.rho_ab = 0.42;
        t.rho_a_bc = 0.42; // bc = b when c == 1
        t.sd_bc = t.sd_b;
        MomentPair p{t.mean_a, t.mean_b, t.sd_a, t.sd_b, t.rho_ab};
        CHECK(product_mean_3(t, Pivot::A) == doctest::Approx(product_mean_2(p)).epsilon(1e-14));
    }
}

TEST_CASE("product_mean_3 pivots agree with the sample mean") {
    Rng rng(77);
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.normal(), z2 = rng.normal(), z3 = rng.normal();
        a[i] = std::exp(0.25 * z1);
        b[i] = 2.0 + 0.8 * z1 + 0.6 * z2;
        c[i] = 1.0 + 0.3 * z2 + 0.5 * z3 + 0.05 * z3 * z3;
    }
    const auto ab = prod(a, b), ac = prod(a, c), bc = prod(b, c);
    const double direct = SampleStats::mean(prod(ab, c));

    TripleMoments t;
    t.mean_a = SampleStats::mean(a); t.mean_b = SampleStats::mean(b); t.mean_c = SampleStats::mean(c);
    t.sd_a = SampleStats::sd(a); t.sd_b = SampleStats::sd(b); t.sd_c = SampleStats::sd(c);
    t.rho_ab = SampleStats::correlation(a, b);
    t.rho_ac = SampleStats::correlation(a, c);
    t.rho_bc = SampleStats::correlation(b, c);
    t.rho_a_bc = SampleStats::correlation(a, bc);
    t.rho_b_ac = SampleStats::correlation(b, ac);
    t.rho_c_ab = SampleStats::correlation(c, ab);
    t.sd_ab = SampleStats::sd(ab); t.sd_ac = SampleStats::sd(ac); t.sd_bc = SampleStats::sd(bc);

    const double pa = product_mean_3(t, Pivot::A);
    const double pb = product_mean_3(t, Pivot::B);
    const double pc = product_mean_3(t, Pivot::C);
    CHECK(std::fabs(pa - direct) <= 1e-12 * std::fabs(direct));
    CHECK(std::fabs(pb - direct) <= 1e-12 * std::fabs(direct));
    CHECK(std::fabs(pc - direct) <= 1e-12 * std::fabs(direct));
    // pivot equivalence, slightly tighter
    CHECK(std::fabs(pa - pb) <= 1e-10 * std::fabs(pa));
    CHECK(std::fabs(pa - pc) <= 1e-10 * std::fabs(pa));
}

TEST_CASE("var_product closed cases") {
    SUBCASE("deterministic first factor scales the variance") {
        const double ma = 3.0, mb = -1.0, sb = 0.8, m2b = mb * mb + sb * sb;
        const double v = var_product({ma, mb, 0.0, sb, 0.0}, 0.0, 0.0, 1.0, ma * ma, m2b);
        CHECK(v == doctest::Approx(ma * ma * sb * sb).epsilon(1e-14));
    }
    SUBCASE("chi-square(1): Var(a^2) = 2 for a standard normal") {
        // exact population moments of a = b ~ N(0,1)
        const double v = var_product({0.0, 0.0, 1.0, 1.0, 1.0}, 1.0, std::sqrt(2.0), std::sqrt(2.0),
                                     1.0, 1.0);
        CHECK(v == doctest::Approx(2.0));
    }
    SUBCASE("tiny negative clamps, large negative throws") {
        // mean_a2 * mean_b2 drives the expansion negative
        CHECK(var_product({0.0, 0.0, 0.0, 0.0, 0.0}, 0.0, 0.0, 0.0, 1.0, -0.5e-12) == 0.0);
        CHECK_THROWS_AS(var_product({0.0, 0.0, 0.0, 0.0, 0.0}, 0.0, 0.0, 0.0, 1.0, -1.0), DataError);
    }
}

TEST_CASE("var_product reconstructs the sample variance of a product") {
    const Sample2 s = draw_pair(99, 100000, -0.4);
    const auto ab = prod(s.a, s.b);
    const double direct = SampleStats::sd(ab) * SampleStats::sd(ab);
    const auto a2 = prod(s.a, s.a), b2 = prod(s.b, s.b);
    const double v = var_product(pair_stats(s), SampleStats::correlation(a2, b2), SampleStats::sd(a2),
                                 SampleStats::sd(b2), SampleStats::mean(a2), SampleStats::mean(b2));
    CHECK(std::fabs(v - direct) <= 1e-12 * direct);
}

TEST_CASE("normal_plus_moment closed forms at mu=0, sigma=1") {
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
    CHECK(normal_plus_moment(0.0, 1.0, 1) == doctest::Approx(inv_sqrt_2pi).epsilon(1e-14));
    CHECK(normal_plus_moment(0.0, 1.0, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(normal_plus_moment(0.0, 1.0, 3) == doctest::Approx(2.0 * inv_sqrt_2pi).epsilon(1e-14));
    CHECK(normal_plus_moment(0.0, 1.0, 4) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("normal_plus_moment deep in-the-money limit") {
    // mu >> sigma: E[(X+)^k] -> E[X^k] -> mu^k
    const double mu = 0.05, sigma = 1e-6;
    CHECK(normal_plus_moment(mu, sigma, 1) == doctest::Approx(mu).epsilon(1e-9));
    CHECK(normal_plus_moment(mu, sigma, 4) == doctest::Approx(mu * mu * mu * mu).epsilon(1e-6));
}

TEST_CASE("normal_plus_moment against Monte Carlo") {
    const double mu = 0.01, sigma = 0.02;
    const std::size_t n = 10000000;
    Rng rng(2024);
    double sums[9] = {}; // sums of p^k up to k = 8 for the error estimate
    for (std::size_t i = 0; i < n; ++i) {
        const double x = mu + sigma * rng.normal();
        const double p = x > 0.0 ? x : 0.0;
        double acc = 1.0;
        for (int k = 1; k <= 8; ++k) {
            acc *= p;
            sums[k] += acc;
        }
    }
    for (int k = 1; k <= 4; ++k) {
        const double mc = sums[k] / static_cast<double>(n);
        const double mc2k = sums[2 * k] / static_cast<double>(n);
        const double se = std::sqrt(std::max(mc2k - mc * mc, 0.0) / static_cast<double>(n));
        CHECK(std::fabs(mc - normal_plus_moment(mu, sigma, k)) <= 3.0 * se + 1e-15);
    }
}

TEST_CASE("normal_plus_moment domain checks and shape properties") {
    CHECK_THROWS_AS(normal_plus_moment(0.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(normal_plus_moment(0.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(normal_plus_moment(0.0, 0.0, 1), DomainError);
    CHECK_THROWS_AS(normal_plus_moment(0.0, -1.0, 2), DomainError);

    for (int order = 1; order <= 4; ++order) {
        double prev = -1.0;
        for (double mu = -0.05; mu <= 0.05; mu += 0.001) {
            const double m = normal_plus_moment(mu, 0.01, order);
            CHECK(m >= prev); // monotone increasing in mu
            prev = m;
        }
    }
    for (double mu : {-0.02, 0.0, 0.015}) {
        const double m1 = normal_plus_moment(mu, 0.01, 1);
        CHECK(normal_plus_moment(mu, 0.01, 2) >= m1 * m1);
    }
}

TEST_CASE("normal_moment raw moments") {
    const double mu = 0.7, s = 1.3;
    CHECK(normal_moment(mu, s, 1) == doctest::Approx(mu));
    CHECK(normal_moment(mu, s, 2) == doctest::Approx(mu * mu + s * s));
    CHECK(normal_moment(mu, s, 4) ==
          doctest::Approx(std::pow(mu, 4) + 6 * mu * mu * s * s + 3 * std::pow(s, 4)));
    CHECK_THROWS_AS(normal_moment(0.0, 1.0, 5), DomainError);
}

TEST_CASE("SampleStats conventions") {
    const std::vector<double> constant(10, 3.0);
    const std::vector<double> ramp{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(SampleStats::sd(constant) == 0.0);
    CHECK(SampleStats::correlation(constant, ramp) == 0.0); // degenerate convention
    CHECK(SampleStats::correlation(ramp, ramp) == doctest::Approx(1.0));
    std::vector<double> neg(ramp.size());
    for (std::size_t i = 0; i < ramp.size(); ++i) neg[i] = -ramp[i];
    CHECK(SampleStats::correlation(ramp, neg) == doctest::Approx(-1.0));
    // population normalization: two points (x, y) have sd |x - y| / 2
    CHECK(SampleStats::sd(std::vector<double>{1.0, 5.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(SampleStats::mean(std::vector<double>{}), DomainError);
}
