#include "smt/boundary.hpp"
#include "smt/errors.hpp"
#include "smt/seeding.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace smt;
using Catch::Approx;

namespace {
const NoiseDist kGauss(2.0);
}

TEST_CASE("lambda_n", "[boundary]")
{
    CHECK(lambda_n(std::vector<double>(20, 0.0), kGauss) == 0.5);
    const std::vector<double> two{1.0, 3.0};
    const double expected = (oracle::gauss_upper_tail(1.0) + oracle::gauss_upper_tail(3.0)) / 2.0;
    CHECK(lambda_n(two, kGauss) == Approx(expected).epsilon(1e-14));
    CHECK(lambda_n(two, kGauss) == Approx(0.0800).margin(1e-4));
    CHECK(lambda_n(std::vector<double>(5, 40.0), kGauss) < 1e-300);
    CHECK_THROWS_AS(lambda_n(std::vector<double>{}, kGauss), DomainError);

    std::mt19937_64 rng(31);
    std::normal_distribution<double> draw(0.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> b(12);
        for (double& v : b) {
            v = draw(rng);
        }
        const double base = lambda_n(b, kGauss);
        auto reversed = b;
        std::reverse(reversed.begin(), reversed.end());
        CHECK(lambda_n(reversed, kGauss) == Approx(base).epsilon(1e-15));
        auto raised = b;
        raised[rep % 12] += 0.1;
        CHECK(lambda_n(raised, kGauss) < base);
    }
}

TEST_CASE("minimax limit", "[boundary]")
{
    CHECK(minimax_risk_limit(0.0, kGauss) == 0.5);
    CHECK(minimax_risk_limit(-40.0, kGauss) == 1.0);
    CHECK(minimax_risk_limit(40.0, kGauss) < 1e-300);
    CHECK(minimax_risk_limit(1.0, kGauss) == Approx(oracle::gauss_upper_tail(1.0)).epsilon(1e-14));
}

TEST_CASE("two-signal level lattice", "[boundary]")
{
    std::vector<double> grid;
    for (int k = 0; k < 50; ++k) {
        grid.push_back(-5.0 + 10.0 * k / 49.0);
    }
    for (double z : {1.5, 2.0, 4.0}) {
        const NoiseDist d(z);
        for (double beta : {0.25, 0.5, 0.8}) {
            const auto v = two_signal_levels(beta, d, grid, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    REQUIRE(std::fabs(v[i * grid.size() + j] - v[j * grid.size() + i]) <= 1e-14);
                }
            }
        }
    }

    CHECK(two_signal_lambda(1.0, 3.0, 0.5, kGauss) > two_signal_lambda(2.0, 2.0, 0.5, kGauss));
    CHECK(two_signal_lambda(2.0, 2.0, 0.5, kGauss) == Approx(0.022750131948179).epsilon(1e-12));
    for (double x : {0.0, 0.3, 1.0, 2.5, 6.0}) {
        CHECK(two_signal_lambda(x, -x, 0.5, kGauss) == Approx(0.5).margin(1e-15));
    }
    CHECK(two_signal_lambda(0.0, 3.0, 0.25, kGauss) > two_signal_lambda(0.0, 3.0, 0.5, kGauss));

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> pos(0.01, 5.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double x = pos(rng);
        const double y = pos(rng);
        const double m = (x + y) / 2.0;
        CHECK(two_signal_lambda(x, y, 0.5, kGauss) > two_signal_lambda(m, m, 0.5, kGauss));
    }
    const std::vector<double> xs{0.0};
    const std::vector<double> ys{1.0, 2.0};
    CHECK(two_signal_levels(0.5, kGauss, xs, ys).size() == 2);
    CHECK_THROWS_AS(two_signal_levels(1.0, kGauss, xs, ys), DomainError);
    CHECK_THROWS_AS(two_signal_lambda(0.0, 1.0, 0.0, kGauss), DomainError);
}

TEST_CASE("BH fixed point", "[boundary][tstar]")
{
    const std::size_t n = 1'000'000;
    const std::size_t s = 20;
    const double a = oracle_threshold(n, s, 2.0);
    const std::vector<double> zeros(s, 0.0);
    const double alpha_n = 1.0 / std::sqrt(std::log(static_cast<double>(n)));

    const auto sol = tstar(n, s, alpha_n, zeros, kGauss);
    CHECK(sol.residual < 1e-10);
    CHECK(std::fabs(sol.t - a) < 0.5);
    CHECK(sol.t == Approx(4.75235619459458).epsilon(1e-11));

    // Residual recomputed from independent tails.
    const double ft = oracle::gauss_upper_tail(sol.t);
    const double lhs = (1.0 - 1.0 * s / n) * 2.0 * ft + (1.0 * s / n) * oracle::gauss_upper_tail(sol.t - a);
    const double rhs = 3.0 * ft / alpha_n;
    CHECK(std::fabs(lhs - rhs) / rhs < 1e-10);

    double prev = tstar(n, s, 0.01, zeros, kGauss).t;
    for (double alpha : {0.05, 0.2}) {
        const double t = tstar(n, s, alpha, zeros, kGauss).t;
        CHECK(t < prev);
        prev = t;
    }

    const std::vector<double> mixed{-1.0, 0.0, 0.5, 2.0};
    for (double z : {1.5, 3.0}) {
        const NoiseDist d(z);
        const auto m = tstar(10'000, 4, 0.1, mixed, d);
        CHECK(m.residual < 1e-10);
        CHECK(tstar_psi(m.t, 10'000, 4, mixed, d) == Approx(m.tau).epsilon(1e-9));
        double last = tstar_psi(0.0, 10'000, 4, mixed, d);
        for (double t = 0.1; t < m.t + 5.0; t += 0.1) {
            const double p = tstar_psi(t, 10'000, 4, mixed, d);
            CHECK(p > last);
            last = p;
        }
    }

    CHECK_THROWS_AS(tstar(n, s, 1.0, zeros, kGauss), DomainError);
    CHECK_THROWS_AS(tstar(n, s, 0.0, zeros, kGauss), DomainError);
    CHECK_THROWS_AS(tstar(n, s, 0.1, std::vector<double>(s, -a), kGauss), DomainError);
    CHECK_THROWS_AS(tstar(n, s, 0.1, std::vector<double>(3, 0.0), kGauss), DomainError);
}

TEST_CASE("omega", "[boundary]")
{
    const double q = 1e4;
    const double delta = 0.5;
    const double expected = std::exp(-(q - 1.0) * oracle::gauss_upper_tail(std::sqrt(2.0 * std::log(q)) - delta));
    CHECK(lower_bound_omega(delta, q, kGauss) == Approx(expected).epsilon(1e-12));
    const double frac = std::exp(-99.0 * oracle::gauss_upper_tail(std::sqrt(2.0 * std::log(100.5)) - delta));
    CHECK(lower_bound_omega(delta, 100.5, kGauss) == Approx(frac).epsilon(1e-12));
    CHECK(lower_bound_omega(1.0, q, kGauss) < lower_bound_omega(0.5, q, kGauss));
}

TEST_CASE("p_n Monte Carlo", "[boundary][pn]")
{
    const std::size_t n = 1000;
    const std::size_t s = 10;  // n / s = 100

    CHECK(pn_lower(0.0, 99, n, s, kGauss, 100, 1).value == 0.0);
    CHECK(pn_lower(0.0, 100, n, s, kGauss, 100, 1).value == 0.0);
    CHECK(pn_lower(0.0, 98, n, s, kGauss, 100, 1).reps == 100);
    CHECK_THROWS_AS(pn_lower(0.0, 0, n, s, kGauss, 100, 1), DomainError);
    CHECK_THROWS_AS(pn_lower(0.0, 1, 10, 6, kGauss, 100, 1), DomainError);
    CHECK_THROWS_AS(pn_lower(0.0, 1, n, s, kGauss, 0, 1), DomainError);

    const auto big = pn_lower(10.0, 1, 1'000'000, 100, kGauss, 2000, 2);
    CHECK(big.value <= 3.0 / 2000.0);

    for (double b : {-1.0, 0.0, 1.0}) {
        for (std::size_t rho : {1u, 2u, 4u}) {
            const auto p = pn_lower(b, rho, n, s, kGauss, 4000, 3);
            CHECK(p.value <= oracle::gauss_upper_tail(b) + std::exp(-static_cast<double>(rho)) + 3.0 * p.se);
        }
    }
}

TEST_CASE("p_n is monotone under common random numbers", "[boundary][pn][property]")
{
    const std::size_t n = 5000;
    const std::size_t s = 10;
    for (double z : {1.5, 2.0}) {
        const NoiseDist d(z);
        double prev_b = 1.0;
        for (double b = -2.0; b <= 2.0; b += 0.5) {
            const double p = pn_lower(b, 1, n, s, d, 2000, 4).value;
            CHECK(p <= prev_b);
            prev_b = p;
            double prev_rho = 1.0;
            for (std::size_t rho = 1; rho <= 5; ++rho) {
                const double q = pn_lower(b, rho, n, s, d, 2000, 4).value;
                CHECK(q <= prev_rho);
                prev_rho = q;
            }
        }
    }
}

TEST_CASE("p_n against quadrature", "[boundary][pn]")
{
    for (double z : {2.0, 3.0}) {
        const NoiseDist d(z);
        for (double b : {-0.5, 0.0, 0.5}) {
            const std::size_t n = 2000;
            const std::size_t s = 20;
            const double a_b = oracle_threshold(n, s, z) + b;
            const double exact = oracle::pn_rho1(z, a_b, n / s);
            const auto mc = pn_lower(b, 1, n, s, d, 20'000, 6);
            INFO("zeta=" << z << " b=" << b << " exact=" << exact);
            CHECK(std::fabs(mc.value - exact) <= 4.0 * mc.se);
        }
    }
}

TEST_CASE("Fbar_n", "[boundary][pn]")
{
    const std::size_t n = 1000;
    const std::size_t s = 4;
    const auto single = fbar_n(std::vector<double>(s, 0.3), 1, n, s, kGauss, 3000, 7);
    const auto direct = pn_lower(0.3, 1, n, s, kGauss, 3000, derive_seed(7, 0));
    CHECK(single.value == direct.value);

    const std::vector<double> mixed{0.0, 1.0, 0.0, 1.0};
    const auto est = fbar_n(mixed, 1, n, s, kGauss, 3000, 7);
    const auto p0 = pn_lower(0.0, 1, n, s, kGauss, 3000, derive_seed(7, 0));
    const auto p1 = pn_lower(1.0, 1, n, s, kGauss, 3000, derive_seed(7, 1));
    CHECK(est.value == Approx((p0.value + p1.value) / 2.0).epsilon(1e-15));
    CHECK(est.se > 0.0);
    CHECK_THROWS_AS(fbar_n(mixed, 1, n, 5, kGauss, 100, 7), DomainError);
}

TEST_CASE("lower-bound sandwich at moderate n / s_n", "[boundary][pn]")
{
    const std::size_t n = 100'000;
    const std::size_t s = 10;
    const double q = static_cast<double>(n / s);
    const double delta = 0.5;
    for (double b : {-1.0, 0.0, 1.0}) {
        const auto p = pn_lower(b, 1, n, s, kGauss, 2000, 8);
        const double omega = lower_bound_omega(delta, q, kGauss);
        INFO("b=" << b);
        CHECK(p.value + 3.0 * p.se >= oracle::gauss_upper_tail(b + delta) - std::pow(omega, 0.1));
        CHECK(p.value <= oracle::gauss_upper_tail(b) + std::exp(-1.0) + 3.0 * p.se);
    }
}
