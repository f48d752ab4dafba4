#include "smt/boundary.hpp"
#include "smt/cli/commands.hpp"
#include "smt/replicate.hpp"
#include "smt/risk.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace smt;

namespace {

void require_close(const RiskReport& a, const RiskReport& b)
{
    const double tol = 1e-12;
    REQUIRE(std::fabs(a.fdr - b.fdr) <= tol);
    REQUIRE(std::fabs(a.fnr - b.fnr) <= tol);
    REQUIRE(std::fabs(a.combined - b.combined) <= tol);
    REQUIRE(std::fabs(a.hamming_mean - b.hamming_mean) <= tol * std::max(1.0, a.hamming_mean));
    REQUIRE(std::fabs(a.se_fdr - b.se_fdr) <= tol);
    REQUIRE(std::fabs(a.se_fnr - b.se_fnr) <= tol);
    REQUIRE(std::fabs(a.se_combined - b.se_combined) <= tol);
    REQUIRE(std::fabs(a.mfdr - b.mfdr) <= tol);
    REQUIRE(std::fabs(a.se_mfdr - b.se_mfdr) <= tol);
    REQUIRE(a.reps == b.reps);
}

bool same(const RiskReport& a, const RiskReport& b)
{
    return a.fdr == b.fdr && a.fnr == b.fnr && a.combined == b.combined && a.hamming_mean == b.hamming_mean &&
           a.se_fdr == b.se_fdr && a.se_fnr == b.se_fnr && a.se_combined == b.se_combined && a.mfdr == b.mfdr;
}

} // namespace

TEST_CASE("pairwise summation and standard errors", "[parallel]")
{
    std::vector<double> v(1001);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u;
    for (double& x : v) {
        x = u(rng);
    }
    long double exact = 0.0L;
    for (double x : v) {
        exact += x;
    }
    CHECK(std::fabs(pairwise_sum(v) - static_cast<double>(exact)) <= 1e-12);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
    const auto m = mean_and_se(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.se == Catch::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-15));
    CHECK(mean_and_se(std::vector<double>{7.0}).se == 0.0);
}

TEST_CASE("replicate runner propagates exceptions", "[parallel]")
{
    CHECK_THROWS_AS(run_replicates<double>(100, 4,
                                           [](std::size_t r) -> double {
                                               if (r == 37) {
                                                   throw std::runtime_error("boom");
                                               }
                                               return 1.0;
                                           }),
                    std::runtime_error);
}

TEST_CASE("parallel Monte Carlo agrees with the serial reference", "[parallel]")
{
    const NoiseDist gauss(2.0);
    const NoiseDist heavy(1.5);
    auto c = SignalConfig::two_strength(500, 12, 2.0, -0.5, 1.0, 0.5);
    c.signs = SignRule::Random;
    c.placement = Placement::UniformRandom;
    for (const ProcedureSpec& p : {ProcedureSpec{procedure::BH{0.1}}, ProcedureSpec{procedure::LValue{0.3}},
                                   ProcedureSpec{procedure::OracleThreshold{}},
                                   ProcedureSpec{procedure::FixedThreshold{2.0}}}) {
        const auto serial = monte_carlo_risk_serial(c, gauss, p, 400, 5);
        for (int threads : {1, 2, 4, 8}) {
            const auto par = monte_carlo_risk(c, gauss, p, 400, 5, threads);
            require_close(serial, par);
            REQUIRE(same(par, monte_carlo_risk(c, gauss, p, 400, 5, 1)));
        }
    }
    auto h = SignalConfig::single_strength(300, 5, 1.5, 0.0);
    require_close(monte_carlo_risk_serial(h, heavy, procedure::BH{0.2}, 300, 6),
                  monte_carlo_risk(h, heavy, procedure::BH{0.2}, 300, 6, 3));

    for (int threads : {1, 2, 4, 8}) {
        for (std::size_t rho : {1u, 3u}) {
            const auto a = pn_lower(0.2, rho, 20'000, 20, gauss, 500, 9, threads);
            const auto b = pn_lower_serial(0.2, rho, 20'000, 20, gauss, 500, 9);
            REQUIRE(a.value == b.value);
            REQUIRE(std::fabs(a.se - b.se) <= 1e-12);
        }
    }
    const std::vector<double> offsets{0.0, 0.0, 1.0, 1.0};
    REQUIRE(fbar_n(offsets, 1, 400, 4, gauss, 300, 3, 1).value == fbar_n(offsets, 1, 400, 4, gauss, 300, 3, 8).value);
}

TEST_CASE("command output is byte-identical across thread counts", "[parallel][cli]")
{
    cli::Fig4Config f;
    f.n = 3000;
    f.reps = 6;
    f.points = {{"level", 0.5, 0.0, 0.0}, {"line", 0.0, -1.0, 1.0}, {"line", 0.0, -2.0, 2.0}};
    const auto f1 = cli::run_fig4(f, 1);

    cli::SimulateConfig s;
    s.n = 800;
    s.s_n = 8;
    s.b = {-1.0, 0.5};
    s.procedures = {procedure::BH{0.1}, procedure::LValue{0.3}};
    s.reps = 40;
    s.signs = SignRule::Random;
    const auto s1 = cli::run_simulate(s, 1);

    cli::BoundaryConfig b;
    b.n = 20'000;
    b.s_n = 10;
    b.rho = 2;
    b.alpha = 0.1;
    b.reps = 300;
    const auto b1 = cli::run_boundary(b, 1);

    for (int threads : {2, 4, 8}) {
        CHECK(cli::run_fig4(f, threads) == f1);
        CHECK(cli::run_simulate(s, threads) == s1);
        CHECK(cli::run_boundary(b, threads) == b1);
    }
    s.seed = 2;
    CHECK(cli::run_simulate(s, 1) != s1);
}
