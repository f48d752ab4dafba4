#include "smt/errors.hpp"
#include "smt/model.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace smt;
using Catch::Approx;

TEST_CASE("oracle threshold", "[model]")
{
    // n / s_n = e^2 is not an integer ratio, so check the formula through a direct call.
    const std::size_t n = 738'905'610;  // ~ e^2 * 1e8
    const double expected = std::sqrt(2.0 * std::log(static_cast<double>(n) / 1e8));
    CHECK(oracle_threshold(n, 100'000'000, 2.0) == Approx(expected).epsilon(1e-15));
    CHECK(std::fabs(oracle_threshold(n, 100'000'000, 2.0) - 2.0) < 1e-8);
    CHECK(oracle_threshold(10'000'000'000ULL, 100, 2.0) == Approx(std::sqrt(2.0 * std::log(1e8))).epsilon(1e-15));
    CHECK(oracle_threshold(10'000'000'000ULL, 100, 2.0) == Approx(6.0697).margin(1e-4));
    CHECK(oracle_threshold(271'828'183, 100'000'000, 4.0) == Approx(std::pow(4.0, 0.25)).margin(1e-8));

    CHECK_THROWS_AS(oracle_threshold(100, 0, 2.0), DomainError);
    CHECK_THROWS_AS(oracle_threshold(100, 100, 2.0), DomainError);
    CHECK_THROWS_AS(oracle_threshold(100, 200, 2.0), DomainError);
    CHECK_THROWS_AS(oracle_threshold(100, 10, 1.0), DomainError);
}

TEST_CASE("signal config validation", "[model]")
{
    auto c = SignalConfig::single_strength(100, 5, 2.0, 0.0);
    CHECK_NOTHROW(c.validate());
    c.offsets.pop_back();
    CHECK_THROWS_AS(c.validate(), DomainError);

    const double a = oracle_threshold(100, 5, 2.0);
    CHECK_THROWS_AS(SignalConfig::single_strength(100, 5, 2.0, -a).validate(), DomainError);
    CHECK_NOTHROW(SignalConfig::single_strength(100, 5, 2.0, -a + 1e-9).validate());
    CHECK_THROWS_AS(SignalConfig::single_strength(100, 101, 2.0, 0.0).validate(), DomainError);
    CHECK_THROWS_AS(SignalConfig::single_strength(100, 100, 2.0, 0.0).validate(), DomainError);

    SignalConfig empty;
    empty.n = 10;
    CHECK_NOTHROW(empty.validate());
}

TEST_CASE("make_theta", "[model]")
{
    SECTION("s_n = 0 gives the zero vector")
    {
        SignalConfig c;
        c.n = 50;
        const auto theta = make_theta(c, 1);
        CHECK(theta.size() == 50);
        CHECK(theta.support.empty());
        CHECK(std::all_of(theta.values.begin(), theta.values.end(), [](double v) { return v == 0.0; }));
    }
    SECTION("single strength, first-s, positive")
    {
        const auto c = SignalConfig::single_strength(100, 7, 2.0, 0.5);
        const auto theta = make_theta(c, 1);
        const double ab = oracle_threshold(100, 7, 2.0) + 0.5;
        for (std::size_t i = 0; i < 100; ++i) {
            CHECK(theta.values[i] == (i < 7 ? ab : 0.0));
        }
        CHECK(theta.support == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
    }
    SECTION("two strengths with beta = 1/2 at (1, 3)")
    {
        const auto c = SignalConfig::two_strength(1000, 21, 2.0, 1.0, 3.0, 0.5);
        const auto theta = make_theta(c, 1);
        const double a = oracle_threshold(1000, 21, 2.0);
        std::size_t strong = 0;
        std::size_t weak = 0;
        for (std::size_t i : theta.support) {
            strong += theta.values[i] == a + 3.0;
            weak += theta.values[i] == a + 1.0;
        }
        CHECK(strong == 10);
        CHECK(weak == 11);
        CHECK(SignalConfig::two_strength(1000, 21, 2.0, 3.0, 1.0, 0.5).offsets == c.offsets);
    }
    SECTION("random placement and signs stay in the class")
    {
        auto c = SignalConfig::single_strength(200, 30, 3.0, -0.5);
        c.placement = Placement::UniformRandom;
        c.signs = SignRule::Random;
        std::size_t negatives = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto theta = make_theta(c, seed);
            CHECK(theta.support.size() == 30);
            CHECK(std::is_sorted(theta.support.begin(), theta.support.end()));
            CHECK(std::set<std::size_t>(theta.support.begin(), theta.support.end()).size() == 30);
            CHECK(in_signal_class(theta, c));
            for (std::size_t i : theta.support) {
                negatives += theta.values[i] < 0.0;
            }
        }
        CHECK(negatives > 600);
        CHECK(negatives < 900);
        CHECK(make_theta(c, 3).values == make_theta(c, 3).values);
        CHECK(make_theta(c, 3).support != make_theta(c, 4).support);
    }
    SECTION("invalid configs are rejected")
    {
        auto c = SignalConfig::single_strength(100, 5, 2.0, -10.0);
        CHECK_THROWS_AS(make_theta(c, 1), DomainError);
    }
}

TEST_CASE("class membership", "[model]")
{
    const auto c = SignalConfig::two_strength(100, 4, 2.0, 0.0, 1.0, 0.5);
    auto theta = make_theta(c, 0);
    CHECK(in_signal_class(theta, c));
    theta.values[theta.support[0]] *= 0.99;
    CHECK_FALSE(in_signal_class(theta, c));
    theta = make_theta(c, 0);
    theta.values[theta.support[0]] = -theta.values[theta.support[0]] - 5.0;
    CHECK(in_signal_class(theta, c));
    theta.values[theta.support[1]] = 0.0;
    theta.support.erase(theta.support.begin() + 1);
    CHECK_FALSE(in_signal_class(theta, c));
}

TEST_CASE("sample_data", "[model]")
{
    const NoiseDist noise(2.0);
    SignalConfig zero;
    zero.n = 1000;
    const auto theta0 = make_theta(zero, 1);
    const auto x = sample_data(theta0, noise, 42);
    CHECK(x.size() == 1000);

    Engine engine = make_engine(42);
    std::vector<double> eps(1000);
    noise.fill(engine, eps);
    CHECK(x == eps);
    CHECK(sample_data(theta0, noise, 42) == x);

    auto theta = theta0;
    theta.values[17] = 1e6;
    theta.support = {17};
    const auto reference = sample_data(theta0, noise, 0);
    std::size_t inside = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto y = sample_data(theta, noise, s);
        inside += y[17] >= 1e6 - 100.0 && y[17] <= 1e6 + 100.0;
        if (s == 0) {
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (i != 17) {
                    CHECK(y[i] == reference[i]);
                }
            }
        }
    }
    CHECK(inside == 200);
}
