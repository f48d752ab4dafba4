#include "smt/model.hpp"

#include "smt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

namespace smt {

double oracle_threshold(std::size_t n, std::size_t s_n, double zeta)
{
    if (s_n == 0 || s_n >= n) {
        throw DomainError("oracle threshold requires 0 < s_n < n (n=" + std::to_string(n) +
                          ", s_n=" + std::to_string(s_n) + ")");
    }
    if (!(zeta > 1.0)) {
        throw DomainError("oracle threshold requires zeta > 1");
    }
    const double ratio = static_cast<double>(n) / static_cast<double>(s_n);
    return std::pow(zeta * std::log(ratio), 1.0 / zeta);
}

void SignalConfig::validate() const
{
    if (!(zeta > 1.0)) {
        throw DomainError("signal config: zeta must exceed 1");
    }
    if (n == 0) {
        throw DomainError("signal config: n must be positive");
    }
    if (s_n > n) {
        throw DomainError("signal config: s_n exceeds n");
    }
    if (offsets.size() != s_n) {
        throw DomainError("signal config: expected " + std::to_string(s_n) + " offsets, got " +
                          std::to_string(offsets.size()));
    }
    if (s_n == 0) {
        return;
    }
    if (s_n == n) {
        throw DomainError("signal config: n/s_n must exceed 1");
    }
    const double a_star = oracle_threshold(n, s_n, zeta);
    for (double b : offsets) {
        if (!(b > -a_star) || !std::isfinite(b)) {
            throw DomainError("signal config: offset " + std::to_string(b) +
                              " violates b_j > -a*_n = " + std::to_string(-a_star));
        }
    }
}

std::vector<double> SignalConfig::magnitudes() const
{
    std::vector<double> out(offsets.size());
    if (s_n == 0) {
        return out;
    }
    const double a_star = oracle_threshold(n, s_n, zeta);
    std::transform(offsets.begin(), offsets.end(), out.begin(), [&](double b) { return a_star + b; });
    return out;
}

SignalConfig SignalConfig::single_strength(std::size_t n, std::size_t s_n, double zeta, double b)
{
    SignalConfig c;
    c.n = n;
    c.s_n = s_n;
    c.zeta = zeta;
    c.offsets.assign(s_n, b);
    return c;
}

SignalConfig SignalConfig::two_strength(std::size_t n, std::size_t s_n, double zeta, double x,
                                        double y, double beta)
{
    if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError("two-strength config: beta must lie in (0, 1)");
    }
    SignalConfig c;
    c.n = n;
    c.s_n = s_n;
    c.zeta = zeta;
    const auto strong = static_cast<std::size_t>(std::floor(static_cast<double>(s_n) * beta));
    c.offsets.assign(s_n, std::min(x, y));
    std::fill_n(c.offsets.begin(), strong, std::max(x, y));
    return c;
}

ThetaVector make_theta(const SignalConfig& config, std::uint64_t seed)
{
    config.validate();
    ThetaVector theta;
    theta.values.assign(config.n, 0.0);
    if (config.s_n == 0) {
        return theta;
    }

    Engine engine = make_engine(seed);
    std::vector<std::size_t> positions(config.s_n);
    if (config.placement == Placement::FirstS) {
        std::iota(positions.begin(), positions.end(), std::size_t{0});
    } else {
        // Partial Fisher-Yates over the index set.
        std::vector<std::size_t> pool(config.n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t j = 0; j < config.s_n; ++j) {
            std::uniform_int_distribution<std::size_t> pick(j, config.n - 1);
            std::swap(pool[j], pool[pick(engine)]);
            positions[j] = pool[j];
        }
    }

    const std::vector<double> mags = config.magnitudes();
    for (std::size_t j = 0; j < config.s_n; ++j) {
        double v = mags[j];
        if (config.signs == SignRule::Random && (engine() >> 63)) {
            v = -v;
        }
        theta.values[positions[j]] = v;
    }
    theta.support = positions;
    std::sort(theta.support.begin(), theta.support.end());
    return theta;
}

bool in_signal_class(const ThetaVector& theta, const SignalConfig& config)
{
    if (theta.values.size() != config.n) {
        return false;
    }
    std::vector<double> nonzero;
    for (double v : theta.values) {
        if (v != 0.0) {
            nonzero.push_back(std::fabs(v));
        }
    }
    if (nonzero.size() != config.s_n) {
        return false;
    }
    std::vector<double> floors = config.magnitudes();
    std::sort(nonzero.begin(), nonzero.end(), std::greater<>());
    std::sort(floors.begin(), floors.end(), std::greater<>());
    for (std::size_t j = 0; j < floors.size(); ++j) {
        if (nonzero[j] < floors[j]) {
            return false;
        }
    }
    return true;
}

void sample_data_into(const ThetaVector& theta, const NoiseDist& noise, Engine& engine,
                      std::span<double> out)
{
    if (out.size() != theta.values.size()) {
        throw DomainError("sample_data: output size does not match theta");
    }
    noise.fill(engine, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += theta.values[i];
    }
}

std::vector<double> sample_data(const ThetaVector& theta, const NoiseDist& noise, std::uint64_t seed)
{
    std::vector<double> x(theta.values.size());
    Engine engine = make_engine(seed);
    sample_data_into(theta, noise, engine, x);
    return x;
}

} // namespace smt
