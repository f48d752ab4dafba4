#include "smt/subbotin.hpp"

#include "smt/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace smt {

namespace {

double checked_zeta(double zeta)
{
    if (!(zeta > 1.0) || !std::isfinite(zeta)) {
        throw DomainError("Subbotin shape must satisfy zeta > 1, got " + std::to_string(zeta));
    }
    return zeta;
}

double log_normalizing_constant(double zeta)
{
    return std::numbers::ln2 + (1.0 / zeta - 1.0) * std::log(zeta) + std::lgamma(1.0 / zeta);
}

constexpr int kQuantileMaxIterations = 200;

} // namespace

double normalizing_constant(double zeta)
{
    return std::exp(log_normalizing_constant(checked_zeta(zeta)));
}

NoiseDist::NoiseDist(double zeta)
    : zeta_(checked_zeta(zeta))
    , inv_zeta_(1.0 / zeta)
    , log_norm_(log_normalizing_constant(zeta))
    , gamma_(1.0 / zeta)
{
}

double NoiseDist::log_density(double x) const
{
    return -std::pow(std::fabs(x), zeta_) * inv_zeta_ - log_norm_;
}

double NoiseDist::density(double x) const
{
    return std::exp(log_density(x));
}

double NoiseDist::upper_tail(double x) const
{
    if (std::isnan(x)) {
        return x;
    }
    if (x < 0.0) {
        return 1.0 - upper_tail(-x);
    }
    if (is_gaussian()) {
        const double v = 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
        if (v > 1e-300) {
            return v;
        }
    }
    return 0.5 * gamma_.upper(std::pow(x, zeta_) * inv_zeta_).q;
}

double NoiseDist::log_upper_tail(double x) const
{
    if (std::isnan(x)) {
        return x;
    }
    if (x < 0.0) {
        return std::log1p(-upper_tail(-x));
    }
    if (is_gaussian()) {
        const double v = 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
        if (v > 1e-300) {
            return std::log(v);
        }
    }
    return -std::numbers::ln2 + gamma_.upper(std::pow(x, zeta_) * inv_zeta_).log_q;
}

double NoiseDist::upper_tail_inv(double t) const
{
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("upper_tail_inv: t must lie in (0, 1), got " + std::to_string(t));
    }
    if (t == 0.5) {
        return 0.0;
    }
    if (t > 0.5) {
        return -upper_tail_inv_log(std::log1p(-t));
    }
    return upper_tail_inv_log(std::log(t));
}

double NoiseDist::upper_tail_inv_log(double log_t) const
{
    if (!(log_t < 0.0) || std::isnan(log_t)) {
        throw DomainError("upper_tail_inv_log: log_t must be negative");
    }
    if (log_t > -std::numbers::ln2) {
        // t in (1/2, 1): mirror onto the upper half.
        return -upper_tail_inv_log(std::log(-std::expm1(log_t)));
    }
    if (log_t == -std::numbers::ln2) {
        return 0.0;
    }

    // Bracket [lo, hi] with log Fbar(lo) >= log_t > log Fbar(hi).
    double lo = 0.0;
    double hi = 1.0;
    while (log_upper_tail(hi) >= log_t) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            throw NumericalError("upper_tail_inv: failed to bracket the quantile");
        }
    }

    // Newton on h(x) = log Fbar(x) - log_t, h'(x) = -f(x)/Fbar(x), kept inside the bracket.
    double x = std::pow(std::max(zeta_ * (-log_t - log_norm_), 0.0), inv_zeta_);
    if (!(x > lo && x < hi)) {
        x = 0.5 * (lo + hi);
    }
    for (int it = 0; it < kQuantileMaxIterations; ++it) {
        const double log_tail = log_upper_tail(x);
        const double h = log_tail - log_t;
        if (std::fabs(h) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(log_t))) {
            return x;
        }
        if (h > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) {
            return 0.5 * (lo + hi);
        }
        double next = x + h * std::exp(log_tail - log_density(x));
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    throw NumericalError("upper_tail_inv: no convergence within 200 iterations");
}

double NoiseDist::Sampler::operator()(Engine& engine)
{
    const double g = gamma_(engine);
    const double magnitude =
        dist_->is_gaussian() ? std::sqrt(2.0 * g) : std::pow(dist_->zeta_ * g, dist_->inv_zeta_);
    return (engine() >> 63) ? -magnitude : magnitude;
}

double NoiseDist::draw(Engine& engine) const
{
    return Sampler(*this)(engine);
}

void NoiseDist::fill(Engine& engine, std::span<double> out) const
{
    Sampler sampler(*this);
    for (double& v : out) {
        v = sampler(engine);
    }
}

std::vector<double> NoiseDist::sample(std::uint64_t seed, std::size_t count) const
{
    std::vector<double> out(count);
    Engine engine = make_engine(seed);
    fill(engine, out);
    return out;
}

} // namespace smt
