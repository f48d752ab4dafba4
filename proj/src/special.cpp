#include "smt/special.hpp"

#include "smt/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace smt::special {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

} // namespace

IncompleteGamma::IncompleteGamma(double shape)
    : shape_(shape)
{
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw DomainError("incomplete gamma: shape must be positive, got " + std::to_string(shape));
    }
    log_gamma_shape_ = std::lgamma(shape);
}

UpperGamma IncompleteGamma::upper(double x) const
{
    if (!(x >= 0.0)) {
        throw DomainError("incomplete gamma: x must be non-negative");
    }
    if (x == 0.0) {
        return {1.0, 0.0};
    }
    if (std::isinf(x)) {
        return {0.0, -std::numeric_limits<double>::infinity()};
    }

    const double a = shape_;
    // log(x^a e^{-x} / Gamma(a))
    const double log_prefix = a * std::log(x) - x - log_gamma_shape_;

    if (x < a + 1.0) {
        // P(a,x) = x^a e^{-x} / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= kMaxIterations; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * kEps) {
                const double p = std::exp(log_prefix - std::log(a)) * sum;
                return {1.0 - p, std::log1p(-p)};
            }
        }
        throw NumericalError("incomplete gamma series did not converge");
    }

    // Modified Lentz evaluation of the continued fraction for Q.
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) {
            d = kTiny;
        }
        c = b + an / c;
        if (std::fabs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            const double log_q = log_prefix + std::log(h);
            return {std::exp(log_q), log_q};
        }
    }
    throw NumericalError("incomplete gamma continued fraction did not converge");
}

double IncompleteGamma::lower(double x) const
{
    if (!(x > 0.0)) {
        return 0.0;
    }
    const double a = shape_;
    if (x < a + 1.0) {
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= kMaxIterations; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * kEps) {
                return std::exp(a * std::log(x) - x - log_gamma_shape_ - std::log(a)) * sum;
            }
        }
        throw NumericalError("incomplete gamma series did not converge");
    }
    return -std::expm1(upper(x).log_q);
}

} // namespace smt::special
