#pragma once

namespace smt::special {

/// Upper regularized incomplete gamma Q(a, x) together with its logarithm.
/// `log_q` stays finite long after `q` underflows.
struct UpperGamma {
    double q;
    double log_q;
};

/// Regularized incomplete gamma for a fixed shape a > 0.
///
/// log Γ(a) is computed once at construction, so evaluation never touches
/// lgamma's global sign state and is safe from concurrent threads.
class IncompleteGamma {
public:
    explicit IncompleteGamma(double shape);

    double shape() const noexcept { return shape_; }

    /// Q(a, x) for x >= 0. Series for x < a + 1, Lentz continued fraction otherwise.
    UpperGamma upper(double x) const;

    /// P(a, x) = 1 - Q(a, x).
    double lower(double x) const;

private:
    double shape_;
    double log_gamma_shape_;
};

} // namespace smt::special
