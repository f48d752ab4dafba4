#pragma once

#include "smt/seeding.hpp"
#include "smt/special.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace smt {

/// L_zeta = integral of exp(-|x|^zeta / zeta) over the real line,
/// in closed form 2 zeta^{1/zeta - 1} Gamma(1/zeta). Requires zeta > 1.
double normalizing_constant(double zeta);

/// Centred Subbotin (generalized Gaussian) noise with density
/// f(x) = exp(-|x|^zeta / zeta) / L_zeta, zeta > 1. zeta = 2 is N(0, 1).
///
/// Tails reduce to the upper regularized incomplete gamma function:
/// for x >= 0, Fbar(x) = Q(1/zeta, x^zeta / zeta) / 2. Negative arguments go
/// through Fbar(-x) = 1 - Fbar(x), so the symmetry holds by construction.
///
/// Immutable after construction; safe to share across threads.
class NoiseDist {
public:
    explicit NoiseDist(double zeta);

    double zeta() const noexcept { return zeta_; }
    double log_norm() const noexcept { return log_norm_; }
    bool is_gaussian() const noexcept { return zeta_ == 2.0; }

    double density(double x) const;
    double log_density(double x) const;

    /// Fbar(x) = P(eps > x).
    double upper_tail(double x) const;
    /// log Fbar(x); finite far beyond the double underflow of Fbar.
    double log_upper_tail(double x) const;

    /// x with Fbar(x) = t, for t in (0, 1).
    double upper_tail_inv(double t) const;
    /// x with log Fbar(x) = log_t, for log_t < 0. Handles t below 1e-300.
    double upper_tail_inv_log(double log_t) const;

    /// `count` i.i.d. draws; deterministic in `seed`.
    std::vector<double> sample(std::uint64_t seed, std::size_t count) const;

    /// Fill `out` with i.i.d. draws from `engine`. |eps| = (zeta G)^{1/zeta} with
    /// G ~ Gamma(1/zeta, 1), and an independent fair sign.
    void fill(Engine& engine, std::span<double> out) const;

    /// A single draw from `engine`.
    double draw(Engine& engine) const;

    /// Stateful draw-by-draw sampler; reuses the gamma generator between calls.
    class Sampler {
    public:
        explicit Sampler(const NoiseDist& dist)
            : dist_(&dist)
            , gamma_(dist.inv_zeta_, 1.0)
        {
        }
        double operator()(Engine& engine);

    private:
        const NoiseDist* dist_;
        std::gamma_distribution<double> gamma_;
    };

private:
    double zeta_;
    double inv_zeta_;
    double log_norm_;
    special::IncompleteGamma gamma_;
};

} // namespace smt
