#pragma once

#include "smt/seeding.hpp"
#include "smt/subbotin.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace smt {

enum class SignRule { AllPositive, Random };
enum class Placement { FirstS, UniformRandom };

/// A boundary point of the multi-signal class: s_n nonzero coordinates with
/// magnitudes a*_n + b_j, where a*_n = (zeta log(n/s_n))^{1/zeta}.
struct SignalConfig {
    std::size_t n = 0;
    std::size_t s_n = 0;
    double zeta = 2.0;
    std::vector<double> offsets;  // b_j, length s_n
    SignRule signs = SignRule::AllPositive;
    Placement placement = Placement::FirstS;

    /// Throws DomainError if s_n > n, n/s_n <= 1, offsets has the wrong length,
    /// or some b_j <= -a*_n.
    void validate() const;

    /// Nonzero magnitudes a*_n + b_j in offset order.
    std::vector<double> magnitudes() const;

    /// All offsets equal to b.
    static SignalConfig single_strength(std::size_t n, std::size_t s_n, double zeta, double b);

    /// floor(s_n * beta) offsets at max(x, y), the remainder at min(x, y).
    static SignalConfig two_strength(std::size_t n, std::size_t s_n, double zeta,
                                     double x, double y, double beta);
};

struct ThetaVector {
    std::vector<double> values;
    std::vector<std::size_t> support;  // ascending

    std::size_t size() const noexcept { return values.size(); }
};

/// a*_n = (zeta log(n/s_n))^{1/zeta}. Requires 0 < s_n < n and zeta > 1.
double oracle_threshold(std::size_t n, std::size_t s_n, double zeta);

ThetaVector make_theta(const SignalConfig& config, std::uint64_t seed);

/// Class membership: |support| == s_n and the sorted nonzero magnitudes dominate
/// the sorted a*_n + b_j componentwise.
bool in_signal_class(const ThetaVector& theta, const SignalConfig& config);

/// X = theta + eps with eps i.i.d. from `noise`.
std::vector<double> sample_data(const ThetaVector& theta, const NoiseDist& noise, std::uint64_t seed);

/// In-place variant used by the Monte-Carlo kernels; `out` must have size n.
void sample_data_into(const ThetaVector& theta, const NoiseDist& noise, Engine& engine,
                      std::span<double> out);

} // namespace smt
