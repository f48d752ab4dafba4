#pragma once

#include "smt/risk.hpp"
#include "smt/subbotin.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace smt {

/// Lambda_n(b) = mean of Fbar(b_j). Throws on empty input.
double lambda_n(std::span<const double> offsets, const NoiseDist& noise);

/// Asymptotic minimax combined risk of the single-strength class: Fbar(b).
double minimax_risk_limit(double b, const NoiseDist& noise);

/// beta Fbar(max(x, y)) + (1 - beta) Fbar(min(x, y)).
double two_signal_lambda(double x, double y, double beta, const NoiseDist& noise);

/// Row-major lattice: value[i * ys.size() + j] = two_signal_lambda(xs[i], ys[j]).
std::vector<double> two_signal_levels(double beta, const NoiseDist& noise,
                                      std::span<const double> xs, std::span<const double> ys);

struct TstarSolution {
    double t = 0.0;
    double tau = 0.0;       // target level of Psi
    double residual = 0.0;  // relative residual of the defining equation
};

/// The BH fixed point t*_n: the unique t > 0 with
///   (1 - s/n) 2 Fbar(t) + (s/n) mean_j Fbar(t - a*_n - b_j) = 3 Fbar(t) / alpha,
/// solved as Psi(t) = tau_n with Psi(t) = mean_j Fbar(t - a*_n - b_j) / Fbar(t)
/// increasing. Bracket [0, a*_n + 10] widened until it straddles tau_n, then
/// bisection to 1e-12 in t.
TstarSolution tstar(std::size_t n, std::size_t s_n, double alpha, std::span<const double> offsets,
                    const NoiseDist& noise);

/// Psi(t) for the offsets above (log-space ratio of tails).
double tstar_psi(double t, std::size_t n, std::size_t s_n, std::span<const double> offsets,
                 const NoiseDist& noise);

/// omega_{delta,q} = exp(-(floor(q) - 1) Fbar((zeta log q)^{1/zeta} - delta)).
double lower_bound_omega(double delta, double q, const NoiseDist& noise);

/// p_n(b, rho) = P[#{2 <= i <= n/s_n : eps_i > a_b + eps_1} >= rho], a_b = a*_n + b.
/// Replicate r draws eps_1 and then floor(n/s_n) - 1 further variables from
/// derive_seed(seed, r); the same seed gives common random numbers across b and
/// rho, so the estimate is exactly monotone in both.
ProbabilityEstimate pn_lower(double b, std::size_t rho, std::size_t n, std::size_t s_n,
                             const NoiseDist& noise, std::size_t reps, std::uint64_t seed,
                             int threads = 0);

/// Single-threaded reference for pn_lower.
ProbabilityEstimate pn_lower_serial(double b, std::size_t rho, std::size_t n, std::size_t s_n,
                                    const NoiseDist& noise, std::size_t reps, std::uint64_t seed);

/// Fbar_n(b, rho) = mean_j p_n(b_j, rho). Each distinct offset value is estimated
/// once (k-th distinct value in order of appearance uses derive_seed(seed, k)) and
/// weighted by its multiplicity. offsets.size() must equal s_n.
ProbabilityEstimate fbar_n(std::span<const double> offsets, std::size_t rho, std::size_t n,
                           std::size_t s_n, const NoiseDist& noise, std::size_t reps,
                           std::uint64_t seed, int threads = 0);

} // namespace smt
