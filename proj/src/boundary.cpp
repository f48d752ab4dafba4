#include "smt/boundary.hpp"

#include "smt/errors.hpp"
#include "smt/model.hpp"
#include "smt/replicate.hpp"
#include "smt/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace smt {

namespace {

// Distinct values with multiplicities, in order of first appearance.
std::vector<std::pair<double, std::size_t>> group_offsets(std::span<const double> offsets)
{
    std::vector<std::pair<double, std::size_t>> groups;
    for (double b : offsets) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == b; });
        if (it == groups.end()) {
            groups.emplace_back(b, 1);
        } else {
            ++it->second;
        }
    }
    return groups;
}

void check_pn_inputs(std::size_t rho, std::size_t n, std::size_t s_n, std::size_t reps)
{
    if (rho < 1) {
        throw DomainError("p_n: rho must be at least 1");
    }
    if (reps < 1) {
        throw DomainError("p_n: reps must be at least 1");
    }
    if (s_n == 0 || n / s_n < 2) {
        throw DomainError("p_n: requires n / s_n >= 2");
    }
}

// One replicate of the p_n event.
double pn_indicator(double level, std::size_t rho, std::size_t others, const NoiseDist& noise,
                    std::uint64_t seed, std::size_t rep)
{
    Engine engine = make_engine(derive_seed(seed, rep));
    NoiseDist::Sampler draw(noise);
    const double cutoff = level + draw(engine);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < others; ++i) {
        if (draw(engine) > cutoff && ++hits >= rho) {
            return 1.0;
        }
    }
    return 0.0;
}

} // namespace

double lambda_n(std::span<const double> offsets, const NoiseDist& noise)
{
    if (offsets.empty()) {
        throw DomainError("lambda_n: offsets must be nonempty");
    }
    std::vector<double> tails(offsets.size());
    std::transform(offsets.begin(), offsets.end(), tails.begin(),
                   [&](double b) { return noise.upper_tail(b); });
    return pairwise_sum(tails) / static_cast<double>(offsets.size());
}

double minimax_risk_limit(double b, const NoiseDist& noise)
{
    return noise.upper_tail(b);
}

double two_signal_lambda(double x, double y, double beta, const NoiseDist& noise)
{
    if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError("two_signal_lambda: beta must lie in (0, 1)");
    }
    return beta * noise.upper_tail(std::max(x, y)) + (1.0 - beta) * noise.upper_tail(std::min(x, y));
}

std::vector<double> two_signal_levels(double beta, const NoiseDist& noise,
                                      std::span<const double> xs, std::span<const double> ys)
{
    std::vector<double> out(xs.size() * ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            out[i * ys.size() + j] = two_signal_lambda(xs[i], ys[j], beta, noise);
        }
    }
    return out;
}

double tstar_psi(double t, std::size_t n, std::size_t s_n, std::span<const double> offsets,
                 const NoiseDist& noise)
{
    const double a_star = oracle_threshold(n, s_n, noise.zeta());
    const double log_tail_t = noise.log_upper_tail(t);
    const auto groups = group_offsets(offsets);
    std::vector<double> terms;
    terms.reserve(groups.size());
    for (const auto& [b, count] : groups) {
        terms.push_back(static_cast<double>(count) *
                        std::exp(noise.log_upper_tail(t - a_star - b) - log_tail_t));
    }
    return pairwise_sum(terms) / static_cast<double>(offsets.size());
}

TstarSolution tstar(std::size_t n, std::size_t s_n, double alpha, std::span<const double> offsets,
                    const NoiseDist& noise)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("tstar: alpha must lie in (0, 1)");
    }
    if (offsets.size() != s_n) {
        throw DomainError("tstar: expected s_n offsets");
    }
    const double a_star = oracle_threshold(n, s_n, noise.zeta());
    for (double b : offsets) {
        if (!(b > -a_star)) {
            throw DomainError("tstar: offsets must satisfy b_j > -a*_n");
        }
    }
    const double frac = static_cast<double>(s_n) / static_cast<double>(n);
    const double tau = (3.0 / alpha - 2.0 * (1.0 - frac)) / frac;
    auto psi = [&](double t) { return tstar_psi(t, n, s_n, offsets, noise); };

    double lo = 0.0;
    double hi = a_star + 10.0;
    if (psi(lo) >= tau) {
        throw NumericalError("tstar: no positive solution (Psi(0) already exceeds tau_n)");
    }
    while (psi(hi) < tau) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) {
            throw NumericalError("tstar: failed to bracket the fixed point");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double psi_lo = psi(lo);
        const double psi_hi = psi(hi);
        if (!(psi_lo <= psi_hi)) {
            throw NumericalError("tstar: Psi not increasing on the bracket");
        }
        const double mid = 0.5 * (lo + hi);
        if (psi(mid) < tau) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (hi - lo > 1e-12) {
        throw NumericalError("tstar: bisection did not converge");
    }
    TstarSolution sol;
    sol.t = 0.5 * (lo + hi);
    sol.tau = tau;
    sol.residual = frac * std::fabs(psi(sol.t) - tau) / (3.0 / alpha);
    return sol;
}

double lower_bound_omega(double delta, double q, const NoiseDist& noise)
{
    if (!(q > 1.0)) {
        throw DomainError("omega: q must exceed 1");
    }
    const double level = std::pow(noise.zeta() * std::log(q), 1.0 / noise.zeta()) - delta;
    return std::exp(-(std::floor(q) - 1.0) * noise.upper_tail(level));
}

ProbabilityEstimate pn_lower(double b, std::size_t rho, std::size_t n, std::size_t s_n,
                             const NoiseDist& noise, std::size_t reps, std::uint64_t seed,
                             int threads)
{
    check_pn_inputs(rho, n, s_n, reps);
    const std::size_t others = n / s_n - 1;
    if (rho > others) {
        return {0.0, 0.0, reps};
    }
    const double level = oracle_threshold(n, s_n, noise.zeta()) + b;
    const auto hits = run_replicates<double>(reps, threads, [&](std::size_t r) {
        return pn_indicator(level, rho, others, noise, seed, r);
    });
    const MeanSe m = mean_and_se(hits);
    return {m.mean, m.se, reps};
}

ProbabilityEstimate pn_lower_serial(double b, std::size_t rho, std::size_t n, std::size_t s_n,
                                    const NoiseDist& noise, std::size_t reps, std::uint64_t seed)
{
    check_pn_inputs(rho, n, s_n, reps);
    const std::size_t others = n / s_n - 1;
    if (rho > others) {
        return {0.0, 0.0, reps};
    }
    const double level = oracle_threshold(n, s_n, noise.zeta()) + b;
    double hits = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        hits += pn_indicator(level, rho, others, noise, seed, r);
    }
    const double dn = static_cast<double>(reps);
    const double p = hits / dn;
    const double se = reps > 1 ? std::sqrt(p * (1.0 - p) * dn / (dn - 1.0) / dn) : 0.0;
    return {p, se, reps};
}

ProbabilityEstimate fbar_n(std::span<const double> offsets, std::size_t rho, std::size_t n,
                           std::size_t s_n, const NoiseDist& noise, std::size_t reps,
                           std::uint64_t seed, int threads)
{
    if (offsets.empty() || offsets.size() != s_n) {
        throw DomainError("fbar_n: expected s_n offsets");
    }
    const auto groups = group_offsets(offsets);
    double value = 0.0;
    double var = 0.0;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto [b, count] = groups[k];
        const double weight = static_cast<double>(count) / static_cast<double>(s_n);
        const ProbabilityEstimate p = pn_lower(b, rho, n, s_n, noise, reps, derive_seed(seed, k), threads);
        value += weight * p.value;
        var += weight * weight * p.se * p.se;
    }
    return {value, std::sqrt(var), reps};
}

} // namespace smt
