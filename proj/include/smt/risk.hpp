#pragma once

#include "smt/model.hpp"
#include "smt/procedures.hpp"
#include "smt/subbotin.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace smt {

// --- Per-realization losses ------------------------------------------------

/// False discovery proportion: #{theta_i = 0, rejected} / max(1, #rejected).
double fdp(const ThetaVector& theta, const DecisionVector& phi);
/// Missed-signal proportion: #{theta_i != 0, not rejected} / max(1, #support).
double fnp(const ThetaVector& theta, const DecisionVector& phi);
/// #false positives + #false negatives.
std::size_t hamming_loss(const ThetaVector& theta, const DecisionVector& phi);
/// #false positives + rho * #false negatives; rho > 0.
double weighted_loss(const ThetaVector& theta, const DecisionVector& phi, double rho);

// --- Monte-Carlo risk ------------------------------------------------------

/// One replicate's losses.
struct ReplicateOutcome {
    double fdp = 0.0;
    double fnp = 0.0;
    double hamming = 0.0;
    double false_discoveries = 0.0;
    double rejections = 0.0;
};

/// Replicate means with Monte-Carlo standard errors.
///
/// `fdr` is the mean of per-replicate FDPs; `mfdr` is the ratio of mean false
/// discoveries to mean rejections (the marginal FDR), with a delta-method SE.
/// The two coincide only asymptotically.
struct RiskReport {
    double fdr = 0.0;
    double fnr = 0.0;
    double combined = 0.0;
    double hamming_mean = 0.0;
    std::size_t reps = 0;
    double se_fdr = 0.0;
    double se_fnr = 0.0;
    double se_combined = 0.0;
    double se_hamming = 0.0;
    double mfdr = 0.0;
    double se_mfdr = 0.0;
    double mean_false_discoveries = 0.0;
    double se_false_discoveries = 0.0;
    double mean_rejections = 0.0;
    double se_rejections = 0.0;
    bool se_valid = false;  // false when reps == 1 (all SEs reported as 0)
};

/// Losses of every replicate. theta = make_theta(config, derive_seed(seed, kThetaStream))
/// is shared by all replicates; replicate r draws its data from derive_seed(seed, r).
/// OpenMP-parallel over replicates; output independent of `threads` (0 = default).
std::vector<ReplicateOutcome> simulate_outcomes(const SignalConfig& config, const NoiseDist& noise,
                                                const ProcedureSpec& proc, std::size_t reps,
                                                std::uint64_t seed, int threads = 0);

/// Reduces outcomes with pairwise summation (order fixed by replicate index).
RiskReport summarize(std::span<const ReplicateOutcome> outcomes);

/// FDR, FNR, combined risk and Hamming loss by Monte Carlo. Byte-identical for
/// any thread count.
RiskReport monte_carlo_risk(const SignalConfig& config, const NoiseDist& noise,
                            const ProcedureSpec& proc, std::size_t reps, std::uint64_t seed,
                            int threads = 0);

/// Single-threaded reference with plain running sums; agrees with
/// monte_carlo_risk up to summation rounding.
RiskReport monte_carlo_risk_serial(const SignalConfig& config, const NoiseDist& noise,
                                   const ProcedureSpec& proc, std::size_t reps,
                                   std::uint64_t seed);

struct ProbabilityEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t reps = 0;
};

/// P[#rejections > A s_n] by Monte Carlo, on the same replicates as monte_carlo_risk.
ProbabilityEstimate sparsity_preserving_estimate(const SignalConfig& config, const NoiseDist& noise,
                                                 const ProcedureSpec& proc, double A,
                                                 std::size_t reps, std::uint64_t seed,
                                                 int threads = 0);

// --- Closed-form marginal risk of |X_i| >= t -------------------------------

struct MarginalRiskPoint {
    double t = 0.0;
    double mfdr = 0.0;
    double fnr = 0.0;
    double mr = 0.0;
};

/// Marginal risk of phi_t = 1{|X_i| >= t} at the boundary point with s_n means
/// equal to a*_n:
///   FNR(t)  = 1 - Fbar(t - a*) - Fbar(t + a*)     (miss probability of a signal)
///   mFDR(t) = 2(n-s)Fbar(t) / (2(n-s)Fbar(t) + s (1 - FNR(t)))
///   mR(t)   = mFDR(t) + FNR(t)
/// The FNR is the complement of the signal rejection probability; it increases in t.
/// Evaluated in log space so mFDR stays accurate where the tails underflow.
std::vector<MarginalRiskPoint> marginal_risk_curve(std::size_t n, std::size_t s_n,
                                                   const NoiseDist& noise,
                                                   std::span<const double> t_grid);

// --- CSV -------------------------------------------------------------------

/// procedure,params,n,s_n,zeta,fdr,se_fdr,fnr,se_fnr,combined,hamming_mean,reps,seed
void write_risk_header(std::ostream& os);
void write_risk_row(std::ostream& os, const ProcedureSpec& proc, const std::string& extra_params,
                    const SignalConfig& config, const RiskReport& report, std::uint64_t seed);

} // namespace smt
