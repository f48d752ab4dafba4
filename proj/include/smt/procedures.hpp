#pragma once

#include "smt/subbotin.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smt {

/// Binary rejection vector plus whatever produced it: the realized threshold
/// for thresholding rules (BH, oracle, fixed; +inf when BH rejects nothing) or
/// the MMLE weight for the l-value rule.
struct DecisionVector {
    std::vector<std::uint8_t> rejections;
    std::optional<double> threshold;
    std::optional<double> weight;

    std::size_t rejected() const noexcept;
};

namespace procedure {

struct BH {
    double alpha = 0.1;
};
struct LValue {
    double t = 0.3;
};
struct OracleThreshold {};
struct FixedThreshold {
    double t = 0.0;
};
struct AllReject {};
struct NoneReject {};

} // namespace procedure

using ProcedureSpec = std::variant<procedure::BH, procedure::LValue, procedure::OracleThreshold,
                                   procedure::FixedThreshold, procedure::AllReject,
                                   procedure::NoneReject>;

/// Throws DomainError when a parameter is out of range.
void validate(const ProcedureSpec& spec);
/// Short tag: bh, lvalue, oracle, fixed, all, none.
std::string procedure_name(const ProcedureSpec& spec);
/// Parameter rendering for CSV output, e.g. "alpha=0.1"; empty when none.
std::string procedure_params(const ProcedureSpec& spec);
/// Parses "bh:0.1", "lvalue:0.3", "oracle", "fixed:2.5", "all", "none".
ProcedureSpec parse_procedure(std::string_view text);

// --- BH step-up -----------------------------------------------------------

/// 2 Fbar(|x|).
double two_sided_pvalue(const NoiseDist& noise, double x);

/// Step-up on p_i = 2 Fbar(|X_i|): k = max{k : p_(k) <= alpha k / n}, reject the
/// k smallest p-values (ties travel together). threshold = smallest rejected
/// |X_i|, or +inf when nothing is rejected.
DecisionVector bh_procedure(std::span<const double> x, double alpha, const NoiseDist& noise);

// --- Empirical Bayes l-values (Gaussian noise) ---------------------------

/// Quasi-Cauchy marginal g(x) = (2 pi)^{-1/2} x^{-2} (1 - e^{-x^2/2}).
double quasi_cauchy_g(double x);

/// beta(x) = g(x)/phi(x) - 1 = expm1(x^2/2)/x^2 - 1; +inf once e^{x^2/2} overflows.
double beta_fn(double x);

/// (phi/g)(x) = x^2 / expm1(x^2/2), equal to 2 at x = 0.
double phi_over_g(double x);

/// Score S(w) = sum beta_i / (1 + w beta_i) given precomputed beta_i.
double mmle_score(std::span<const double> betas, double w);

/// Marginal log-likelihood up to the w-free term: sum log(1 + w beta_i).
double mmle_loglik(std::span<const double> betas, double w);

/// argmax over [1/n, 1] of sum log(1 + w beta(X_i)). Bisection on the strictly
/// decreasing score to 1e-12; a boundary when the score does not change sign.
double mmle_weight(std::span<const double> x);
double mmle_weight_from_betas(std::span<const double> betas);

/// l_{i,w} = (1-w) phi(X_i) / ((1-w) phi(X_i) + w g(X_i)), for w in [0, 1].
std::vector<double> lvalues(std::span<const double> x, double w);

/// Reject i iff l_{i, w_hat}(X) < t (strict), w_hat = mmle_weight(X).
DecisionVector lvalue_procedure(std::span<const double> x, double t);

/// xi(u) = (phi/g)^{-1}(u) on x >= 0, u in (0, 2).
double inverse_phi_over_g(double u);

/// beta^{-1}(1/u) on x >= 0, u in (0, 1).
double inverse_beta_reciprocal(double u);

// --- Thresholding rules ---------------------------------------------------

/// Reject iff |X_i| >= a*_n. n and s_n only set the threshold; x may have any length.
DecisionVector oracle_procedure(std::span<const double> x, std::size_t n, std::size_t s_n,
                                const NoiseDist& noise);

/// Reject iff |X_i| >= t.
DecisionVector threshold_procedure(std::span<const double> x, double t);

/// Dispatch on `spec`. `s_n` is only used by the oracle rule. The l-value rule
/// is defined for Gaussian noise only and throws DomainError otherwise.
DecisionVector apply_procedure(const ProcedureSpec& spec, std::span<const double> x,
                               std::size_t s_n, const NoiseDist& noise);

} // namespace smt
