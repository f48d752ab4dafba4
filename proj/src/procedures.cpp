#include "smt/procedures.hpp"

#include "smt/csv.hpp"
#include "smt/errors.hpp"
#include "smt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace smt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeriesCutoff = 1e-4;
constexpr double kMmleTolerance = 1e-12;

// log(e^y - 1) for y > 0 without overflow.
double log_expm1(double y)
{
    return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
}

// log (g/phi)(x) = log(1 + beta(x)), valid for any x (series near 0).
double log_g_over_phi(double x)
{
    const double x2 = x * x;
    if (std::fabs(x) < kSeriesCutoff) {
        return std::log(0.5 + x2 / 8.0);
    }
    return log_expm1(0.5 * x2) - std::log(x2);
}

// Bisection for the single sign change of a monotone function on [0, inf).
template <class F>
double bisect_half_line(F&& f, const char* what)
{
    double lo = 0.0;
    double hi = 1.0;
    const bool increasing = f(lo) < 0.0;
    auto past_root = [&](double x) { return increasing ? f(x) >= 0.0 : f(x) <= 0.0; };
    while (!past_root(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) {
            throw NumericalError(std::string(what) + ": failed to bracket root");
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (past_root(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::size_t DecisionVector::rejected() const noexcept
{
    std::size_t c = 0;
    for (auto r : rejections) {
        c += r;
    }
    return c;
}

void validate(const ProcedureSpec& spec)
{
    std::visit(overloaded{
                   [](const procedure::BH& p) {
                       if (!(p.alpha > 0.0 && p.alpha < 1.0)) {
                           throw DomainError("BH: alpha must lie in (0, 1)");
                       }
                   },
                   [](const procedure::LValue& p) {
                       if (!(p.t > 0.0 && p.t < 1.0)) {
                           throw DomainError("l-value: t must lie in (0, 1)");
                       }
                   },
                   [](const procedure::FixedThreshold& p) {
                       if (!(p.t >= 0.0)) {
                           throw DomainError("fixed threshold: t must be non-negative");
                       }
                   },
                   [](const auto&) {},
               },
               spec);
}

std::string procedure_name(const ProcedureSpec& spec)
{
    return std::visit(overloaded{
                          [](const procedure::BH&) { return std::string("bh"); },
                          [](const procedure::LValue&) { return std::string("lvalue"); },
                          [](const procedure::OracleThreshold&) { return std::string("oracle"); },
                          [](const procedure::FixedThreshold&) { return std::string("fixed"); },
                          [](const procedure::AllReject&) { return std::string("all"); },
                          [](const procedure::NoneReject&) { return std::string("none"); },
                      },
                      spec);
}

std::string procedure_params(const ProcedureSpec& spec)
{
    return std::visit(overloaded{
                          [](const procedure::BH& p) { return "alpha=" + csv::format_double(p.alpha); },
                          [](const procedure::LValue& p) { return "t=" + csv::format_double(p.t); },
                          [](const procedure::FixedThreshold& p) { return "t=" + csv::format_double(p.t); },
                          [](const auto&) { return std::string(); },
                      },
                      spec);
}

ProcedureSpec parse_procedure(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t");
    text = first == std::string_view::npos ? std::string_view{} : text.substr(first, text.find_last_not_of(" \t") - first + 1);
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const bool has_arg = colon != std::string_view::npos;
    auto arg = [&](double fallback) {
        return has_arg ? csv::parse_double(text.substr(colon + 1), "procedure parameter") : fallback;
    };

    ProcedureSpec spec;
    if (kind == "bh") {
        spec = procedure::BH{arg(0.1)};
    } else if (kind == "lvalue") {
        spec = procedure::LValue{arg(0.3)};
    } else if (kind == "oracle") {
        spec = procedure::OracleThreshold{};
    } else if (kind == "fixed") {
        if (!has_arg) {
            throw ConfigError("procedure 'fixed' needs a threshold, e.g. fixed:2.5");
        }
        spec = procedure::FixedThreshold{arg(0.0)};
    } else if (kind == "all") {
        spec = procedure::AllReject{};
    } else if (kind == "none") {
        spec = procedure::NoneReject{};
    } else {
        throw ConfigError("unknown procedure '" + std::string(text) +
                          "' (expected bh, lvalue, oracle, fixed, all, none)");
    }
    if ((kind == "oracle" || kind == "all" || kind == "none") && has_arg) {
        throw ConfigError("procedure '" + std::string(kind) + "' takes no parameter");
    }
    try {
        validate(spec);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

double two_sided_pvalue(const NoiseDist& noise, double x)
{
    return std::min(1.0, 2.0 * noise.upper_tail(std::fabs(x)));
}

DecisionVector bh_procedure(std::span<const double> x, double alpha, const NoiseDist& noise)
{
    validate(procedure::BH{alpha});
    const std::size_t n = x.size();
    DecisionVector out;
    out.rejections.assign(n, 0);
    out.threshold = kInf;
    if (n == 0) {
        return out;
    }

    // Only p-values <= alpha can satisfy p_(k) <= alpha k / n.
    std::vector<double> pvalues(n);
    std::vector<double> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        pvalues[i] = two_sided_pvalue(noise, x[i]);
        if (pvalues[i] <= alpha) {
            candidates.push_back(pvalues[i]);
        }
    }
    std::sort(candidates.begin(), candidates.end());

    std::size_t k_hat = 0;
    const double dn = static_cast<double>(n);
    for (std::size_t k = candidates.size(); k >= 1; --k) {
        if (candidates[k - 1] <= alpha * static_cast<double>(k) / dn) {
            k_hat = k;
            break;
        }
    }
    if (k_hat == 0) {
        return out;
    }

    const double cutoff = candidates[k_hat - 1];
    double t_hat = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        if (pvalues[i] <= cutoff) {
            out.rejections[i] = 1;
            t_hat = std::min(t_hat, std::fabs(x[i]));
        }
    }
    out.threshold = t_hat;
    return out;
}

double quasi_cauchy_g(double x)
{
    const double x2 = x * x;
    const double inv_sqrt_2pi = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    if (std::fabs(x) < kSeriesCutoff) {
        // (1 - e^{-y})/(2y) with y = x^2/2: 1/2 - x^2/8 + x^4/48
        return inv_sqrt_2pi * (0.5 - x2 / 8.0 + x2 * x2 / 48.0);
    }
    return inv_sqrt_2pi * (-std::expm1(-0.5 * x2)) / x2;
}

double beta_fn(double x)
{
    const double x2 = x * x;
    if (std::fabs(x) < kSeriesCutoff) {
        // expm1(y)/(2y) - 1 with y = x^2/2
        return -0.5 + x2 / 8.0 + x2 * x2 / 48.0;
    }
    return std::expm1(0.5 * x2) / x2 - 1.0;
}

double phi_over_g(double x)
{
    return std::exp(-log_g_over_phi(x));
}

double mmle_score(std::span<const double> betas, double w)
{
    double s = 0.0;
    for (double b : betas) {
        s += std::isinf(b) ? 1.0 / w : b / (1.0 + w * b);
    }
    return s;
}

double mmle_loglik(std::span<const double> betas, double w)
{
    double s = 0.0;
    for (double b : betas) {
        s += std::isinf(b) ? kInf : std::log1p(w * b);
    }
    return s;
}

double mmle_weight_from_betas(std::span<const double> betas)
{
    const std::size_t n = betas.size();
    if (n == 0) {
        throw DomainError("mmle_weight: empty sample");
    }
    double lo = 1.0 / static_cast<double>(n);
    double hi = 1.0;
    if (lo >= hi) {
        return hi;
    }
    if (mmle_score(betas, lo) <= 0.0) {
        return lo;
    }
    if (mmle_score(betas, hi) >= 0.0) {
        return hi;
    }
    while (hi - lo > kMmleTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mmle_score(betas, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mmle_weight(std::span<const double> x)
{
    std::vector<double> betas(x.size());
    std::transform(x.begin(), x.end(), betas.begin(), beta_fn);
    return mmle_weight_from_betas(betas);
}

std::vector<double> lvalues(std::span<const double> x, double w)
{
    if (!(w >= 0.0 && w <= 1.0)) {
        throw DomainError("lvalues: w must lie in [0, 1]");
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (w == 0.0) {
            out[i] = 1.0;
        } else if (w == 1.0) {
            out[i] = 0.0;
        } else {
            // 1 / (1 + w/(1-w) * g/phi), evaluated in log space.
            const double log_odds = std::log(w) - std::log1p(-w) + log_g_over_phi(x[i]);
            out[i] = log_odds > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(log_odds));
        }
    }
    return out;
}

DecisionVector lvalue_procedure(std::span<const double> x, double t)
{
    validate(procedure::LValue{t});
    DecisionVector out;
    out.rejections.assign(x.size(), 0);
    if (x.empty()) {
        return out;
    }
    const double w_hat = mmle_weight(x);
    const std::vector<double> ell = lvalues(x, w_hat);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.rejections[i] = ell[i] < t ? 1 : 0;
    }
    out.weight = w_hat;
    return out;
}

double inverse_phi_over_g(double u)
{
    if (!(u > 0.0 && u < 2.0)) {
        throw DomainError("inverse_phi_over_g: u must lie in (0, 2)");
    }
    const double log_u = std::log(u);
    // phi/g decreases from 2 at 0, so -log(phi/g) - log u increases through 0.
    return bisect_half_line([&](double x) { return log_g_over_phi(x) + log_u; },
                            "inverse_phi_over_g");
}

double inverse_beta_reciprocal(double u)
{
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("inverse_beta_reciprocal: u must lie in (0, 1)");
    }
    // beta(x) = 1/u  <=>  log(1 + beta(x)) = log(1 + 1/u)
    const double target = std::log1p(1.0 / u);
    return bisect_half_line([&](double x) { return log_g_over_phi(x) - target; },
                            "inverse_beta_reciprocal");
}

DecisionVector threshold_procedure(std::span<const double> x, double t)
{
    validate(procedure::FixedThreshold{t});
    DecisionVector out;
    out.rejections.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.rejections[i] = std::fabs(x[i]) >= t ? 1 : 0;
    }
    out.threshold = t;
    return out;
}

DecisionVector oracle_procedure(std::span<const double> x, std::size_t n, std::size_t s_n,
                                const NoiseDist& noise)
{
    return threshold_procedure(x, oracle_threshold(n, s_n, noise.zeta()));
}

DecisionVector apply_procedure(const ProcedureSpec& spec, std::span<const double> x,
                               std::size_t s_n, const NoiseDist& noise)
{
    return std::visit(
        overloaded{
            [&](const procedure::BH& p) { return bh_procedure(x, p.alpha, noise); },
            [&](const procedure::LValue& p) {
                if (!noise.is_gaussian()) {
                    throw DomainError("the l-value procedure is defined for Gaussian noise (zeta = 2) only");
                }
                return lvalue_procedure(x, p.t);
            },
            [&](const procedure::OracleThreshold&) { return oracle_procedure(x, x.size(), s_n, noise); },
            [&](const procedure::FixedThreshold& p) { return threshold_procedure(x, p.t); },
            [&](const procedure::AllReject&) {
                return DecisionVector{std::vector<std::uint8_t>(x.size(), 1), 0.0, std::nullopt};
            },
            [&](const procedure::NoneReject&) {
                return DecisionVector{std::vector<std::uint8_t>(x.size(), 0), kInf, std::nullopt};
            },
        },
        spec);
}

} // namespace smt
