#include "smt/risk.hpp"

#include "smt/csv.hpp"
#include "smt/errors.hpp"
#include "smt/replicate.hpp"
#include "smt/seeding.hpp"

#include <cmath>
#include <string>

namespace smt {

namespace {

void check_lengths(const ThetaVector& theta, const DecisionVector& phi)
{
    if (theta.values.size() != phi.rejections.size()) {
        throw DomainError("risk: theta has length " + std::to_string(theta.values.size()) +
                          " but the decision vector has length " + std::to_string(phi.rejections.size()));
    }
}

struct Counts {
    std::size_t false_pos = 0;
    std::size_t false_neg = 0;
    std::size_t rejected = 0;
    std::size_t signals = 0;
};

Counts count(const ThetaVector& theta, const DecisionVector& phi)
{
    check_lengths(theta, phi);
    Counts c;
    for (std::size_t i = 0; i < theta.values.size(); ++i) {
        const bool signal = theta.values[i] != 0.0;
        const bool rejected = phi.rejections[i] != 0;
        c.signals += signal;
        c.rejected += rejected;
        c.false_pos += !signal && rejected;
        c.false_neg += signal && !rejected;
    }
    return c;
}

void check_inputs(const SignalConfig& config, const NoiseDist& noise, const ProcedureSpec& proc,
                  std::size_t reps)
{
    config.validate();
    validate(proc);
    if (config.zeta != noise.zeta()) {
        throw DomainError("monte_carlo_risk: signal config zeta differs from the noise law");
    }
    if (reps == 0) {
        throw DomainError("monte_carlo_risk: reps must be at least 1");
    }
}

ReplicateOutcome run_one(const ThetaVector& theta, const NoiseDist& noise, const ProcedureSpec& proc,
                         std::size_t s_n, std::uint64_t seed, std::size_t rep)
{
    std::vector<double> x(theta.size());
    Engine engine = make_engine(derive_seed(seed, rep));
    sample_data_into(theta, noise, engine, x);
    const DecisionVector phi = apply_procedure(proc, x, s_n, noise);
    const Counts c = count(theta, phi);
    ReplicateOutcome o;
    o.fdp = static_cast<double>(c.false_pos) / static_cast<double>(std::max<std::size_t>(1, c.rejected));
    o.fnp = static_cast<double>(c.false_neg) / static_cast<double>(std::max<std::size_t>(1, c.signals));
    o.hamming = static_cast<double>(c.false_pos + c.false_neg);
    o.false_discoveries = static_cast<double>(c.false_pos);
    o.rejections = static_cast<double>(c.rejected);
    return o;
}

ThetaVector shared_theta(const SignalConfig& config, std::uint64_t seed)
{
    return make_theta(config, derive_seed(seed, kThetaStream));
}

} // namespace

double fdp(const ThetaVector& theta, const DecisionVector& phi)
{
    const Counts c = count(theta, phi);
    return static_cast<double>(c.false_pos) / static_cast<double>(std::max<std::size_t>(1, c.rejected));
}

double fnp(const ThetaVector& theta, const DecisionVector& phi)
{
    const Counts c = count(theta, phi);
    return static_cast<double>(c.false_neg) / static_cast<double>(std::max<std::size_t>(1, c.signals));
}

std::size_t hamming_loss(const ThetaVector& theta, const DecisionVector& phi)
{
    const Counts c = count(theta, phi);
    return c.false_pos + c.false_neg;
}

double weighted_loss(const ThetaVector& theta, const DecisionVector& phi, double rho)
{
    if (!(rho > 0.0)) {
        throw DomainError("weighted_loss: rho must be positive");
    }
    const Counts c = count(theta, phi);
    return static_cast<double>(c.false_pos) + rho * static_cast<double>(c.false_neg);
}

std::vector<ReplicateOutcome> simulate_outcomes(const SignalConfig& config, const NoiseDist& noise,
                                                const ProcedureSpec& proc, std::size_t reps,
                                                std::uint64_t seed, int threads)
{
    check_inputs(config, noise, proc, reps);
    const ThetaVector theta = shared_theta(config, seed);
    return run_replicates<ReplicateOutcome>(reps, threads, [&](std::size_t r) {
        return run_one(theta, noise, proc, config.s_n, seed, r);
    });
}

RiskReport summarize(std::span<const ReplicateOutcome> outcomes)
{
    const std::size_t reps = outcomes.size();
    std::vector<double> fdps(reps), fnps(reps), comb(reps), ham(reps), fd(reps), rej(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        fdps[r] = outcomes[r].fdp;
        fnps[r] = outcomes[r].fnp;
        comb[r] = outcomes[r].fdp + outcomes[r].fnp;
        ham[r] = outcomes[r].hamming;
        fd[r] = outcomes[r].false_discoveries;
        rej[r] = outcomes[r].rejections;
    }
    RiskReport out;
    out.reps = reps;
    out.se_valid = reps > 1;
    const MeanSe f = mean_and_se(fdps);
    const MeanSe g = mean_and_se(fnps);
    const MeanSe c = mean_and_se(comb);
    const MeanSe h = mean_and_se(ham);
    const MeanSe v = mean_and_se(fd);
    const MeanSe q = mean_and_se(rej);
    out.fdr = f.mean;
    out.fnr = g.mean;
    out.combined = out.fdr + out.fnr;
    out.hamming_mean = h.mean;
    out.se_fdr = f.se;
    out.se_fnr = g.se;
    out.se_combined = c.se;
    out.se_hamming = h.se;
    out.mean_false_discoveries = v.mean;
    out.se_false_discoveries = v.se;
    out.mean_rejections = q.mean;
    out.se_rejections = q.se;
    if (q.mean > 0.0) {
        out.mfdr = v.mean / q.mean;
        // Delta method: residuals V_r - mFDR * R_r.
        std::vector<double> resid(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            resid[r] = fd[r] - out.mfdr * rej[r];
        }
        out.se_mfdr = mean_and_se(resid).se / q.mean;
    }
    return out;
}

RiskReport monte_carlo_risk(const SignalConfig& config, const NoiseDist& noise,
                            const ProcedureSpec& proc, std::size_t reps, std::uint64_t seed,
                            int threads)
{
    const auto outcomes = simulate_outcomes(config, noise, proc, reps, seed, threads);
    return summarize(outcomes);
}

RiskReport monte_carlo_risk_serial(const SignalConfig& config, const NoiseDist& noise,
                                   const ProcedureSpec& proc, std::size_t reps, std::uint64_t seed)
{
    check_inputs(config, noise, proc, reps);
    const ThetaVector theta = shared_theta(config, seed);

    double s_fdp = 0, s_fnp = 0, s_comb = 0, s_ham = 0, s_fd = 0, s_rej = 0;
    double q_fdp = 0, q_fnp = 0, q_comb = 0, q_ham = 0, q_fd = 0, q_rej = 0, x_fdrej = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const ReplicateOutcome o = run_one(theta, noise, proc, config.s_n, seed, r);
        const double comb = o.fdp + o.fnp;
        s_fdp += o.fdp;
        s_fnp += o.fnp;
        s_comb += comb;
        s_ham += o.hamming;
        s_fd += o.false_discoveries;
        s_rej += o.rejections;
        q_fdp += o.fdp * o.fdp;
        q_fnp += o.fnp * o.fnp;
        q_comb += comb * comb;
        q_ham += o.hamming * o.hamming;
        q_fd += o.false_discoveries * o.false_discoveries;
        q_rej += o.rejections * o.rejections;
        x_fdrej += o.false_discoveries * o.rejections;
    }

    const double n = static_cast<double>(reps);
    auto se = [&](double s, double q) {
        if (reps < 2) {
            return 0.0;
        }
        const double var = std::max(0.0, (q - s * s / n) / (n - 1.0));
        return std::sqrt(var / n);
    };

    RiskReport out;
    out.reps = reps;
    out.se_valid = reps > 1;
    out.fdr = s_fdp / n;
    out.fnr = s_fnp / n;
    out.combined = out.fdr + out.fnr;
    out.hamming_mean = s_ham / n;
    out.se_fdr = se(s_fdp, q_fdp);
    out.se_fnr = se(s_fnp, q_fnp);
    out.se_combined = se(s_comb, q_comb);
    out.se_hamming = se(s_ham, q_ham);
    out.mean_false_discoveries = s_fd / n;
    out.se_false_discoveries = se(s_fd, q_fd);
    out.mean_rejections = s_rej / n;
    out.se_rejections = se(s_rej, q_rej);
    if (s_rej > 0.0) {
        const double m = s_fd / s_rej;
        out.mfdr = m;
        // Var(V - mR) expanded in raw moments.
        const double sd = s_fd - m * s_rej;
        const double qd = q_fd - 2.0 * m * x_fdrej + m * m * q_rej;
        out.se_mfdr = se(sd, qd) / out.mean_rejections;
    }
    return out;
}

ProbabilityEstimate sparsity_preserving_estimate(const SignalConfig& config, const NoiseDist& noise,
                                                 const ProcedureSpec& proc, double A,
                                                 std::size_t reps, std::uint64_t seed, int threads)
{
    if (!(A >= 1.0)) {
        throw DomainError("sparsity_preserving_estimate: A must be at least 1");
    }
    const auto outcomes = simulate_outcomes(config, noise, proc, reps, seed, threads);
    const double limit = A * static_cast<double>(config.s_n);
    std::vector<double> hits(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        hits[r] = outcomes[r].rejections > limit ? 1.0 : 0.0;
    }
    const MeanSe m = mean_and_se(hits);
    return {m.mean, m.se, reps};
}

std::vector<MarginalRiskPoint> marginal_risk_curve(std::size_t n, std::size_t s_n,
                                                   const NoiseDist& noise,
                                                   std::span<const double> t_grid)
{
    const double a = oracle_threshold(n, s_n, noise.zeta());
    const double log_nulls = std::log(2.0 * static_cast<double>(n - s_n));
    const double log_signals = std::log(static_cast<double>(s_n));

    std::vector<MarginalRiskPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t >= 0.0)) {
            throw DomainError("marginal_risk_curve: thresholds must be non-negative");
        }
        MarginalRiskPoint p;
        p.t = t;
        // 1 - Fbar(t - a) = Fbar(a - t)
        p.fnr = noise.upper_tail(a - t) - noise.upper_tail(t + a);

        // log(1 - FNR) = log(Fbar(t - a) + Fbar(t + a))
        const double l1 = noise.log_upper_tail(t - a);
        const double l2 = noise.log_upper_tail(t + a);
        const double log_power = std::max(l1, l2) + std::log1p(std::exp(-std::fabs(l1 - l2)));
        const double log_false = log_nulls + noise.log_upper_tail(t);
        const double log_ratio = log_signals + log_power - log_false;  // log(S / V)
        p.mfdr = log_ratio > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(log_ratio));
        p.mr = p.mfdr + p.fnr;
        out.push_back(p);
    }
    return out;
}

void write_risk_header(std::ostream& os)
{
    csv::write_row(os, {"procedure", "params", "n", "s_n", "zeta", "fdr", "se_fdr", "fnr", "se_fnr",
                        "combined", "hamming_mean", "reps", "seed"});
}

void write_risk_row(std::ostream& os, const ProcedureSpec& proc, const std::string& extra_params,
                    const SignalConfig& config, const RiskReport& report, std::uint64_t seed)
{
    std::string params = procedure_params(proc);
    if (!extra_params.empty()) {
        params += params.empty() ? extra_params : " " + extra_params;
    }
    using csv::format_double;
    csv::write_row(os, {procedure_name(proc), params, std::to_string(config.n),
                        std::to_string(config.s_n), format_double(config.zeta),
                        format_double(report.fdr), format_double(report.se_fdr),
                        format_double(report.fnr), format_double(report.se_fnr),
                        format_double(report.combined), format_double(report.hamming_mean),
                        std::to_string(report.reps), std::to_string(seed)});
}

} // namespace smt
