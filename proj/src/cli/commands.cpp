#include "smt/cli/commands.hpp"

#include "smt/boundary.hpp"
#include "smt/csv.hpp"
#include "smt/errors.hpp"
#include "smt/replicate.hpp"
#include "smt/seeding.hpp"
#include "smt/subbotin.hpp"
#include "smt/version.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace smt::cli {

namespace {

using csv::format_double;

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + format_double(v[i]);
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t steps)
{
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        out[i] = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return out;
}

// Comment header; `resolved` is INI text for the config actually used.
void write_header(std::ostream& os, const std::string& command, const std::string& resolved)
{
    csv::write_comment(os, std::string("smt ") + kVersion);
    csv::write_comment(os, "command=" + command);
    std::istringstream is(resolved);
    std::string line;
    while (std::getline(is, line)) {
        csv::write_comment(os, line);
    }
}

std::string procedure_text(const ProcedureSpec& p)
{
    std::string out = procedure_name(p);
    return std::visit(
        [&](const auto& q) -> std::string {
            using Q = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<Q, procedure::BH>) {
                return out + ":" + format_double(q.alpha);
            } else if constexpr (std::is_same_v<Q, procedure::LValue>) {
                return out + ":" + format_double(q.t);
            } else if constexpr (std::is_same_v<Q, procedure::FixedThreshold>) {
                return out + ":" + format_double(q.t);
            } else {
                return out;
            }
        },
        p);
}

double sample_sd(const std::vector<double>& v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

std::vector<double> fig2_grid(const Fig2Config& config, double zeta)
{
    const NoiseDist noise(zeta);
    const double t_max = config.t_max ? *config.t_max
                                      : oracle_threshold(config.n, config.s_n, zeta) + noise.upper_tail_inv(1e-8);
    if (config.t_steps == 0) {
        throw ConfigError("fig2: the threshold grid is empty");
    }
    return linspace(config.t_min, t_max, config.t_steps);
}

std::vector<Fig2Curve> compute_fig2(const Fig2Config& config)
{
    std::vector<Fig2Curve> curves;
    for (double zeta : config.zetas) {
        const NoiseDist noise(zeta);
        Fig2Curve c;
        c.zeta = zeta;
        c.a_star = oracle_threshold(config.n, config.s_n, zeta);
        const auto grid = fig2_grid(config, zeta);
        c.points = marginal_risk_curve(config.n, config.s_n, noise, grid);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            if (c.points[i].mr < c.points[c.argmin].mr) {
                c.argmin = i;
            }
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

std::string run_fig2(const Fig2Config& config)
{
    const auto curves = compute_fig2(config);
    std::ostringstream os;
    std::ostringstream resolved;
    resolved << "[fig2]\nzetas = " << join(config.zetas) << "\nn = " << config.n << "\ns_n = " << config.s_n
             << "\nt_min = " << format_double(config.t_min) << "\nt_max = "
             << (config.t_max ? format_double(*config.t_max) : "a_star+Fbar^-1(1e-8)")
             << "\nt_steps = " << config.t_steps << "\nseed = none\n";
    write_header(os, "fig2", resolved.str());
    csv::write_comment(os, "asymptotic_risk=0.5");
    for (const auto& c : curves) {
        const auto& best = c.points[c.argmin];
        csv::write_comment(os, "zeta=" + format_double(c.zeta) + " a_star=" + format_double(c.a_star) +
                                   " argmin_t=" + format_double(best.t) + " min_mR=" + format_double(best.mr));
    }
    csv::write_row(os, {"zeta", "t", "mfdr", "fnr", "mr"});
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            csv::write_row(os, {format_double(c.zeta), format_double(p.t), format_double(p.mfdr),
                                format_double(p.fnr), format_double(p.mr)});
        }
    }
    return os.str();
}

std::string run_fig3(const Fig3Config& config)
{
    const auto xs = linspace(config.x_min, config.x_max, config.x_steps);
    const auto ys = linspace(config.y_min, config.y_max, config.y_steps);
    std::ostringstream os;
    std::ostringstream resolved;
    resolved << "[fig3]\nzetas = " << join(config.zetas) << "\nbetas = " << join(config.betas)
             << "\nx_min = " << format_double(config.x_min) << "\nx_max = " << format_double(config.x_max)
             << "\nx_steps = " << config.x_steps << "\ny_min = " << format_double(config.y_min)
             << "\ny_max = " << format_double(config.y_max) << "\ny_steps = " << config.y_steps
             << "\nseed = none\n";
    write_header(os, "fig3", resolved.str());
    csv::write_row(os, {"zeta", "beta", "x", "y", "lambda"});
    for (double zeta : config.zetas) {
        const NoiseDist noise(zeta);
        for (double beta : config.betas) {
            const auto lattice = two_signal_levels(beta, noise, xs, ys);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (std::size_t j = 0; j < ys.size(); ++j) {
                    csv::write_row(os, {format_double(zeta), format_double(beta), format_double(xs[i]),
                                        format_double(ys[j]), format_double(lattice[i * ys.size() + j])});
                }
            }
        }
    }
    return os.str();
}

Fig4Result compute_fig4(const Fig4Config& config, int threads)
{
    const NoiseDist gauss(2.0);
    const auto points = config.points.empty() ? default_fig4_points() : config.points;
    const std::vector<ProcedureSpec> procs{procedure::LValue{config.lvalue_t}, procedure::BH{config.bh_alpha}};

    Fig4Result result;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        const auto signal = SignalConfig::two_strength(config.n, config.s_n, 2.0, p.x, p.y, 0.5);
        const std::uint64_t seed = derive_seed(config.seed, k);
        for (const auto& proc : procs) {
            Fig4Row row;
            row.point = p;
            row.point_index = k;
            row.procedure = proc;
            row.lambda_inf = two_signal_lambda(p.x, p.y, 0.5, gauss);
            row.report = monte_carlo_risk(signal, gauss, proc, config.reps, seed, threads);
            result.rows.push_back(std::move(row));
        }
    }

    for (const auto& proc : procs) {
        const std::string name = procedure_name(proc);
        std::map<std::pair<std::string, double>, std::vector<double>> groups;
        for (const auto& row : result.rows) {
            if (procedure_name(row.procedure) == name) {
                groups[{row.point.kind, row.point.label}].push_back(row.report.combined);
            }
        }
        Fig4Spread spread{name, 0.0, 0.0};
        std::size_t n_level = 0;
        std::size_t n_line = 0;
        for (const auto& [key, values] : groups) {
            if (key.first == "level") {
                spread.level_sd += sample_sd(values);
                ++n_level;
            } else {
                spread.line_sd += sample_sd(values);
                ++n_line;
            }
        }
        spread.level_sd = n_level ? spread.level_sd / static_cast<double>(n_level) : 0.0;
        spread.line_sd = n_line ? spread.line_sd / static_cast<double>(n_line) : 0.0;
        result.spread.push_back(spread);
    }
    return result;
}

std::string run_fig4(const Fig4Config& config, int threads)
{
    const auto result = compute_fig4(config, threads);
    std::ostringstream os;
    std::ostringstream resolved;
    resolved << "[fig4]\nn = " << config.n << "\ns_n = " << config.s_n << "\nreps = " << config.reps
             << "\nlvalue_t = " << format_double(config.lvalue_t)
             << "\nbh_alpha = " << format_double(config.bh_alpha)
             << "\nfull_scale = " << (config.full_scale ? "true" : "false")
             << "\npoints = " << (config.points.empty() ? "default (approximate)" : "custom")
             << "\nseed = " << config.seed << '\n';
    write_header(os, "fig4", resolved.str());
    csv::write_row(os, {"group", "label", "x", "y", "lambda_inf", "procedure", "params", "combined",
                        "se_combined", "fdr", "se_fdr", "fnr", "se_fnr", "reps"});
    for (const auto& row : result.rows) {
        const auto& r = row.report;
        csv::write_row(os, {row.point.kind, format_double(row.point.label), format_double(row.point.x),
                            format_double(row.point.y), format_double(row.lambda_inf),
                            procedure_name(row.procedure), procedure_params(row.procedure),
                            format_double(r.combined), format_double(r.se_combined), format_double(r.fdr),
                            format_double(r.se_fdr), format_double(r.fnr), format_double(r.se_fnr),
                            std::to_string(r.reps)});
    }
    for (const auto& s : result.spread) {
        csv::write_comment(os, "spread procedure=" + s.procedure + " level_sd=" + format_double(s.level_sd) +
                                   " line_sd=" + format_double(s.line_sd));
    }
    return os.str();
}

std::string run_simulate(const SimulateConfig& config, int threads)
{
    const NoiseDist noise(config.zeta);
    std::ostringstream os;
    std::ostringstream resolved;
    resolved << "[simulate]\nn = " << config.n << "\ns_n = " << config.s_n
             << "\nzeta = " << format_double(config.zeta);
    if (config.two_strength) {
        resolved << "\ntwo_strength = " << format_double(config.two_strength->first) << ", "
                 << format_double(config.two_strength->second) << "\nbeta = " << format_double(config.beta);
    } else {
        resolved << "\nb = " << join(config.b);
    }
    resolved << "\nprocedures = ";
    for (std::size_t i = 0; i < config.procedures.size(); ++i) {
        resolved << (i ? ", " : "") << procedure_text(config.procedures[i]);
    }
    resolved << "\nreps = " << config.reps
             << "\nsigns = " << (config.signs == SignRule::Random ? "random" : "positive")
             << "\nplacement = " << (config.placement == Placement::UniformRandom ? "random" : "first")
             << "\nseed = " << config.seed << '\n';
    write_header(os, "simulate", resolved.str());
    write_risk_header(os);

    std::vector<std::pair<SignalConfig, std::string>> signals;
    if (config.two_strength) {
        const auto [x, y] = *config.two_strength;
        signals.push_back({SignalConfig::two_strength(config.n, config.s_n, config.zeta, x, y, config.beta),
                           "x=" + format_double(x) + " y=" + format_double(y) +
                               " beta=" + format_double(config.beta)});
    } else {
        for (double b : config.b) {
            signals.push_back({SignalConfig::single_strength(config.n, config.s_n, config.zeta, b),
                               "b=" + format_double(b)});
        }
    }
    for (auto& [signal, label] : signals) {
        signal.signs = config.signs;
        signal.placement = config.placement;
        for (const auto& proc : config.procedures) {
            const auto report = monte_carlo_risk(signal, noise, proc, config.reps, config.seed, threads);
            write_risk_row(os, proc, label, signal, report, config.seed);
        }
    }
    return os.str();
}

std::string run_boundary(const BoundaryConfig& config, int threads)
{
    const NoiseDist noise(config.zeta);
    const auto offsets = config.resolved_offsets();

    std::ostringstream os;
    std::ostringstream resolved;
    resolved << "[boundary]\nn = " << config.n << "\ns_n = " << config.s_n
             << "\nzeta = " << format_double(config.zeta);
    if (config.two_strength) {
        resolved << "\ntwo_strength = " << format_double(config.two_strength->first) << ", "
                 << format_double(config.two_strength->second) << "\nbeta = " << format_double(config.beta);
    } else {
        resolved << "\noffsets = " << join(config.offsets);
    }
    resolved << "\nalpha = " << (config.alpha ? format_double(*config.alpha) : "none")
             << "\nrho = " << (config.rho ? std::to_string(*config.rho) : "none") << "\nreps = " << config.reps
             << "\nseed = " << config.seed << '\n';
    write_header(os, "boundary", resolved.str());

    const double lam = lambda_n(offsets, noise);
    double limit = lam;
    if (config.two_strength) {
        limit = two_signal_lambda(config.two_strength->first, config.two_strength->second, config.beta, noise);
    } else if (std::all_of(offsets.begin(), offsets.end(), [&](double b) { return b == offsets.front(); })) {
        limit = minimax_risk_limit(offsets.front(), noise);
    }

    std::string alpha, t, residual, rho, fbar, se, reps;
    if (config.alpha) {
        const auto sol = tstar(config.n, config.s_n, *config.alpha, offsets, noise);
        alpha = format_double(*config.alpha);
        t = format_double(sol.t);
        residual = format_double(sol.residual);
    }
    if (config.rho) {
        const auto est = fbar_n(offsets, *config.rho, config.n, config.s_n, noise, config.reps, config.seed, threads);
        rho = std::to_string(*config.rho);
        fbar = format_double(est.value);
        se = format_double(est.se);
        reps = std::to_string(est.reps);
    }
    csv::write_row(os, {"n", "s_n", "zeta", "lambda_n", "minimax_limit", "alpha", "tstar", "tstar_residual",
                        "a_star", "rho", "fbar_n", "se_fbar_n", "reps"});
    csv::write_row(os, {std::to_string(config.n), std::to_string(config.s_n), format_double(config.zeta),
                        format_double(lam), format_double(limit), alpha, t, residual,
                        format_double(oracle_threshold(config.n, config.s_n, config.zeta)), rho, fbar, se,
                        reps});
    return os.str();
}

std::string run_apply(const std::vector<double>& x, const ProcedureSpec& procedure, double zeta, std::size_t s_n)
{
    if (x.empty()) {
        throw ConfigError("apply: no observations");
    }
    validate(procedure);
    const NoiseDist noise(zeta);
    const auto phi = apply_procedure(procedure, x, s_n, noise);

    std::ostringstream os;
    std::ostringstream resolved;
    resolved << "[apply]\nn = " << x.size() << "\nzeta = " << format_double(zeta) << "\ns_n = " << s_n
             << "\nprocedure = " << procedure_text(procedure) << "\nseed = none\n";
    write_header(os, "apply", resolved.str());
    csv::write_comment(os, "rejected=" + std::to_string(phi.rejected()));
    if (phi.threshold) {
        csv::write_comment(os, "threshold=" + format_double(*phi.threshold));
    }
    if (phi.weight) {
        csv::write_comment(os, "weight=" + format_double(*phi.weight));
    }
    csv::write_row(os, {"index", "x", "rejected"});
    for (std::size_t i = 0; i < x.size(); ++i) {
        csv::write_row(os, {std::to_string(i), format_double(x[i]), phi.rejections[i] ? "1" : "0"});
    }
    return os.str();
}

} // namespace smt::cli
