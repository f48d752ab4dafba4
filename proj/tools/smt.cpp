#include "smt/cli/commands.hpp"
#include "smt/cli/config.hpp"
#include "smt/csv.hpp"
#include "smt/errors.hpp"
#include "smt/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool full_scale = false;

    // apply
    std::string data;
    std::string procedure = "bh:0.1";
    double zeta = 2.0;
    std::size_t s_n = 1;
};

smt::cli::ConfigFile config_of(const Options& opt)
{
    return opt.config.empty() ? smt::cli::ConfigFile{} : smt::cli::ConfigFile::load(opt.config);
}

void emit(const Options& opt, const std::string& text)
{
    if (opt.out.empty() || opt.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(opt.out, std::ios::binary);
    if (!os) {
        throw smt::ConfigError(opt.out + ": cannot open output file");
    }
    os << text;
}

std::string run(const std::string& command, const Options& opt)
{
    using namespace smt::cli;
    if (command == "fig2") {
        return run_fig2(load_fig2(config_of(opt)));
    }
    if (command == "fig3") {
        return run_fig3(load_fig3(config_of(opt)));
    }
    if (command == "fig4") {
        auto c = load_fig4(config_of(opt));
        if (opt.full_scale && !c.full_scale) {
            c.full_scale = true;
            c.n = 1'000'000;
        }
        if (opt.seed) {
            c.seed = *opt.seed;
        }
        return run_fig4(c, opt.threads);
    }
    if (command == "simulate") {
        if (opt.config.empty()) {
            throw smt::ConfigError("simulate: --config is required");
        }
        auto c = load_simulate(config_of(opt));
        if (opt.seed) {
            c.seed = *opt.seed;
        }
        return run_simulate(c, opt.threads);
    }
    if (command == "boundary") {
        auto c = load_boundary(config_of(opt));
        if (opt.seed) {
            c.seed = *opt.seed;
        }
        return run_boundary(c, opt.threads);
    }
    std::ifstream is(opt.data);
    if (!is) {
        throw smt::ConfigError(opt.data + ": cannot open data file");
    }
    return run_apply(smt::csv::read_observations(is), smt::parse_procedure(opt.procedure), opt.zeta, opt.s_n);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse multiple testing experiments: figure data, risk sweeps and boundary evaluation."};
    app.set_version_flag("--version", smt::kVersion);
    app.require_subcommand(1);

    Options opt;
    auto common = [&](CLI::App* sub, bool random) {
        sub->add_option("--config", opt.config, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output CSV (default: stdout)");
        if (random) {
            sub->add_option("--seed", opt.seed, "overrides the config seed");
            sub->add_option("--threads", opt.threads, "worker threads (default: hardware)")
                ->check(CLI::NonNegativeNumber);
        }
    };
    common(app.add_subcommand("fig2", "marginal mFDR/FNR/mR curves of |X| >= t"), false);
    common(app.add_subcommand("fig3", "two-strength boundary level lattice"), false);
    auto* fig4 = app.add_subcommand("fig4", "Monte-Carlo risk of l-value and BH along level sets and lines");
    common(fig4, true);
    fig4->add_flag("--full-scale", opt.full_scale, "n = 10^6 instead of the fast 10^5 default");
    common(app.add_subcommand("simulate", "risk sweep over signal configs and procedures"), true);
    common(app.add_subcommand("boundary", "Lambda_n, t*_n and lower-bound functionals"), true);
    auto* apply = app.add_subcommand("apply", "run one procedure on observed data");
    apply->add_option("--data", opt.data, "one observation per line")->required()->check(CLI::ExistingFile);
    apply->add_option("--procedure", opt.procedure, "bh:ALPHA, lvalue:T, oracle, fixed:T, all, none");
    apply->add_option("--zeta", opt.zeta, "noise shape");
    apply->add_option("--s-n", opt.s_n, "sparsity used by the oracle threshold");
    apply->add_option("--out", opt.out, "output CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        emit(opt, run(command, opt));
    } catch (const smt::ConfigError& e) {
        std::cerr << "smt " << command << ": " << e.what() << '\n';
        return 2;
    } catch (const smt::DomainError& e) {
        std::cerr << "smt " << command << ": " << e.what() << '\n';
        return 2;
    } catch (const smt::NumericalError& e) {
        std::cerr << "smt " << command << ": numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
