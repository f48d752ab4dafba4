#pragma once

#include "smt/model.hpp"
#include "smt/procedures.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smt::cli {

/// Flat key-value sections, one per command:
///
///   [simulate]
///   n = 1000
///   b = -2, 0, 2
///
/// Lines starting with ';' or '#' are comments. Every loader validates its
/// values against the owning module's preconditions and throws ConfigError
/// naming the section and field.
class ConfigFile {
public:
    /// Parse an INI-style file; syntax errors carry the line number.
    static ConfigFile load(const std::string& path);
    static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
    ConfigFile() = default;

    bool has_section(const std::string& section) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    /// Keys of `section` in file order.
    std::vector<std::string> keys(const std::string& section) const;
    const std::string& origin() const noexcept { return origin_; }

private:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries_;
    std::string origin_;
};

struct Fig2Config {
    std::vector<double> zetas{1.5, 2.0, 3.0, 5.0};
    std::size_t n = 10'000'000'000ULL;
    std::size_t s_n = 100;
    double t_min = 0.0;
    std::optional<double> t_max;  // default: a*_n + Fbar^{-1}(1e-8)
    std::size_t t_steps = 2001;
};

struct Fig3Config {
    std::vector<double> zetas{2.0, 4.0};
    std::vector<double> betas{0.5, 0.25};
    double x_min = -4.0;
    double x_max = 4.0;
    std::size_t x_steps = 81;
    double y_min = -4.0;
    double y_max = 4.0;
    std::size_t y_steps = 81;
};

/// A two-strength configuration (x, y) in a named group. kind is "level"
/// (points on a level set of Lambda_inf, label = level value) or "line"
/// (points with constant (x + y)/2, label = that mean).
struct Fig4Point {
    std::string kind;
    double label = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Fig4Config {
    std::size_t n = 100'000;
    std::size_t s_n = 20;
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    double lvalue_t = 0.3;
    double bh_alpha = 0.1;
    bool full_scale = false;  // n = 10^6
    std::vector<Fig4Point> points;  // empty: default_fig4_points()
};

/// Approximate Gaussian, beta = 1/2 point lists: level sets {0.7, 0.5, 0.2}
/// (y solved from x so the point lies exactly on the level set) and lines with
/// (x + y)/2 in {-1, 0.5, 1.5}.
std::vector<Fig4Point> default_fig4_points();

struct SimulateConfig {
    std::size_t n = 1000;
    std::size_t s_n = 10;
    double zeta = 2.0;
    std::vector<double> b{0.0};
    std::optional<std::pair<double, double>> two_strength;  // replaces b when present
    double beta = 0.5;
    std::vector<ProcedureSpec> procedures{procedure::OracleThreshold{}};
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    SignRule signs = SignRule::AllPositive;
    Placement placement = Placement::FirstS;
};

struct BoundaryConfig {
    std::size_t n = 1'000'000;
    std::size_t s_n = 20;
    double zeta = 2.0;
    std::vector<double> offsets{0.0};  // one value (replicated to s_n) or s_n values
    std::optional<std::pair<double, double>> two_strength;
    double beta = 0.5;
    std::optional<double> alpha;
    std::optional<std::size_t> rho;
    std::size_t reps = 10'000;
    std::uint64_t seed = 1;

    std::vector<double> resolved_offsets() const;
};

Fig2Config load_fig2(const ConfigFile& file);
Fig3Config load_fig3(const ConfigFile& file);
Fig4Config load_fig4(const ConfigFile& file);
SimulateConfig load_simulate(const ConfigFile& file);
BoundaryConfig load_boundary(const ConfigFile& file);

/// Parse "a, b, c" into doubles.
std::vector<double> parse_list(const std::string& text, const std::string& what);

/// key = value lines describing `config`, readable back by read_signal_config.
std::string format_signal_config(const SignalConfig& config);
/// Reads n, s_n, zeta, offsets, signs, placement from `section`.
SignalConfig read_signal_config(const ConfigFile& file, const std::string& section);

} // namespace smt::cli
