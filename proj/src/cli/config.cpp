#include "smt/cli/config.hpp"

#include "smt/csv.hpp"
#include "smt/errors.hpp"
#include "smt/subbotin.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace smt::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// Typed, declared-key access to one section.
class Section {
public:
    Section(const ConfigFile& file, std::string name, std::set<std::string> allowed)
        : file_(file)
        , name_(std::move(name))
        , allowed_(std::move(allowed))
    {
        for (const auto& key : file_.keys(name_)) {
            if (!allowed_.count(key)) {
                throw ConfigError(file_.origin() + ": [" + name_ + "] unknown key '" + key + "'");
            }
        }
    }

    std::string field(const std::string& key) const
    {
        return file_.origin() + ": [" + name_ + "] " + key;
    }

    std::optional<std::string> raw(const std::string& key) const { return file_.get(name_, key); }

    double real(const std::string& key, double fallback) const
    {
        const auto v = raw(key);
        return v ? csv::parse_double(*v, field(key)) : fallback;
    }

    std::optional<double> optional_real(const std::string& key) const
    {
        const auto v = raw(key);
        if (!v) {
            return std::nullopt;
        }
        return csv::parse_double(*v, field(key));
    }

    std::size_t count(const std::string& key, std::size_t fallback) const
    {
        const auto v = raw(key);
        return v ? parse_count(*v, field(key)) : fallback;
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) const
    {
        const auto v = raw(key);
        if (!v) {
            return fallback;
        }
        const std::string s = trim(*v);
        std::uint64_t out = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw ConfigError(field(key) + ": expected an unsigned 64-bit integer, got '" + s + "'");
        }
        return out;
    }

    std::optional<std::vector<double>> list(const std::string& key) const
    {
        const auto v = raw(key);
        if (!v) {
            return std::nullopt;
        }
        return parse_list(*v, field(key));
    }

    bool flag(const std::string& key, bool fallback) const
    {
        const auto v = raw(key);
        if (!v) {
            return fallback;
        }
        const std::string s = trim(*v);
        if (s == "true" || s == "1" || s == "yes") {
            return true;
        }
        if (s == "false" || s == "0" || s == "no") {
            return false;
        }
        throw ConfigError(field(key) + ": expected true or false, got '" + s + "'");
    }

    static std::size_t parse_count(const std::string& text, const std::string& what)
    {
        const double d = csv::parse_double(text, what);
        if (!(d >= 0.0) || d != std::floor(d) || d > 9.007199254740992e15) {
            throw ConfigError(what + ": expected a non-negative integer, got '" + trim(text) + "'");
        }
        return static_cast<std::size_t>(d);
    }

private:
    const ConfigFile& file_;
    std::string name_;
    std::set<std::string> allowed_;
};

// Rethrow a module precondition failure as a config error on `field`.
template <class F>
void validated(const std::string& field, F&& f)
{
    try {
        f();
    } catch (const DomainError& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

std::vector<Fig4Point> parse_points(const std::string& text, const std::string& kind,
                                    const std::string& what)
{
    std::vector<Fig4Point> out;
    for (const auto& item : split(text, ';')) {
        const auto parts = split(item, ':');
        if (parts.size() != 3) {
            throw ConfigError(what + ": expected 'label:x:y' items separated by ';', got '" + item + "'");
        }
        out.push_back({kind, csv::parse_double(parts[0], what), csv::parse_double(parts[1], what),
                       csv::parse_double(parts[2], what)});
    }
    return out;
}

std::pair<double, double> parse_pair(const std::vector<double>& v, const std::string& what)
{
    if (v.size() != 2) {
        throw ConfigError(what + ": expected two values 'x, y'");
    }
    return {v[0], v[1]};
}

SignRule parse_signs(const std::optional<std::string>& v, const std::string& what)
{
    if (!v || trim(*v) == "positive") {
        return SignRule::AllPositive;
    }
    if (trim(*v) == "random") {
        return SignRule::Random;
    }
    throw ConfigError(what + ": expected 'positive' or 'random'");
}

Placement parse_placement(const std::optional<std::string>& v, const std::string& what)
{
    if (!v || trim(*v) == "first") {
        return Placement::FirstS;
    }
    if (trim(*v) == "random") {
        return Placement::UniformRandom;
    }
    throw ConfigError(what + ": expected 'first' or 'random'");
}

} // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin)
{
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    ConfigFile file;
    file.origin_ = origin;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError(origin + ": key '" + section + "' must appear inside a [section]");
        }
        for (const auto& [key, value] : body) {
            file.entries_.push_back({section, key, value.get_value<std::string>()});
        }
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

bool ConfigFile::has_section(const std::string& section) const
{
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.section == section; });
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const
{
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) {
            return e.value;
        }
    }
    return std::nullopt;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const
{
    std::vector<std::string> out;
    for (const auto& e : entries_) {
        if (e.section == section) {
            out.push_back(e.key);
        }
    }
    return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(csv::parse_double(item, what));
    }
    if (out.empty()) {
        throw ConfigError(what + ": empty list");
    }
    return out;
}

std::vector<Fig4Point> default_fig4_points()
{
    const NoiseDist gauss(2.0);
    std::vector<Fig4Point> pts;
    auto level = [&](double c, std::initializer_list<double> xs) {
        // (Fbar(x) + Fbar(y)) / 2 = c, diagonal point first.
        pts.push_back({"level", c, gauss.upper_tail_inv(c), gauss.upper_tail_inv(c)});
        for (double x : xs) {
            pts.push_back({"level", c, x, gauss.upper_tail_inv(2.0 * c - gauss.upper_tail(x))});
        }
    };
    level(0.7, {-1.0, -1.5, -2.0});
    level(0.5, {-1.0, -2.0, -3.0});
    level(0.2, {0.6, 0.45, 0.33});
    for (double m : {-1.0, 0.5, 1.5}) {
        for (double d : {0.0, 1.0, 2.0, 3.0}) {
            pts.push_back({"line", m, m - d, m + d});
        }
    }
    return pts;
}

Fig2Config load_fig2(const ConfigFile& file)
{
    Fig2Config c;
    const Section s(file, "fig2", {"zetas", "n", "s_n", "t_min", "t_max", "t_steps"});
    if (auto z = s.list("zetas")) {
        c.zetas = *z;
    }
    c.n = s.count("n", c.n);
    c.s_n = s.count("s_n", c.s_n);
    c.t_min = s.real("t_min", c.t_min);
    c.t_max = s.optional_real("t_max");
    c.t_steps = s.count("t_steps", c.t_steps);

    for (double z : c.zetas) {
        validated(s.field("zetas"), [&] { NoiseDist{z}; });
    }
    validated(s.field("s_n"), [&] { oracle_threshold(c.n, c.s_n, 2.0); });
    if (c.t_steps == 0) {
        throw ConfigError(s.field("t_steps") + ": the threshold grid is empty");
    }
    if (!(c.t_min >= 0.0)) {
        throw ConfigError(s.field("t_min") + ": thresholds must be non-negative");
    }
    if (c.t_max && !(*c.t_max >= c.t_min)) {
        throw ConfigError(s.field("t_max") + ": must be at least t_min");
    }
    return c;
}

Fig3Config load_fig3(const ConfigFile& file)
{
    Fig3Config c;
    const Section s(file, "fig3",
                    {"zetas", "betas", "x_min", "x_max", "x_steps", "y_min", "y_max", "y_steps"});
    if (auto z = s.list("zetas")) {
        c.zetas = *z;
    }
    if (auto b = s.list("betas")) {
        c.betas = *b;
    }
    c.x_min = s.real("x_min", c.x_min);
    c.x_max = s.real("x_max", c.x_max);
    c.x_steps = s.count("x_steps", c.x_steps);
    c.y_min = s.real("y_min", c.y_min);
    c.y_max = s.real("y_max", c.y_max);
    c.y_steps = s.count("y_steps", c.y_steps);

    for (double z : c.zetas) {
        validated(s.field("zetas"), [&] { NoiseDist{z}; });
    }
    for (double b : c.betas) {
        if (!(b > 0.0 && b < 1.0)) {
            throw ConfigError(s.field("betas") + ": beta must lie in (0, 1)");
        }
    }
    if (c.x_steps == 0 || c.y_steps == 0) {
        throw ConfigError(s.field(c.x_steps == 0 ? "x_steps" : "y_steps") + ": the grid is empty");
    }
    if (!(c.x_max >= c.x_min) || !(c.y_max >= c.y_min)) {
        throw ConfigError(s.field("x_max") + ": grid bounds are inverted");
    }
    return c;
}

Fig4Config load_fig4(const ConfigFile& file)
{
    Fig4Config c;
    const Section s(file, "fig4",
                    {"n", "s_n", "reps", "seed", "lvalue_t", "bh_alpha", "full_scale", "level_points",
                     "line_points"});
    c.full_scale = s.flag("full_scale", c.full_scale);
    c.n = s.count("n", c.full_scale ? 1'000'000 : c.n);
    c.s_n = s.count("s_n", c.s_n);
    c.reps = s.count("reps", c.reps);
    c.seed = s.seed("seed", c.seed);
    c.lvalue_t = s.real("lvalue_t", c.lvalue_t);
    c.bh_alpha = s.real("bh_alpha", c.bh_alpha);
    const auto lv = s.raw("level_points");
    const auto ln = s.raw("line_points");
    if (lv || ln) {
        if (lv) {
            c.points = parse_points(*lv, "level", s.field("level_points"));
        }
        if (ln) {
            auto more = parse_points(*ln, "line", s.field("line_points"));
            c.points.insert(c.points.end(), more.begin(), more.end());
        }
    }
    if (c.reps == 0) {
        throw ConfigError(s.field("reps") + ": must be at least 1");
    }
    validated(s.field("lvalue_t"), [&] { validate(procedure::LValue{c.lvalue_t}); });
    validated(s.field("bh_alpha"), [&] { validate(procedure::BH{c.bh_alpha}); });
    const auto pts = c.points.empty() ? default_fig4_points() : c.points;
    for (const auto& p : pts) {
        validated(s.field(p.kind + "_points"), [&] {
            SignalConfig::two_strength(c.n, c.s_n, 2.0, p.x, p.y, 0.5).validate();
        });
    }
    return c;
}

SimulateConfig load_simulate(const ConfigFile& file)
{
    SimulateConfig c;
    const Section s(file, "simulate",
                    {"n", "s_n", "zeta", "b", "two_strength", "beta", "procedures", "reps", "seed",
                     "signs", "placement"});
    if (!file.has_section("simulate")) {
        throw ConfigError(file.origin() + ": missing [simulate] section");
    }
    c.n = s.count("n", c.n);
    c.s_n = s.count("s_n", c.s_n);
    c.zeta = s.real("zeta", c.zeta);
    if (auto b = s.list("b")) {
        c.b = *b;
    }
    if (auto ts = s.list("two_strength")) {
        c.two_strength = parse_pair(*ts, s.field("two_strength"));
    }
    c.beta = s.real("beta", c.beta);
    if (auto p = s.raw("procedures")) {
        c.procedures.clear();
        for (const auto& item : split(*p, ',')) {
            try {
                c.procedures.push_back(parse_procedure(item));
            } catch (const ConfigError& e) {
                throw ConfigError(s.field("procedures") + ": " + e.what());
            }
        }
        if (c.procedures.empty()) {
            throw ConfigError(s.field("procedures") + ": empty list");
        }
    }
    c.reps = s.count("reps", c.reps);
    c.seed = s.seed("seed", c.seed);
    c.signs = parse_signs(s.raw("signs"), s.field("signs"));
    c.placement = parse_placement(s.raw("placement"), s.field("placement"));

    if (c.reps == 0) {
        throw ConfigError(s.field("reps") + ": must be at least 1");
    }
    validated(s.field("zeta"), [&] { NoiseDist{c.zeta}; });
    if (c.two_strength) {
        validated(s.field("two_strength"), [&] {
            SignalConfig::two_strength(c.n, c.s_n, c.zeta, c.two_strength->first, c.two_strength->second,
                                       c.beta)
                .validate();
        });
    } else {
        for (double b : c.b) {
            validated(s.field("b"), [&] { SignalConfig::single_strength(c.n, c.s_n, c.zeta, b).validate(); });
        }
    }
    for (const auto& p : c.procedures) {
        if (std::holds_alternative<procedure::LValue>(p) && c.zeta != 2.0) {
            throw ConfigError(s.field("procedures") +
                              ": the l-value procedure requires Gaussian noise (zeta = 2)");
        }
        if (std::holds_alternative<procedure::OracleThreshold>(p) && c.s_n == 0) {
            throw ConfigError(s.field("procedures") + ": the oracle procedure requires s_n > 0");
        }
    }
    return c;
}

std::vector<double> BoundaryConfig::resolved_offsets() const
{
    if (two_strength) {
        return SignalConfig::two_strength(n, s_n, zeta, two_strength->first, two_strength->second, beta)
            .offsets;
    }
    if (offsets.size() == 1) {
        return std::vector<double>(s_n, offsets.front());
    }
    return offsets;
}

BoundaryConfig load_boundary(const ConfigFile& file)
{
    BoundaryConfig c;
    const Section s(file, "boundary",
                    {"n", "s_n", "zeta", "offsets", "two_strength", "beta", "alpha", "rho", "reps", "seed"});
    c.n = s.count("n", c.n);
    c.s_n = s.count("s_n", c.s_n);
    c.zeta = s.real("zeta", c.zeta);
    if (auto o = s.list("offsets")) {
        c.offsets = *o;
    }
    if (auto ts = s.list("two_strength")) {
        c.two_strength = parse_pair(*ts, s.field("two_strength"));
    }
    c.beta = s.real("beta", c.beta);
    c.alpha = s.optional_real("alpha");
    if (s.raw("rho")) {
        c.rho = s.count("rho", 1);
    }
    c.reps = s.count("reps", c.reps);
    c.seed = s.seed("seed", c.seed);

    validated(s.field("zeta"), [&] { NoiseDist{c.zeta}; });
    if (!c.two_strength && c.offsets.size() != 1 && c.offsets.size() != c.s_n) {
        throw ConfigError(s.field("offsets") + ": give one value or exactly s_n values");
    }
    validated(s.field("offsets"), [&] {
        SignalConfig sc;
        sc.n = c.n;
        sc.s_n = c.s_n;
        sc.zeta = c.zeta;
        sc.offsets = c.resolved_offsets();
        sc.validate();
        if (c.s_n == 0) {
            throw DomainError("boundary quantities need s_n > 0");
        }
    });
    if (c.alpha && !(*c.alpha > 0.0 && *c.alpha < 1.0)) {
        throw ConfigError(s.field("alpha") + ": must lie in (0, 1)");
    }
    if (c.rho) {
        if (*c.rho < 1) {
            throw ConfigError(s.field("rho") + ": must be at least 1");
        }
        if (c.n / c.s_n < 2) {
            throw ConfigError(s.field("rho") + ": p_n needs n / s_n >= 2");
        }
    }
    if (c.reps == 0) {
        throw ConfigError(s.field("reps") + ": must be at least 1");
    }
    return c;
}

std::string format_signal_config(const SignalConfig& config)
{
    std::ostringstream os;
    os << "n = " << config.n << '\n';
    os << "s_n = " << config.s_n << '\n';
    os << "zeta = " << csv::format_double(config.zeta) << '\n';
    os << "offsets = ";
    for (std::size_t j = 0; j < config.offsets.size(); ++j) {
        os << (j ? ", " : "") << csv::format_double(config.offsets[j]);
    }
    os << '\n';
    os << "signs = " << (config.signs == SignRule::Random ? "random" : "positive") << '\n';
    os << "placement = " << (config.placement == Placement::UniformRandom ? "random" : "first") << '\n';
    return os.str();
}

SignalConfig read_signal_config(const ConfigFile& file, const std::string& section)
{
    const Section s(file, section, {"n", "s_n", "zeta", "offsets", "signs", "placement"});
    SignalConfig c;
    c.n = s.count("n", 0);
    c.s_n = s.count("s_n", 0);
    c.zeta = s.real("zeta", 2.0);
    if (c.s_n > 0) {
        auto o = s.list("offsets");
        if (!o) {
            throw ConfigError(s.field("offsets") + ": required when s_n > 0");
        }
        c.offsets = o->size() == 1 ? std::vector<double>(c.s_n, o->front()) : *o;
    }
    c.signs = parse_signs(s.raw("signs"), s.field("signs"));
    c.placement = parse_placement(s.raw("placement"), s.field("placement"));
    validated(s.field("offsets"), [&] { c.validate(); });
    return c;
}

} // namespace smt::cli
