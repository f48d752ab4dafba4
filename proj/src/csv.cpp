#include "smt/csv.hpp"

#include "smt/errors.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace smt::csv {

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_row(std::ostream& os, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            os << ',';
        }
        os << cells[i];
    }
    os << '\n';
}

void write_comment(std::ostream& os, std::string_view text)
{
    os << "# " << text << '\n';
}

double parse_double(std::string_view text, std::string_view what)
{
    auto trim_begin = text.find_first_not_of(" \t\r");
    auto trim_end = text.find_last_not_of(" \t\r");
    if (trim_begin == std::string_view::npos) {
        throw ConfigError(std::string(what) + ": empty value");
    }
    text = text.substr(trim_begin, trim_end - trim_begin + 1);
    if (text == "inf" || text == "+inf") {
        return HUGE_VAL;
    }
    if (text == "-inf") {
        return -HUGE_VAL;
    }
    double v = 0.0;
    const char* first = text.data();
    if (*first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
    }
    return v;
}

std::vector<double> read_observations(std::istream& is)
{
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') {
            continue;
        }
        out.push_back(parse_double(line, "line " + std::to_string(lineno)));
    }
    return out;
}

} // namespace smt::csv
