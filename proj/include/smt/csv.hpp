#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace smt::csv {

/// Shortest decimal that round-trips to the same double ('.' separator,
/// locale independent). inf/nan render as "inf", "-inf", "nan".
std::string format_double(double v);

/// Writes the cells joined by ',' and a trailing newline.
void write_row(std::ostream& os, const std::vector<std::string>& cells);

/// Writes "# key=value" comment lines.
void write_comment(std::ostream& os, std::string_view text);

/// One real per line. Blank lines and lines starting with '#' are skipped;
/// anything else that does not parse fully as a double throws ConfigError
/// naming the line.
std::vector<double> read_observations(std::istream& is);

/// Strict double parse of the full string; throws ConfigError on failure.
double parse_double(std::string_view text, std::string_view what);

} // namespace smt::csv
