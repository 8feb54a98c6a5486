#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dynsis::csv {

/// Shortest round-trip decimal representation of a double.
std::string format(double value);

/// Splits one CSV line on commas; no quoting is used by any of our formats.
std::vector<std::string> split(std::string_view line);

double parse_double(std::string_view field);
long long parse_int(std::string_view field);

/// Reads a headed CSV table: verifies the header matches `expected_header`
/// exactly and returns the data rows. Blank lines are skipped.
std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view expected_header);

}  // namespace dynsis::csv
