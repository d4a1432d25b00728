#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wffp::csv {

/// Shortest-round-trip-safe text for a double: 17 significant digits, '.' separator.
std::string number(double v);

/// Joins fields with commas; fields are written verbatim.
void write_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace wffp::csv
