#include "wffp/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace wffp::csv {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os << ',';
    os << fields[i];
  }
  os << '\n';
}

}  // namespace wffp::csv
