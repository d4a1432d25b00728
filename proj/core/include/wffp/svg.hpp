#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wffp::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Minimal standalone SVG line chart.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& opt);

void write_file(const std::string& path, const std::string& contents);

}  // namespace wffp::svg
