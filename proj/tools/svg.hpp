#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stiefel::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal scatter plot with linear axes; one colour per series.
void write_svg(std::ostream &os, const std::string &title, const std::string &x_label,
               const std::string &y_label, const std::vector<Series> &series);

}  // namespace stiefel::cli
