#pragma once

// Hand-built SVG scatter/line plots. Output bytes depend only on the input.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "table.hpp"

namespace klconc::cli {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool logx = false;
  bool logy = false;
  int width = 640;
  int height = 420;
};

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points that are not finite, or not positive on a log axis, are dropped.
/// Throws PlotError when nothing is left to draw.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts);

/// One series per y column, x taken from column `x`. Blank cells are
/// skipped. Throws PlotError naming a missing column, or on an empty body.
std::vector<Series> series_from_table(const Table& t, const std::string& x,
                                      const std::vector<std::string>& ys);

}  // namespace klconc::cli
