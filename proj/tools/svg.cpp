#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace klconc::cli {
namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#17becf"};
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

// Axis in plotting space (log10 of the data on log axes).
struct Axis {
  bool log = false;
  double lo = 0, hi = 1;
  std::vector<double> ticks;  // plotting-space positions

  [[nodiscard]] double map(double v) const { return log ? std::log10(v) : v; }
  [[nodiscard]] double tick_value(double t) const { return log ? std::pow(10.0, t) : t; }
};

Axis make_axis(double min, double max, bool log) {
  Axis a;
  a.log = log;
  if (log) {
    a.lo = std::floor(std::log10(min));
    a.hi = std::ceil(std::log10(max));
    if (a.hi <= a.lo) a.hi = a.lo + 1;
    for (double e = a.lo; e <= a.hi + 1e-9; e += 1) a.ticks.push_back(e);
    return a;
  }
  if (max <= min) {
    const double pad = std::max(std::abs(min) * 0.1, 1.0);
    min -= pad;
    max += pad;
  }
  const double step = nice_step(max - min);
  a.lo = std::floor(min / step) * step;
  a.hi = std::ceil(max / step) * step;
  for (double t = a.lo; t <= a.hi + step * 1e-9; t += step) {
    a.ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return a;
}

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts) {
  std::vector<Series> kept;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    Series k{s.name, {}};
    for (const auto& [x, y] : s.points) {
      if (!usable(x, opts.logx) || !usable(y, opts.logy)) continue;
      k.points.emplace_back(x, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    kept.push_back(std::move(k));
  }
  if (!std::isfinite(xmin)) throw PlotError("no plottable points");

  const Axis ax = make_axis(xmin, xmax, opts.logx);
  const Axis ay = make_axis(ymin, ymax, opts.logy);
  const double w = opts.width, h = opts.height;
  const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto sy = [&](double v) { return kTop + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
    << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height
    << "\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(opts.title) << "</text>\n";
  }

  o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : ax.ticks) {
    const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    o << "<line x1=\"" << px(x) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(x) << "\" y2=\""
      << px(kTop + ph) << "\"/>\n";
  }
  for (double t : ay.ticks) {
    const double y = kTop + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    o << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(y) << "\" x2=\"" << px(kLeft + pw)
      << "\" y2=\"" << px(y) << "\"/>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(pw) << "\" height=\""
    << px(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks) {
    const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    o << "<text x=\"" << px(x) << "\" y=\"" << px(kTop + ph + 16) << "\" text-anchor=\"middle\">"
      << label(ax.tick_value(t)) << "</text>\n";
  }
  for (double t : ay.ticks) {
    const double y = kTop + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    o << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">"
      << label(ay.tick_value(t)) << "</text>\n";
  }
  if (!opts.x_label.empty()) {
    o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(h - 16) << "\" text-anchor=\"middle\">"
      << escape(opts.x_label) << "</text>\n";
  }
  if (!opts.y_label.empty()) {
    o << "<text x=\"16\" y=\"" << px(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << px(kTop + ph / 2) << ")\">" << escape(opts.y_label) << "</text>\n";
  }

  for (std::size_t i = 0; i < kept.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    const auto& pts = kept[i].points;
    if (pts.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j) o << ' ';
        o << px(sx(pts[j].first)) << ',' << px(sy(pts[j].second));
      }
      o << "\"/>\n";
    }
    for (const auto& [x, y] : pts) {
      o << "<circle cx=\"" << px(sx(x)) << "\" cy=\"" << px(sy(y)) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    o << "<rect x=\"" << px(kLeft + pw + 12) << "\" y=\"" << px(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
      << color << "\"/>\n";
    o << "<text x=\"" << px(kLeft + pw + 28) << "\" y=\"" << px(ly + 1) << "\">" << escape(kept[i].name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<Series> series_from_table(const Table& t, const std::string& x,
                                      const std::vector<std::string>& ys) {
  const auto xi = t.column(x);
  if (!xi) throw PlotError("missing column '" + x + "'");
  std::vector<std::size_t> yi;
  for (const auto& y : ys) {
    const auto c = t.column(y);
    if (!c) throw PlotError("missing column '" + y + "'");
    yi.push_back(*c);
  }
  if (t.rows.empty()) throw PlotError("CSV has no data rows");

  auto parse = [](const std::string& cell, double& out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size();
  };

  std::vector<Series> out;
  for (std::size_t s = 0; s < ys.size(); ++s) {
    Series series{ys[s], {}};
    for (const auto& row : t.rows) {
      double xv = 0, yv = 0;
      if (parse(row[*xi], xv) && parse(row[yi[s]], yv)) series.points.emplace_back(xv, yv);
    }
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace klconc::cli
