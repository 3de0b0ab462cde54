#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace lmmsel::cli {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 40.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                                "#e377c2", "#17becf", "#bcbd22"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
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

double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string render_path_svg(const PathPlot& plot) {
  const Index rows = plot.lambdas.size();
  const Index p = plot.coefficients.cols();
  if (rows < 1 || plot.coefficients.rows() != rows || static_cast<Index>(plot.names.size()) != p ||
      static_cast<Index>(plot.highlighted.size()) != p)
    throw InputError("path plot: inconsistent dimensions");

  Vector lx(rows);
  for (Index i = 0; i < rows; ++i) lx(i) = std::log10(plot.lambdas(i));
  double x0 = lx.minCoeff(), x1 = lx.maxCoeff();
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  double y0 = p > 0 ? plot.coefficients.minCoeff() : -1.0;
  double y1 = p > 0 ? plot.coefficients.maxCoeff() : 1.0;
  y0 = std::min(y0, 0.0);
  y1 = std::max(y1, 0.0);
  if (y1 - y0 < 1e-12) {
    y0 -= 1.0;
    y1 += 1.0;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<metadata>" << escape(plot.metadata) << "</metadata>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and grid.
  s << "<g id=\"axes\" stroke=\"#444\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
    << num(kTop + ph) << "\"/>\n";
  s << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
    << num(kTop + ph) << "\"/>\n";
  s << "</g>\n<g id=\"ticks\" fill=\"#222\">\n";
  const double xs = nice_step(x1 - x0, 6);
  for (double t = std::ceil(x0 / xs - 1e-9) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    const double tx = sx(t);
    s << "<line x1=\"" << num(tx) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(tx) << "\" y2=\""
      << num(kTop + ph + 5) << "\" stroke=\"#444\"/>\n";
    s << "<text x=\"" << num(tx) << "\" y=\"" << num(kTop + ph + 20) << "\" text-anchor=\"middle\">"
      << tick_label(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
  }
  const double ys = nice_step(y1 - y0, 6);
  for (double t = std::ceil(y0 / ys - 1e-9) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    const double ty = sy(t);
    s << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(ty) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
      << num(ty) << "\" stroke=\"#e5e5e5\"/>\n";
    s << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(ty + 4) << "\" text-anchor=\"end\">"
      << tick_label(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
  }
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
    << "\" text-anchor=\"middle\">log10(lambda)</text>\n";
  s << "<text transform=\"translate(18," << num(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">coefficient</text>\n";
  s << "</g>\n";

  // Background trajectories first so the highlighted ones stay on top.
  s << "<g id=\"trajectories\" fill=\"none\" stroke-width=\"1.5\">\n";
  int colour = 0;
  std::vector<std::string> colours(static_cast<std::size_t>(p), "#c0c0c0");
  for (Index j = 0; j < p; ++j)
    if (plot.highlighted[static_cast<std::size_t>(j)])
      colours[static_cast<std::size_t>(j)] = kPalette[colour++ % 8];
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < p; ++j) {
      const bool hi = plot.highlighted[static_cast<std::size_t>(j)];
      if (hi != (pass == 1)) continue;
      s << "<polyline class=\"coef\" data-name=\"" << escape(plot.names[static_cast<std::size_t>(j)])
        << "\" stroke=\"" << colours[static_cast<std::size_t>(j)] << "\" points=\"";
      for (Index i = 0; i < rows; ++i)
        s << (i ? " " : "") << num(sx(lx(i))) << ',' << num(sy(plot.coefficients(i, j)));
      s << "\"/>\n";
    }
  }
  s << "</g>\n";

  // Label at the smallest lambda, where the trajectories are most spread.
  Index dense_row = 0;
  for (Index i = 1; i < rows; ++i)
    if (lx(i) < lx(dense_row)) dense_row = i;
  std::vector<std::pair<double, Index>> labels;
  for (Index j = 0; j < p; ++j)
    if (plot.highlighted[static_cast<std::size_t>(j)]) labels.emplace_back(sy(plot.coefficients(dense_row, j)) - 4, j);
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 1; i < labels.size(); ++i)
    labels[i].first = std::max(labels[i].first, labels[i - 1].first + 13.0);
  s << "<g id=\"labels\">\n";
  for (const auto& [y, j] : labels)
    s << "<text x=\"" << num(sx(lx(dense_row)) + 6) << "\" y=\"" << num(y) << "\" fill=\""
      << colours[static_cast<std::size_t>(j)] << "\">" << escape(plot.names[static_cast<std::size_t>(j)]) << "</text>\n";
  s << "</g>\n";

  if (plot.marker_index >= 0 && plot.marker_index < rows) {
    const double mx = sx(lx(plot.marker_index));
    s << "<line id=\"bic-min\" class=\"bic-marker\" x1=\"" << num(mx) << "\" y1=\"" << num(kTop) << "\" x2=\""
      << num(mx) << "\" y2=\"" << num(kTop + ph)
      << "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
    s << "<text x=\"" << num(mx + 4) << "\" y=\"" << num(kTop - 8) << "\" fill=\"#d62728\">BIC minimum</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace lmmsel::cli
