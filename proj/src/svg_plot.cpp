#include "nemflow/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "nemflow/errors.hpp"

namespace nemflow {

namespace {

constexpr double kW = 760.0, kH = 500.0;
constexpr double kL = 70.0, kR = 180.0, kT = 46.0, kB = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
  if (series.empty()) throw config_error("svg: no series to plot");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  const bool empty = !(xmin < xmax) || !(ymin <= ymax);
  if (!empty && ymin == ymax) {
    ymin *= 0.5;
    ymax *= 2.0;
  }

  const double lx0 = empty ? 0.0 : std::log10(xmin);
  const double lx1 = empty ? 1.0 : std::log10(xmax);
  const double ly0 = empty ? 0.0 : std::log10(ymin);
  const double ly1 = empty ? 1.0 : std::log10(ymax);
  const double px = (kW - kL - kR) / std::max(lx1 - lx0, 1e-12);
  const double py = (kH - kT - kB) / std::max(ly1 - ly0, 1e-12);
  auto X = [&](double v) { return kL + (std::log10(v) - lx0) * px; };
  auto Y = [&](double v) { return kH - kB - (std::log10(v) - ly0) * py; };

  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("svg: cannot write '" + tmp + "'");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kL << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";

  // frame
  out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << (kW - kL - kR)
      << "\" height=\"" << (kH - kT - kB)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  if (empty) {
    out << "<text x=\"" << (kL + 20) << "\" y=\"" << (kH / 2)
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#888\">no positive data"
        << "</text>\n</svg>\n";
    return;
  }

  // decade gridlines and tick labels
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double v = std::pow(10.0, d);
    out << "<line x1=\"" << num(X(v)) << "\" y1=\"" << kT << "\" x2=\"" << num(X(v)) << "\" y2=\""
        << (kH - kB) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << num(X(v)) << "\" y=\"" << (kH - kB + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << sci(v)
        << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    const double v = std::pow(10.0, d);
    out << "<line x1=\"" << kL << "\" y1=\"" << num(Y(v)) << "\" x2=\"" << (kW - kR) << "\" y2=\""
        << num(Y(v)) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << (kL - 6) << "\" y=\"" << num(Y(v) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << sci(v)
        << "</text>\n";
  }

  out << "<text x=\"" << (kL + (kW - kL - kR) / 2) << "\" y=\"" << (kH - 14)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << x_label
      << "</text>\n"
      << "<text x=\"18\" y=\"" << (kT + (kH - kT - kB) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "18 "
      << (kT + (kH - kT - kB) / 2) << ")\">" << y_label << "</text>\n";

  int ci = 0;
  for (const PlotSeries& s : series) {
    const char* color = kPalette[ci % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    bool any = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      out << num(X(s.x[i])) << "," << num(Y(s.y[i])) << " ";
      any = true;
    }
    out << "\"/>\n";
    const double ly = kT + 16 + 18 * ci;
    out << "<line x1=\"" << (kW - kR + 12) << "\" y1=\"" << ly << "\" x2=\"" << (kW - kR + 36)
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << (kW - kR + 42) << "\" y=\"" << (ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << (any ? "" : " (empty)")
        << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
  out.close();
  std::filesystem::rename(tmp, path);
}

}  // namespace nemflow
