#pragma once

#include <string>
#include <vector>

namespace nemflow {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;  // overlay style for fitted envelopes / reference slopes
};

// Self-contained log-log SVG line plot. Nonpositive points are dropped (they
// have no logarithm); an all-dropped plot still renders axes and a note, but
// an empty series list is a config_error. The file is written atomically
// (temp then rename) and its bytes are deterministic for identical inputs.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

}  // namespace nemflow
