#include "nemflow/fitting.hpp"

#include <cmath>
#include <cstddef>

#include "nemflow/errors.hpp"

namespace nemflow {

namespace {

double abscissa(DecayModel model, double t) {
  // The regressor whose negated slope is alpha.
  if (model == DecayModel::algebraic) return std::log(1.0 + t);
  return std::log(std::log(std::exp(1.0) + t));
}

}  // namespace

double DecayFit::predict(double t) const {
  return std::exp(log_prefactor - alpha * abscissa(model, t));
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                   double window_lo, double window_hi, DecayModel model) {
  if (t.size() != y.size()) throw config_error("fit_decay: mismatched series lengths");
  if (!(window_lo < window_hi)) throw config_error("fit_decay: empty fit window");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window_lo || t[i] > window_hi) continue;
    if (!(y[i] > 0.0)) throw numeric_error("fit_decay: nonpositive value in fit window");
    const double x = abscissa(model, t[i]);
    const double v = std::log(y[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++m;
  }
  if (m < 8) throw numeric_error("fit_decay: fewer than 8 samples in fit window");

  const double det = m * sxx - sx * sx;
  if (!(det > 0.0)) throw numeric_error("fit_decay: degenerate abscissas in fit window");
  const double slope = (m * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / m;

  DecayFit fit;
  fit.model = model;
  fit.alpha = -slope;
  fit.log_prefactor = intercept;
  fit.points_used = m;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;

  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window_lo || t[i] > window_hi) continue;
    const double r = std::log(y[i]) - (intercept + slope * abscissa(model, t[i]));
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / m);
  return fit;
}

}  // namespace nemflow
