#pragma once

#include <vector>

namespace nemflow {

// Decay laws fitted to positive time series by least squares in log space:
//   algebraic:     y ~ C (1+t)^(-alpha)
//   logarithmic:   y ~ C ln(e+t)^(-alpha)
enum class DecayModel { algebraic, logarithmic };

struct DecayFit {
  DecayModel model = DecayModel::algebraic;
  double alpha = 0.0;
  double log_prefactor = 0.0;  // ln C
  double rms_residual = 0.0;   // of ln y over the window
  int points_used = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;

  double predict(double t) const;
};

// Closed-form two-parameter fit over samples with window_lo <= t <= window_hi.
// Throws config_error on size mismatch or an empty/inverted window,
// numeric_error when fewer than 8 samples fall in the window or any windowed
// value is not strictly positive.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                   double window_lo, double window_hi, DecayModel model);

}  // namespace nemflow
