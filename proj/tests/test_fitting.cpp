#include <doctest.h>

#include <cmath>
#include <vector>

#include "nemflow/errors.hpp"
#include "nemflow/fitting.hpp"
#include "nemflow/rng.hpp"

using namespace nemflow;

namespace {

std::vector<double> time_grid(double lo, double hi, int m) {
  std::vector<double> t(m);
  for (int i = 0; i < m; ++i) t[i] = lo + (hi - lo) * double(i) / double(m - 1);
  return t;
}

}  // namespace

TEST_CASE("exact power law is recovered to roundoff") {
  const std::vector<double> t = time_grid(1.0, 50.0, 64);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = 3.7 * std::pow(1.0 + t[i], -1.5);
  DecayFit f = fit_decay(t, y, 1.0, 50.0, DecayModel::algebraic);
  CHECK(f.alpha == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::exp(f.log_prefactor) == doctest::Approx(3.7).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-13);
  CHECK(f.points_used == 64);
  CHECK(f.predict(9.0) == doctest::Approx(3.7 * std::pow(10.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("logarithmic model is recovered to roundoff") {
  const std::vector<double> t = time_grid(2.0, 80.0, 48);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    y[i] = 0.9 * std::pow(std::log(M_E + t[i]), -2.0);
  DecayFit f = fit_decay(t, y, 2.0, 80.0, DecayModel::logarithmic);
  CHECK(f.alpha == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-13);
}

TEST_CASE("constant series fits exponent zero") {
  const std::vector<double> t = time_grid(1.0, 20.0, 32);
  std::vector<double> y(t.size(), 4.2);
  DecayFit f = fit_decay(t, y, 1.0, 20.0, DecayModel::algebraic);
  CHECK(std::abs(f.alpha) < 1e-13);
  CHECK(std::exp(f.log_prefactor) == doctest::Approx(4.2).epsilon(1e-13));
}

TEST_CASE("small multiplicative noise barely moves the exponent") {
  const std::vector<double> t = time_grid(1.0, 50.0, 128);
  std::vector<double> y(t.size());
  SplitMix64 rng(77);
  for (std::size_t i = 0; i < t.size(); ++i)
    y[i] = 2.0 * std::pow(1.0 + t[i], -1.0) * (1.0 + 0.01 * (2.0 * rng.uniform() - 1.0));
  DecayFit f = fit_decay(t, y, 1.0, 50.0, DecayModel::algebraic);
  CHECK(std::abs(f.alpha - 1.0) < 0.05);
  CHECK(f.rms_residual < 0.02);
}

TEST_CASE("fit is invariant under rescaling the series") {
  const std::vector<double> t = time_grid(1.0, 30.0, 40);
  std::vector<double> y(t.size()), y2(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    y[i] = std::pow(1.0 + t[i], -0.8);
    y2[i] = 1e6 * y[i];
  }
  DecayFit a = fit_decay(t, y, 1.0, 30.0, DecayModel::algebraic);
  DecayFit b = fit_decay(t, y2, 1.0, 30.0, DecayModel::algebraic);
  CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-12));
}

TEST_CASE("window restricts the points actually used") {
  const std::vector<double> t = time_grid(0.0, 100.0, 101);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::pow(1.0 + t[i], -1.0);
  DecayFit f = fit_decay(t, y, 10.0, 20.0, DecayModel::algebraic);
  CHECK(f.points_used == 11);
  CHECK(f.window_lo == 10.0);
  CHECK(f.window_hi == 20.0);
}

TEST_CASE("invalid inputs raise the right error types") {
  const std::vector<double> t = time_grid(1.0, 10.0, 16);
  std::vector<double> y(t.size(), 1.0);

  std::vector<double> short_y(t.size() - 1, 1.0);
  CHECK_THROWS_AS((void)fit_decay(t, short_y, 1.0, 10.0, DecayModel::algebraic),
                  config_error);
  CHECK_THROWS_AS((void)fit_decay(t, y, 10.0, 1.0, DecayModel::algebraic), config_error);

  // too few samples inside the window
  CHECK_THROWS_AS((void)fit_decay(t, y, 1.0, 3.0, DecayModel::algebraic), numeric_error);

  std::vector<double> bad = y;
  bad[5] = 0.0;
  CHECK_THROWS_AS((void)fit_decay(t, bad, 1.0, 10.0, DecayModel::algebraic),
                  numeric_error);
  bad[5] = -1.0;
  CHECK_THROWS_AS((void)fit_decay(t, bad, 1.0, 10.0, DecayModel::algebraic),
                  numeric_error);
}
