#include <doctest.h>

#include <cmath>

#include "nemflow/errors.hpp"
#include "nemflow/field_ops.hpp"
#include "nemflow/grid.hpp"
#include "nemflow/model.hpp"
#include "nemflow/oracle.hpp"

using namespace nemflow;

TEST_CASE("heat kernel energy closed form at integer slopes") {
  // s = 0: pi Gamma(1) / (2(1+t)) = pi / (2(1+t))
  CHECK(heat_energy_exact(0.0, 0.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
  CHECK(heat_energy_exact(0.0, 3.0) == doctest::Approx(M_PI / 8.0).epsilon(1e-14));
  // s = 1: pi Gamma(2) / (2(1+t))^2
  CHECK(heat_energy_exact(1.0, 1.0) == doctest::Approx(M_PI / 16.0).epsilon(1e-14));
}

TEST_CASE("heat kernel energy decays at exponent s+1") {
  for (double s : {0.0, 0.5, 1.0, 1.7}) {
    const double t = 9.0;
    const double ratio = heat_energy_exact(s, 0.0) / heat_energy_exact(s, t);
    CHECK(ratio == doctest::Approx(std::pow(1.0 + t, s + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("heat kernel energy rejects non-integrable slopes") {
  CHECK_THROWS_AS((void)heat_energy_exact(-1.0, 0.0), config_error);
  CHECK_THROWS_AS((void)heat_energy_exact(-2.5, 1.0), config_error);
}

TEST_CASE("cellular flow oracle is divergence free with the expected energy") {
  auto g = make_grid(64, 2.0 * M_PI);
  const double A = 0.8, nu = 0.3, t = 0.4;
  FlowState s = taylor_green_exact(g, A, nu, t);
  CHECK(divergence_linf(s) < 1e-12);
  // kinetic energy of A e^{-2 nu t}(sin x cos y, -cos x sin y) is 2 pi^2 A^2 e^{-4 nu t}
  EnergyReport r = energy_report(s);
  const double expect = 2.0 * M_PI * M_PI * A * A * std::exp(-4.0 * nu * t);
  CHECK(r.kinetic == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("brute force transform refuses large grids") {
  auto g = make_grid(32, 1.0);
  RealField f(g);
  CHECK_THROWS_AS((void)dft_bruteforce(f), config_error);
}
