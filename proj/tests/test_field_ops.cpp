#include <doctest.h>

#include <cmath>
#include <complex>

#include "nemflow/field_ops.hpp"
#include "nemflow/grid.hpp"
#include "nemflow/rng.hpp"

using namespace nemflow;

namespace {

SpectralField random_spectrum(std::shared_ptr<const SpectralGrid> g, std::uint64_t seed) {
  RealField f(g);
  SplitMix64 rng(seed);
  for (double& v : f.v) v = rng.uniform() - 0.5;
  SpectralField c = forward_transform(f);
  dealias_inplace(c);
  return c;
}

}  // namespace

TEST_CASE("dealias mask keeps exactly |k| <= 2 on n=8") {
  auto g = make_grid(8, 1.0);
  SpectralField f(g);
  for (auto& z : f.c) z = 1.0;
  dealias_inplace(f);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const bool kept = std::abs(g->kint[i]) <= 2 && std::abs(g->kint[j]) <= 2;
      CHECK(std::abs(f.c[g->idx(i, j)]) == (kept ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("leray projection annihilates gradients") {
  auto g = make_grid(32, 2.0 * M_PI);
  const SpectralField phi = random_spectrum(g, 11);
  auto [v1, v2] = gradient(phi);
  leray_project(v1, v2);
  double m = 0.0;
  for (std::size_t i = 0; i < v1.c.size(); ++i) {
    m = std::max(m, std::abs(v1.c[i]));
    m = std::max(m, std::abs(v2.c[i]));
  }
  CHECK(m < 1e-13);
}

TEST_CASE("leray projection fixes solenoidal fields and is idempotent") {
  auto g = make_grid(32, 4.0);
  const SpectralField psi = random_spectrum(g, 13);
  // perpendicular gradient: (-d2 psi, d1 psi) is exactly divergence-free
  auto [g1, g2] = gradient(psi);
  SpectralField v1 = g2, v2 = g1;
  for (auto& z : v1.c) z = -z;
  SpectralField w1 = v1, w2 = v2;
  leray_project(w1, w2);
  double m = 0.0;
  for (std::size_t i = 0; i < v1.c.size(); ++i) {
    m = std::max(m, std::abs(w1.c[i] - v1.c[i]));
    m = std::max(m, std::abs(w2.c[i] - v2.c[i]));
  }
  CHECK(m < 1e-13);
}

TEST_CASE("leray projection passes the mean flow through") {
  auto g = make_grid(16, 1.0);
  SpectralField v1(g), v2(g);
  v1.c[0] = 0.7;
  v2.c[0] = -0.2;
  leray_project(v1, v2);
  CHECK(v1.c[0] == std::complex<double>(0.7, 0.0));
  CHECK(v2.c[0] == std::complex<double>(-0.2, 0.0));
}

TEST_CASE("gradient and laplacian energies match finite-sum identities") {
  auto g = make_grid(32, 5.0);
  const SpectralField f = random_spectrum(g, 17);
  double ge = 0.0, le = 0.0;
  for (int i = 0; i < g->n; ++i) {
    for (int j = 0; j < g->n; ++j) {
      const double x2 = g->xi_sq(i, j);
      const double a2 = std::norm(f.c[g->idx(i, j)]);
      ge += x2 * a2;
      le += x2 * x2 * a2;
    }
  }
  const double L2 = g->length * g->length;
  CHECK(gradient_energy(f) == doctest::Approx(L2 * ge).epsilon(1e-13));
  CHECK(laplacian_energy(f) == doctest::Approx(L2 * le).epsilon(1e-13));
}

TEST_CASE("inverse transform rejects asymmetric coefficients") {
  auto g = make_grid(16, 1.0);
  SpectralField f(g);
  f.c[g->idx(1, 0)] = {0.3, 0.1};  // no conjugate partner
  CHECK_THROWS(inverse_transform(f));
}

TEST_CASE("inner product matches the analytic integral") {
  auto g = make_grid(64, 2.0 * M_PI);
  RealField a(g), b(g);
  for (int i = 0; i < g->n; ++i) {
    for (int j = 0; j < g->n; ++j) {
      const double x = i * g->dx, y = j * g->dx;
      a.v[g->idx(i, j)] = std::sin(x);
      b.v[g->idx(i, j)] = std::sin(x) * std::cos(y) + std::sin(x);
    }
  }
  // int sin^2 x (1 + cos y) over the box = 2 pi^2
  CHECK(inner_l2(a, b) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
}
