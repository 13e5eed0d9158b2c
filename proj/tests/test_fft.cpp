#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "nemflow/fft.hpp"
#include "nemflow/field_ops.hpp"
#include "nemflow/grid.hpp"
#include "nemflow/oracle.hpp"
#include "nemflow/rng.hpp"

using namespace nemflow;

namespace {

RealField random_field(std::shared_ptr<const SpectralGrid> g, std::uint64_t seed) {
  RealField f(g);
  SplitMix64 rng(seed);
  for (double& v : f.v) v = rng.uniform() - 0.5;
  return f;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

}  // namespace

TEST_CASE("forward transform equals the brute-force DFT on n=8") {
  auto g = make_grid(8, 2.0 * M_PI);
  const RealField f = random_field(g, 101);
  CHECK(max_coeff_diff(forward_transform(f), dft_bruteforce(f)) < 1e-12);
}

TEST_CASE("brute-force DFT also agrees on non-power-of-two sizes") {
  for (int n : {10, 12}) {
    auto g = make_grid(n, 1.5);
    const RealField f = random_field(g, 200 + n);
    CHECK(max_coeff_diff(forward_transform(f), dft_bruteforce(f)) < 1e-12);
  }
}

TEST_CASE("round trip is lossless for radix-2 and bluestein sizes") {
  for (int n : {32, 48}) {
    auto g = make_grid(n, 2.0);
    const RealField f = random_field(g, 300 + n);
    const RealField r = inverse_transform(forward_transform(f));
    double err = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) err = std::max(err, std::abs(f.v[i] - r.v[i]));
    CHECK(err < 1e-11);
  }
}

TEST_CASE("zero mode is the spatial mean") {
  auto g = make_grid(16, 1.0);
  RealField f(g);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = 3.0 + 0.1 * std::sin(2.0 * M_PI * i / f.v.size());
  const SpectralField c = forward_transform(f);
  double mean = 0.0;
  for (double v : f.v) mean += v;
  mean /= double(f.v.size());
  CHECK(std::abs(c.c[0].real() - mean) < 1e-13);
  CHECK(std::abs(c.c[0].imag()) < 1e-13);
}

TEST_CASE("parseval identity connects grid and mode sums") {
  auto g = make_grid(32, 3.0);
  const RealField f = random_field(g, 7);
  double phys = 0.0;
  for (double v : f.v) phys += v * v;
  phys *= g->length * g->length / (double(g->n) * g->n);
  CHECK(std::abs(phys - parseval_energy(forward_transform(f))) / phys < 1e-12);
}

TEST_CASE("parallel and serial 2d transforms are bitwise identical") {
  for (int n : {64, 48}) {
    auto plan = make_plan(n);
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n) * n), b;
    SplitMix64 rng(99);
    for (auto& z : a) z = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    b = a;
    fft2d(*plan, a.data(), -1);
    serialref::fft2d(*plan, b.data(), -1);
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same = same && (a[i] == b[i]);
    CHECK(same);
    fft2d(*plan, a.data(), +1);
    serialref::fft2d(*plan, b.data(), +1);
    same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same = same && (a[i] == b[i]);
    CHECK(same);
  }
}

TEST_CASE("spectral derivative of a trigonometric product is exact") {
  auto g = make_grid(32, 2.0 * M_PI);
  RealField f(g);
  for (int i = 0; i < g->n; ++i) {
    for (int j = 0; j < g->n; ++j) {
      const double x = i * g->dx, y = j * g->dx;
      f.v[g->idx(i, j)] = std::sin(3.0 * x) * std::cos(2.0 * y);
    }
  }
  const auto [gx, gy] = gradient(forward_transform(f));
  const RealField dx = inverse_transform(gx), dy = inverse_transform(gy);
  double err = 0.0;
  for (int i = 0; i < g->n; ++i) {
    for (int j = 0; j < g->n; ++j) {
      const double x = i * g->dx, y = j * g->dx;
      err = std::max(err, std::abs(dx.v[g->idx(i, j)] - 3.0 * std::cos(3.0 * x) * std::cos(2.0 * y)));
      err = std::max(err, std::abs(dy.v[g->idx(i, j)] + 2.0 * std::sin(3.0 * x) * std::sin(2.0 * y)));
    }
  }
  CHECK(err < 1e-11);
}

TEST_CASE("grid construction rejects odd and tiny sizes") {
  CHECK_THROWS(make_grid(7, 1.0));
  CHECK_THROWS(make_grid(6, 1.0));
  CHECK_THROWS(make_grid(16, -1.0));
}
