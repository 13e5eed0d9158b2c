#include "nemflow/field_ops.hpp"

#include <cmath>

#include "nemflow/errors.hpp"
#include "nemflow/fft.hpp"

namespace nemflow {

SpectralField forward_transform(const RealField& f) {
  const auto& g = *f.grid;
  SpectralField out(f.grid);
  const std::size_t sz = g.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p)
    out.c[p] = std::complex<double>(f.v[p], 0.0);
  fft2d(*g.plan, out.c.data(), -1);
  const double scale = 1.0 / (static_cast<double>(g.n) * g.n);
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p) out.c[p] *= scale;
  return out;
}

RealField inverse_transform(const SpectralField& f) {
  const auto& g = *f.grid;
  std::vector<std::complex<double>> work(f.c);
  fft2d(*g.plan, work.data(), +1);
  double re_max = 0.0, im_max = 0.0;
  for (const auto& z : work) {
    re_max = std::max(re_max, std::abs(z.real()));
    im_max = std::max(im_max, std::abs(z.imag()));
  }
  if (im_max > 1e-10 * std::max(1.0, re_max))
    throw symmetry_error("spectrum is not conjugate-symmetric: imaginary residue " +
                         std::to_string(im_max));
  RealField out(f.grid);
  const std::size_t sz = g.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p) out.v[p] = work[p].real();
  return out;
}

std::pair<SpectralField, SpectralField> gradient(const SpectralField& f) {
  const auto& g = *f.grid;
  SpectralField fx(f.grid), fy(f.grid);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const std::complex<double> ixi1(0.0, g.dxi[i]);
    for (int j = 0; j < n; ++j) {
      const std::size_t p = g.idx(i, j);
      fx.c[p] = ixi1 * f.c[p];
      fy.c[p] = std::complex<double>(0.0, g.dxi[j]) * f.c[p];
    }
  }
  return {std::move(fx), std::move(fy)};
}

SpectralField laplacian(const SpectralField& f) {
  const auto& g = *f.grid;
  SpectralField out(f.grid);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t p = g.idx(i, j);
      out.c[p] = -g.xi_sq(i, j) * f.c[p];
    }
  return out;
}

void dealias_inplace(SpectralField& f) {
  const auto& g = *f.grid;
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!g.keep(i, j)) f.c[g.idx(i, j)] = std::complex<double>(0.0, 0.0);
}

SpectralField dealias(SpectralField f) {
  dealias_inplace(f);
  return f;
}

void leray_project(SpectralField& v1, SpectralField& v2) {
  const auto& g = *v1.grid;
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double x1 = g.xi[i];
    for (int j = 0; j < n; ++j) {
      const double x2 = g.xi[j];
      const double x_sq = x1 * x1 + x2 * x2;
      if (x_sq == 0.0) continue;
      const std::size_t p = g.idx(i, j);
      const std::complex<double> div = (x1 * v1.c[p] + x2 * v2.c[p]) / x_sq;
      v1.c[p] -= x1 * div;
      v2.c[p] -= x2 * div;
    }
  }
}

double parseval_energy(const SpectralField& f) {
  const auto& g = *f.grid;
  double acc = 0.0;
  for (const auto& z : f.c) acc += z.real() * z.real() + z.imag() * z.imag();
  return g.length * g.length * acc;
}

double gradient_energy(const SpectralField& f) {
  const auto& g = *f.grid;
  const int n = g.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t p = g.idx(i, j);
      acc += g.xi_sq(i, j) * std::norm(f.c[p]);
    }
  return g.length * g.length * acc;
}

double laplacian_energy(const SpectralField& f) {
  const auto& g = *f.grid;
  const int n = g.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t p = g.idx(i, j);
      const double x_sq = g.xi_sq(i, j);
      acc += x_sq * x_sq * std::norm(f.c[p]);
    }
  return g.length * g.length * acc;
}

double linf_norm(const RealField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double inner_l2(const RealField& a, const RealField& b) {
  double acc = 0.0;
  const std::size_t sz = a.v.size();
  for (std::size_t p = 0; p < sz; ++p) acc += a.v[p] * b.v[p];
  return acc * a.grid->dx * a.grid->dx;
}

}  // namespace nemflow
