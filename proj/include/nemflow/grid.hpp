#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace nemflow {

struct FftPlan;

// Immutable description of the periodic box [0,L)^2 sampled on an n x n grid.
// Spectral data is stored full-size in FFT index order: along each axis the
// integer wavenumbers run 0, 1, ..., n/2-1, -n/2, ..., -1 and the physical
// wavevector is xi = 2*pi*k/L. The dealias mask keeps |k| < n/3 per axis
// (two-thirds rule), which makes grid products of retained fields alias-free
// for quadratic terms.
struct SpectralGrid {
  int n = 0;
  double length = 0.0;
  double dx = 0.0;

  std::vector<int> kint;      // integer wavenumber per index
  std::vector<double> xi;     // 2*pi*kint/L per index
  std::vector<double> dxi;    // derivative multiplier: xi with the Nyquist zeroed
  std::vector<std::uint8_t> keep1d;  // dealias keep flag per index

  std::shared_ptr<const FftPlan> plan;

  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n + j; }
  bool keep(int i, int j) const { return keep1d[i] && keep1d[j]; }
  double xi_sq(int i, int j) const { return xi[i] * xi[i] + xi[j] * xi[j]; }
};

// n must be even and >= 8 (odd grids have no representable Nyquist convention
// and the dealias box degenerates below 8).
std::shared_ptr<const SpectralGrid> make_grid(int n, double length);

// Physical-space scalar samples, row-major, value at x_ij = (i,j)*dx.
struct RealField {
  std::shared_ptr<const SpectralGrid> grid;
  std::vector<double> v;

  RealField() = default;
  explicit RealField(std::shared_ptr<const SpectralGrid> g)
      : grid(std::move(g)), v(grid->size(), 0.0) {}
};

// Spectral coefficients in the mean-normalized convention:
//   c(k) = (1/n^2) * sum_x f(x) e^{-i xi . x},
// so c(0,0) is the spatial mean and parseval_energy below equals the physical
// L^2 norm squared. The continuum 1/(2pi) convention used in analysis is
// c_cont = (L^2 / 2pi) * c(k); only diagnostics that quote continuum constants
// apply that factor, and they document it where they do.
struct SpectralField {
  std::shared_ptr<const SpectralGrid> grid;
  std::vector<std::complex<double>> c;

  SpectralField() = default;
  explicit SpectralField(std::shared_ptr<const SpectralGrid> g)
      : grid(std::move(g)), c(grid->size(), std::complex<double>(0.0, 0.0)) {}
};

}  // namespace nemflow
