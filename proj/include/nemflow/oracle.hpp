#pragma once

#include "nemflow/grid.hpp"
#include "nemflow/model.hpp"

namespace nemflow {

// Deliberately slow, independent references used to validate the fast paths.
// Shipped in the library (not test-only) so the CLI selftest can run them.

// Direct O(n^4) double-sum DFT with the same mean-normalized convention as
// forward_transform. Refuses n > 16.
SpectralField dft_bruteforce(const RealField& f);

// Closed-form continuum heat-decay integral
//   integral_{R^2} |xi|^{2s} e^{-2(1+t)|xi|^2} d xi = pi Gamma(s+1) / (2(1+t))^{s+1},
// the calibration target for the pure-diffusion decay exponent s+1.
// Requires s > -1.
double heat_energy_exact(double s, double t);

// Exact Taylor-Green solution u = A e^{-2 nu t} (sin x cos y, -cos x sin y) on
// the 2 pi box with constant director theta = pi/2, as a spectral state.
FlowState taylor_green_exact(std::shared_ptr<const SpectralGrid> grid, double amplitude,
                             double nu, double t);

}  // namespace nemflow
