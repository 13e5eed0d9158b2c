#pragma once

#include <utility>

#include "nemflow/grid.hpp"

namespace nemflow {

// c(k) = (1/n^2) sum_x f(x) e^{-i xi.x}; c(0,0) is the spatial mean.
SpectralField forward_transform(const RealField& f);

// Inverse of forward_transform. Throws symmetry_error if the coefficients are
// not conjugate-symmetric to within 1e-10 relative (measured as the imaginary
// residue of the reconstruction, which is exactly the asymmetric part's
// contribution).
RealField inverse_transform(const SpectralField& f);

// (i xi_1 f, i xi_2 f) with the Nyquist derivative multiplier zeroed (the
// Nyquist mode has no consistent odd derivative on an even grid).
std::pair<SpectralField, SpectralField> gradient(const SpectralField& f);

// -|xi|^2 f.
SpectralField laplacian(const SpectralField& f);

// Zero every mode with |k_i| >= n/3 on either axis (two-thirds rule).
void dealias_inplace(SpectralField& f);
SpectralField dealias(SpectralField f);

// Per-mode projection onto divergence-free fields: v - xi (xi.v)/|xi|^2, with
// the (0,0) mode passed through. Idempotent; annihilates gradients.
void leray_project(SpectralField& v1, SpectralField& v2);

// L^2 norm squared of the physical field: L^2 * sum_k |c(k)|^2 (Parseval for
// the mean-normalized convention). Deterministic summation order.
double parseval_energy(const SpectralField& f);

// L^2 * sum_k |xi|^2 |c(k)|^2 = ||grad f||^2 for scalar f.
double gradient_energy(const SpectralField& f);

// L^2 * sum_k |xi|^4 |c(k)|^2 = ||lap f||^2 for scalar f.
double laplacian_energy(const SpectralField& f);

// Largest |v| over grid points.
double linf_norm(const RealField& f);

// Grid quadrature sum_x f(x) g(x) dx^2.
double inner_l2(const RealField& a, const RealField& b);

}  // namespace nemflow
