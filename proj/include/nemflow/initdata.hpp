#pragma once

#include <cstdint>

#include "nemflow/model.hpp"

namespace nemflow {

enum class InitFamily { taylor_green, spectral_slope, vortex_pair };

// Initial-data recipe. slope is the low-frequency exponent of |u_hat(xi)|;
// the continuum bridge is s = 2/p - 2, so the linear squared-energy decay
// exponent is s+1. eps0 is the director floor d_2 >= eps0 of the half-circle
// hypothesis, guaranteed through the amplitude guard
// director_amplitude < pi/2 - arcsin(eps0).
struct InitSpec {
  InitFamily family = InitFamily::spectral_slope;
  double amplitude = 1.0;
  double slope = 0.0;          // in (-1, 2]
  std::uint64_t seed = 1;
  double eps0 = 0.1;           // in (0, 1)
  double director_amplitude = 0.0;
  // Optional renormalization: rescale the velocity so kinetic(0) equals
  // kinetic_target, and the director perturbation so elastic(0) equals
  // elastic_target. Zero disables. Both rescalings are exact (the energies
  // are quadratic in the respective amplitudes).
  double kinetic_target = 0.0;
  double elastic_target = 0.0;

  void validate() const;  // throws config_error on any violated range
};

// u = amplitude (sin x cos y, -cos x sin y) sampled physically and
// transformed; theta = pi/2. Requires the 2 pi box. Constructed by a
// different route than oracle::taylor_green_exact on purpose.
FlowState taylor_green(std::shared_ptr<const SpectralGrid> grid, double amplitude);

// Divergence-free random field with |u_hat(xi)| = amplitude |xi|^s e^{-|xi|^2}
// exactly on every retained mode (phases seeded, conjugate-symmetric, zero
// mean; built on a unit solenoidal frame so the Leray projection is the
// identity on it). Energy equals the analytic shell sum
// L^2 sum_k amplitude^2 |xi|^{2s} e^{-2|xi|^2}.
std::pair<SpectralField, SpectralField> spectral_slope_field(
    std::shared_ptr<const SpectralGrid> grid, double amplitude, double slope,
    std::uint64_t seed);

// theta = pi/2 + director_amplitude * P with P a seeded band-limited
// (0 < |k| <= n/8) zero-mean perturbation normalized to unit sup norm, so
// min d_2 >= cos(director_amplitude) >= eps0 by the guard.
SpectralField director_bump(std::shared_ptr<const SpectralGrid> grid, double eps0,
                            double director_amplitude, std::uint64_t seed);

// Counter-rotating Gaussian vortex dipole (periodized stream function),
// divergence-free by construction.
std::pair<SpectralField, SpectralField> vortex_pair(std::shared_ptr<const SpectralGrid> grid,
                                                    double amplitude);

// Grid quadrature (sum |f|^p dx^2)^{1/p}; p >= 1.
double lp_norm_estimate(const RealField& f, double p);

// Assemble the full initial state for a spec (velocity family + director
// bump, angle mode; call to_vector_mode afterwards if needed).
FlowState make_initial_state(std::shared_ptr<const SpectralGrid> grid, const InitSpec& spec,
                             const Params& params);

// Convert an angle-mode state to vector mode (transforms of cos/sin theta).
FlowState to_vector_mode(const FlowState& s);

}  // namespace nemflow
