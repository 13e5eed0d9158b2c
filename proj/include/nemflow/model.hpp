#pragma once

#include <array>
#include <memory>

#include "nemflow/field_ops.hpp"
#include "nemflow/grid.hpp"

namespace nemflow {

// Coefficients of the coupled system
//   u_t - nu lap u + (u.grad)u + grad P = -lambda div(grad d (.) grad d)
//   d_t + (u.grad)d = gamma (lap d + |grad d|^2 d),   div u = 0,  |d| = 1.
struct Params {
  double nu = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
};

// angle: d = (cos theta, sin theta); the constraint is exact and the director
//        equation reduces to theta_t + u.grad theta = gamma lap theta.
// vec:   d evolved componentwise with per-step renormalization; kept as a
//        cross-check of the chart.
enum class DirectorMode { angle, vec };

// Spectral state on one grid. Invariants: u is divergence-free, all spectra
// are dealias-truncated, and coefficients are conjugate-symmetric (real
// fields).
struct FlowState {
  double t = 0.0;
  DirectorMode mode = DirectorMode::angle;
  Params params;
  std::shared_ptr<const SpectralGrid> grid;
  SpectralField u1, u2;
  SpectralField theta;   // angle mode
  SpectralField d1, d2;  // vec mode
};

// Scalar energy functionals of one state. All entries are raw norms; the
// dissipation coefficients (2nu, 2 gamma lambda) belong to the budget, not
// here.
struct EnergyReport {
  double kinetic = 0.0;       // ||u||^2
  double elastic = 0.0;       // ||grad d||^2
  double total = 0.0;         // kinetic + lambda * elastic
  double viscous = 0.0;       // ||grad u||^2
  double tension_sq = 0.0;    // ||lap d + |grad d|^2 d||^2
  double lap_d_sq = 0.0;      // ||lap d||^2
  double grad_d_l4_4 = 0.0;   // ||grad d||_{L^4}^4
};

// Largest |u| over grid points (2 inverse transforms).
double velocity_linf(const FlowState& s);

// Largest | |d|-1 | over grid points; identically ~1e-16 in angle mode.
double unit_constraint_error(const FlowState& s);

// Smallest d_2 over grid points (the half-circle hypothesis quantity).
double min_d2(const FlowState& s);

// Spectral director components (transform of (cos theta, sin theta) in angle
// mode, the state fields in vec mode), dealias-truncated.
std::array<SpectralField, 2> director_from_angle(const FlowState& s);

// grad d (.) grad d entries (s11, s12, s22), dealiased spectra.
std::array<SpectralField, 3> elastic_stress(const FlowState& s);

// Nonlinear tendencies with the stiff diffusion excluded (the integrator
// applies diffusion exactly through integrating factors):
//   velocity: -P div(u x u) - lambda P div(grad d (.) grad d)
//   director: -(u.grad)theta            (angle mode)
//             -(u.grad)d + gamma |grad d|^2 d  (vec mode)
// All products are formed in physical space and dealias-truncated; the
// velocity tendency is Leray-projected. u_linf is reported as a byproduct for
// CFL control.
struct Tendencies {
  SpectralField u1, u2;
  SpectralField theta;
  SpectralField d1, d2;
  double u_linf = 0.0;
};
Tendencies nonlinear_rhs(const FlowState& s);

// Velocity tendency alone (diffusion excluded), as a pair.
std::pair<SpectralField, SpectralField> velocity_rhs(const FlowState& s);

// Director tendency alone (diffusion excluded). Angle mode returns the theta
// tendency; vec mode the d1 component is .first, d2 .second.
std::pair<SpectralField, SpectralField> director_rhs(const FlowState& s);

// Pressure recovered from -lap P = div div (u x u + lambda grad d (.) grad d),
// zero-mean.
SpectralField compute_pressure(const FlowState& s);

EnergyReport energy_report(const FlowState& s);

// Largest per-mode |xi . u_hat|; zero to roundoff on Leray-projected states.
double divergence_linf(const FlowState& s);

// True if all spectral coefficients are finite.
bool all_finite(const FlowState& s);

}  // namespace nemflow
