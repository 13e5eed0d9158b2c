#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nemflow/integrator.hpp"
#include "nemflow/model.hpp"

namespace nemflow {

// Frequency multipliers shared by the weighted-energy checks. phi is the heat
// kernel e^{-|xi|^2 t} and psi = 1 - phi its complement; the polynomial weight
// is E(t) = (1+t)^weight_exponent. The split radius rule selects the
// low/high-frequency cut:
//   balance:         G(t) = sqrt(k / (2 (1+t)))
//   log_shell:       g(t) = 1 / sqrt(omega_bar (e+t) ln(e+t))
//   algebraic_shell: g(t) = 1 / sqrt(2 omega_bar (1+t))
enum class SplitRule { balance, log_shell, algebraic_shell };

struct MultiplierSpec {
  int weight_exponent = 3;
  SplitRule rule = SplitRule::balance;
  double omega_bar = 0.5;

  double radius_at(double t) const;
  double poly_weight(double t) const;        // (1+t)^k
  double poly_weight_rate(double t) const;   // k (1+t)^(k-1)
};

double phi_weight(double xi_sq, double t);  // e^{-xi_sq t}
double psi_weight(double xi_sq, double t);  // 1 - phi

// Relative slack tolerance shared by every inequality verdict.
inline constexpr double kInequalityTol = 1e-6;

struct InequalityEntry {
  std::string label;
  double s = 0.0;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_start = 0.0;  // RHS with all time integrals dropped
  double slack = 0.0;      // rhs - lhs
  double slack_rel = 0.0;  // slack / max(|rhs|, eps)
  bool holds = true;
};

struct InequalityReport {
  std::string name;
  bool holds = true;
  double min_slack_rel = 0.0;
  std::vector<InequalityEntry> entries;

  void push(InequalityEntry e);
};

// Running discrete balance of
//   ||u||^2 + lambda ||grad d||^2
//     + 2 int_0^t (nu ||grad u||^2 + gamma lambda ||lap d + |grad d|^2 d||^2)
// which the continuum dynamics conserve. Residuals are relative to the
// initial energy; integrals are trapezoidal on the sample grid.
struct EnergyLedger {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> viscous_integral;  // int nu ||grad u||^2
  std::vector<double> tension_integral;  // int gamma lambda ||lap d + |grad d|^2 d||^2
  std::vector<double> residual_rel;
  double max_residual_rel = 0.0;
};

EnergyLedger energy_budget(const Trajectory& traj, const Params& par);

// Coercive energy inequality: per sample,
//   energy(t) + omega_bar int_0^t (nu ||grad u||^2 + gamma lambda ||lap d||^2)
//     <= energy(0).
InequalityReport coercive_budget(const Trajectory& traj, const Params& par, double omega_bar);

// Quotient ||grad d||_{L^4}^4 / ||lap d||^2 and the coercivity margin of the
// harmonic tension: the largest m with
//   ||lap d + |grad d|^2 d||^2 >= (m/2) (||lap d||^2 + ||grad d||_{L^4}^4).
// omega_empirical = min(1 - ratio, margin) is the per-state proxy for the
// constant the coercive budget and shell radii consume.
struct RigidityReport {
  double grad_l4_fourth = 0.0;
  double lap_l2_sq = 0.0;
  double ratio = 0.0;
  double coercive_lhs = 0.0;
  double coercive_margin = 0.0;
  double omega_empirical = 0.0;
  bool zero_gradient = false;
  bool hypothesis_ok = true;  // min d2 >= eps0 at this state
};

RigidityReport rigidity_report(const EnergyReport& rep, double min_d2_value, double eps0);
RigidityReport rigidity_report(const FlowState& state, double eps0);

// Parseval split of |u_hat|^2 + lambda |grad d_hat|^2 across |xi| <= radius.
// low + high reproduces the total energy exactly (same summation order as the
// total would use).
std::pair<double, double> frequency_split_energy(const FlowState& state, double radius);

// Which frequency-weighted inequality family to check along a trajectory:
//   highpass_growth:   psi-weighted growth bounds with every right-hand
//                      integrand under an absolute value
//   lowpass_duhamel:   phi-weighted bounds with the retarded heat kernel
//                      e^{-2 nu |xi|^2 (t-tau)} (gamma on the director
//                      channel), whose linear part collapses to an identity
//   weighted_highpass: psi-weighted bounds carrying E(t) = (1+t)^k, with the
//                      linear bracket kept signed
// Each (s, t) pair yields one velocity-channel and one director-channel
// entry. Pairs default to a deterministic selection of snapshot times.
enum class InequalityKind { highpass_growth, lowpass_duhamel, weighted_highpass };

InequalityReport verify_weighted_inequality(const Trajectory& traj, const MultiplierSpec& spec,
                                            InequalityKind which, const Params& par,
                                            std::vector<std::pair<double, double>> pairs = {});

std::vector<std::pair<double, double>> default_pair_times(const Trajectory& traj);

// Per-mode spectral bound along the trajectory: at every retained mode and
// every stored snapshot,
//   |u_hat(xi,t)| + |grad d_hat(xi,t)|
//     <= |u_hat(xi,0)| + |grad d_hat(xi,0)|
//        + (2 max(1, lambda, gamma) |xi| / L^2) int_0^t (||u||^2 + ||grad d||^2).
// The 1/L^2 converts the whole-space L^1 product bound to mean-normalized
// coefficients. One entry per snapshot records its worst mode.
InequalityReport pointwise_fourier_bound(const Trajectory& traj, const Params& par);

// Low-shell energy bound for a scalar field: the retained-mode sum of
// L^2 |f_hat|^2 over |xi| <= g against
//   (2 pi)^(2 - 4/p) ||f||_{L^p}^2 (pi g^2)^(2/p - 1),
// the Hausdorff-Young + Hoelder chain made explicit for mean-normalized
// coefficients. Requires 1 <= p < 2.
InequalityReport shell_energy_bound(const SpectralField& f, double g, double p);

struct SplitTraceRow {
  double t = 0.0;
  double radius = 0.0;
  double total = 0.0;
  double low = 0.0;
  double high = 0.0;
  double weighted_poly = 0.0;  // (1+t) * total
  double weighted_log = 0.0;   // ln(e+t)^2 * total
};

// Frequency-split decay series over the stored snapshots, cut at
// spec.radius_at(t).
std::vector<SplitTraceRow> splitting_decay_trace(const Trajectory& traj,
                                                 const MultiplierSpec& spec);

}  // namespace nemflow
