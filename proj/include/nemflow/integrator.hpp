#pragma once

#include <functional>
#include <vector>

#include "nemflow/model.hpp"

namespace nemflow {

// Time-stepping policy. dt = 0 selects adaptive advective CFL steps
// cfl*dx/max(|u|_inf, 1e-8) capped at max_dt; diffusion never constrains the
// step because it is integrated exactly through per-mode integrating
// factors. Samples land exactly on multiples of sample_interval (the stepper
// shortens steps to hit them); snapshots (full spectral states) are retained
// at the coarser snapshot_interval when it is positive. linear_only drops the
// nonlinear tendency entirely, leaving the exact per-mode heat evolution.
struct StepPolicy {
  DirectorMode mode = DirectorMode::angle;
  double dt = 0.0;
  double cfl = 0.4;
  double max_dt = 0.1;
  double t_end = 1.0;
  double sample_interval = 0.1;
  double snapshot_interval = 0.0;
  bool linear_only = false;
};

struct Sample {
  double t = 0.0;
  EnergyReport report;
  double min_d2 = 0.0;
  double u_linf = 0.0;
};

// Samples at sample_interval cadence plus retained spectral snapshots. The
// t=0 sample/snapshot and the t_end ones are always present.
struct Trajectory {
  std::vector<Sample> samples;
  std::vector<FlowState> snapshots;
  long long steps = 0;
};

using SampleSink = std::function<void(const FlowState&, const Sample&)>;

// One integrating-factor Heun step (Lawson RK2): exact exponential for the
// stiff diffusion, second order for the nonlinear terms, and exact on linear
// trajectories:
//   k1 = N(y),  y* = E(y + dt k1),  y+ = E y + dt/2 (E k1 + N(y*)),
// with E = diag(e^{-nu |xi|^2 dt}) on u and e^{-gamma |xi|^2 dt} on the
// director. Vector mode renormalizes d pointwise afterwards. Throws
// blowup_error when the step produces non-finite coefficients.
FlowState step(const FlowState& s, double dt, bool linear_only = false);

// cfl * dx / max(|u|_inf, 1e-8), uncapped.
double stable_dt(const FlowState& s, double cfl);

// Pointwise d/|d| in physical space, re-transformed and dealiased.
// Throws numeric_error if |d| < 0.5 anywhere (chart degeneracy).
FlowState renormalize_director(const FlowState& s);

// March to policy.t_end from s. The sink, when set, observes every sample in
// time order (including t=0). On blow-up, rethrows blowup_error after the
// partial trajectory has been handed to on_partial (if provided).
Trajectory evolve(const FlowState& s, const StepPolicy& policy, const SampleSink& sink = {},
                  const std::function<void(Trajectory&&)>& on_partial = {});

}  // namespace nemflow
