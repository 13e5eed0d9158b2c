#include "nemflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nemflow/errors.hpp"
#include "nemflow/initdata.hpp"

namespace nemflow {

namespace {

// Per-mode integrating factors for one step size.
struct ExpTables {
  double dt = -1.0;
  double nu = 0.0, gamma = 0.0;
  std::vector<double> eu, ed;

  void rebuild(const SpectralGrid& g, const Params& p, double step_dt) {
    if (step_dt == dt && p.nu == nu && p.gamma == gamma && !eu.empty()) return;
    dt = step_dt;
    nu = p.nu;
    gamma = p.gamma;
    const int n = g.n;
    eu.assign(g.size(), 0.0);
    ed.assign(g.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x_sq = g.xi_sq(i, j);
        const std::size_t q = g.idx(i, j);
        eu[q] = std::exp(-nu * x_sq * dt);
        ed[q] = std::exp(-gamma * x_sq * dt);
      }
  }
};

void axpy_scaled(SpectralField& y, const std::vector<double>& e, const SpectralField& k,
                 double a) {
  // y = e .* y + a * k  (k unscaled)   -- used for the corrector
  const std::size_t sz = y.c.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p)
    y.c[p] = e[p] * y.c[p] + a * k.c[p];
}

void predictor(SpectralField& y, const std::vector<double>& e, const SpectralField& k, double dt) {
  // y = e .* (y + dt k)
  const std::size_t sz = y.c.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p)
    y.c[p] = e[p] * (y.c[p] + dt * k.c[p]);
}

FlowState step_with(const FlowState& s, double dt, bool linear_only, ExpTables& tab,
                    double* u_linf_seen = nullptr) {
  if (!(dt > 0.0)) throw config_error("step size must be positive");
  tab.rebuild(*s.grid, s.params, dt);
  FlowState out = s;
  out.t = s.t + dt;

  if (linear_only) {
    const std::size_t sz = out.u1.c.size();
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(sz); ++p) {
      out.u1.c[p] *= tab.eu[p];
      out.u2.c[p] *= tab.eu[p];
    }
    if (s.mode == DirectorMode::angle) {
#pragma omp parallel for schedule(static)
      for (long long p = 0; p < static_cast<long long>(sz); ++p) out.theta.c[p] *= tab.ed[p];
    } else {
#pragma omp parallel for schedule(static)
      for (long long p = 0; p < static_cast<long long>(sz); ++p) {
        out.d1.c[p] *= tab.ed[p];
        out.d2.c[p] *= tab.ed[p];
      }
    }
    return out;
  }

  Tendencies k1 = nonlinear_rhs(s);
  if (u_linf_seen) *u_linf_seen = k1.u_linf;

  // Predictor: y* = E (y + dt k1)
  predictor(out.u1, tab.eu, k1.u1, dt);
  predictor(out.u2, tab.eu, k1.u2, dt);
  if (s.mode == DirectorMode::angle) {
    predictor(out.theta, tab.ed, k1.theta, dt);
  } else {
    predictor(out.d1, tab.ed, k1.d1, dt);
    predictor(out.d2, tab.ed, k1.d2, dt);
  }
  Tendencies k2 = nonlinear_rhs(out);

  // Corrector: y+ = E y + dt/2 (E k1 + k2)
  const double h = 0.5 * dt;
  auto corrector = [&](SpectralField& y, const SpectralField& y0, const std::vector<double>& e,
                       const SpectralField& a, const SpectralField& b) {
    const std::size_t sz = y.c.size();
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(sz); ++p)
      y.c[p] = e[p] * (y0.c[p] + h * a.c[p]) + h * b.c[p];
  };
  corrector(out.u1, s.u1, tab.eu, k1.u1, k2.u1);
  corrector(out.u2, s.u2, tab.eu, k1.u2, k2.u2);
  if (s.mode == DirectorMode::angle) {
    corrector(out.theta, s.theta, tab.ed, k1.theta, k2.theta);
  } else {
    corrector(out.d1, s.d1, tab.ed, k1.d1, k2.d1);
    corrector(out.d2, s.d2, tab.ed, k1.d2, k2.d2);
    out = renormalize_director(out);
  }

  if (!all_finite(out))
    throw blowup_error("non-finite state after step to t = " + std::to_string(out.t), s.t);
  return out;
}

}  // namespace

FlowState step(const FlowState& s, double dt, bool linear_only) {
  ExpTables tab;
  return step_with(s, dt, linear_only, tab);
}

double stable_dt(const FlowState& s, double cfl) {
  const double u = std::max(velocity_linf(s), 1e-8);
  return cfl * s.grid->dx / u;
}

FlowState renormalize_director(const FlowState& s) {
  if (s.mode != DirectorMode::vec) return s;
  RealField d1 = inverse_transform(s.d1);
  RealField d2 = inverse_transform(s.d2);
  const std::size_t sz = d1.v.size();
  for (std::size_t p = 0; p < sz; ++p) {
    const double m = std::sqrt(d1.v[p] * d1.v[p] + d2.v[p] * d2.v[p]);
    if (m < 0.5) throw numeric_error("director degenerated: |d| < 0.5 before renormalization");
    d1.v[p] /= m;
    d2.v[p] /= m;
  }
  FlowState out = s;
  out.d1 = dealias(forward_transform(d1));
  out.d2 = dealias(forward_transform(d2));
  return out;
}

Trajectory evolve(const FlowState& s0, const StepPolicy& policy, const SampleSink& sink,
                  const std::function<void(Trajectory&&)>& on_partial) {
  if (!(policy.t_end > s0.t)) throw config_error("t_end must exceed the initial time");
  if (!(policy.sample_interval > 0.0)) throw config_error("sample_interval must be positive");
  if (policy.dt < 0.0 || policy.max_dt <= 0.0 || policy.cfl <= 0.0)
    throw config_error("step policy values must be positive");

  Trajectory traj;
  FlowState state = s0;
  if (state.mode != policy.mode)
    state = (policy.mode == DirectorMode::vec) ? to_vector_mode(state) : state;
  if (state.mode != policy.mode) throw config_error("cannot convert vector state to angle mode");

  ExpTables tab;
  auto record = [&](const FlowState& st) {
    Sample smp;
    smp.t = st.t;
    smp.report = energy_report(st);
    smp.min_d2 = min_d2(st);
    smp.u_linf = velocity_linf(st);
    traj.samples.push_back(smp);
    if (sink) sink(st, smp);
  };

  record(state);
  const bool snapshots = policy.snapshot_interval > 0.0;
  if (snapshots) traj.snapshots.push_back(state);

  long long next_sample = 1, next_snap = 1;
  double u_linf_last = velocity_linf(state);
  const double t0 = state.t;
  long long steps = 0;
  const long long max_steps =
      4 * static_cast<long long>((policy.t_end - t0) /
                                 std::max(1e-12, std::min(policy.sample_interval,
                                                          policy.dt > 0 ? policy.dt : policy.max_dt))) +
      1000000;

  try {
    while (state.t < policy.t_end - 1e-12 * policy.t_end) {
      const double t_sample = t0 + next_sample * policy.sample_interval;
      const double t_snap = snapshots ? t0 + next_snap * policy.snapshot_interval : policy.t_end;
      const double boundary = std::min({t_sample, t_snap, policy.t_end});

      double base_dt;
      if (policy.dt > 0.0) {
        base_dt = policy.dt;
      } else if (policy.linear_only) {
        base_dt = policy.max_dt;
      } else {
        base_dt = std::min(policy.cfl * state.grid->dx / std::max(u_linf_last, 1e-8), policy.max_dt);
      }
      const double dt = std::min(base_dt, boundary - state.t);
      const bool lands = (state.t + dt >= boundary - 1e-9 * std::max(1.0, boundary));

      state = step_with(state, dt, policy.linear_only, tab,
                        policy.dt == 0.0 && !policy.linear_only ? &u_linf_last : nullptr);
      if (lands) state.t = boundary;  // keep boundary times exact doubles
      traj.steps = ++steps;
      if (steps > max_steps) throw numeric_error("step budget exhausted; dt collapsed");

      if (lands) {
        const double tol = 1e-12 * std::max(1.0, state.t);
        bool sampled = false;
        if (state.t >= t_sample - tol) {
          ++next_sample;
          sampled = true;
        }
        if (snapshots && state.t >= t_snap - tol) {
          traj.snapshots.push_back(state);
          ++next_snap;
        }
        if (sampled || state.t >= policy.t_end - 1e-12 * policy.t_end) record(state);
      }
    }
  } catch (const blowup_error&) {
    if (on_partial) on_partial(std::move(traj));
    throw;
  }
  return traj;
}

}  // namespace nemflow
