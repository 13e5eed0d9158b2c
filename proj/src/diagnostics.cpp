#include "nemflow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <sstream>

#include "nemflow/errors.hpp"
#include "nemflow/field_ops.hpp"
#include "nemflow/initdata.hpp"

namespace nemflow {

namespace {

constexpr double kE = 2.718281828459045235;

std::string fmt_time(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Trapezoid weights for the sub-interval [t[lo], t[hi]] of a strictly
// increasing time grid; every index outside [lo, hi] gets weight zero.
std::vector<double> trapezoid_weights(const std::vector<double>& t, std::size_t lo,
                                      std::size_t hi) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t m = lo; m < hi; ++m) {
    const double h = 0.5 * (t[m + 1] - t[m]);
    w[m] += h;
    w[m + 1] += h;
  }
  return w;
}

// Per-mode quadratic densities of one snapshot, everything the weighted
// inequalities contract against their multipliers. Densities are plain
// coefficient sums; the L^2 Parseval factor is applied by the callers.
struct SnapshotSpectra {
  std::vector<double> eu;      // |u_hat|^2
  std::vector<double> ed;      // |grad d_hat|^2 = |xi|^2 |d_hat|^2
  std::vector<double> qu_adv;  // Re (i xi . (u ox u)^) . conj(u_hat)
  std::vector<double> qu_el;   // Re (i xi . (grad d (.) grad d)^) . conj(u_hat)
  std::vector<double> qd_adv;  // |xi|^2 Re (u . grad d)^ . conj(d_hat)
  std::vector<double> qd_cub;  // |xi|^2 Re (|grad d|^2 d)^ . conj(d_hat)
};

SnapshotSpectra snapshot_spectra(const FlowState& s) {
  const SpectralGrid& g = *s.grid;
  const std::size_t nn = g.size();

  const RealField u1p = inverse_transform(s.u1);
  const RealField u2p = inverse_transform(s.u2);

  const std::array<SpectralField, 2> dh = director_from_angle(s);
  const RealField d1p = inverse_transform(dh[0]);
  const RealField d2p = inverse_transform(dh[1]);

  // g_im = d_i d_m (partial i of component m)
  auto [g11, g21] = gradient(dh[0]);
  auto [g12, g22] = gradient(dh[1]);
  const RealField p11 = inverse_transform(g11);
  const RealField p21 = inverse_transform(g21);
  const RealField p12 = inverse_transform(g12);
  const RealField p22 = inverse_transform(g22);

  RealField w(s.grid);
  auto product_spectrum = [&](const RealField& a, const RealField& b, const RealField* c1 = nullptr,
                              const RealField* c2 = nullptr, const RealField* d1 = nullptr,
                              const RealField* d2 = nullptr) {
    // a*b, or a*b + c1*c2 (+ d1*d2), transformed and dealiased
    for (std::size_t i = 0; i < nn; ++i) {
      double v = a.v[i] * b.v[i];
      if (c1) v += c1->v[i] * c2->v[i];
      if (d1) v += d1->v[i] * d2->v[i];
      w.v[i] = v;
    }
    SpectralField out = forward_transform(w);
    dealias_inplace(out);
    return out;
  };

  const SpectralField uu11 = product_spectrum(u1p, u1p);
  const SpectralField uu12 = product_spectrum(u1p, u2p);
  const SpectralField uu22 = product_spectrum(u2p, u2p);

  // (grad d (.) grad d)_ij = (partial i d) . (partial j d)
  const SpectralField ss11 = product_spectrum(p11, p11, &p12, &p12);
  const SpectralField ss12 = product_spectrum(p11, p21, &p12, &p22);
  const SpectralField ss22 = product_spectrum(p21, p21, &p22, &p22);

  // (u . grad d)_j and (|grad d|^2 d)_j
  const SpectralField adv1 = product_spectrum(u1p, p11, &u2p, &p21);
  const SpectralField adv2 = product_spectrum(u1p, p12, &u2p, &p22);
  RealField gsq(s.grid);
  for (std::size_t i = 0; i < nn; ++i) {
    gsq.v[i] = p11.v[i] * p11.v[i] + p21.v[i] * p21.v[i] + p12.v[i] * p12.v[i] +
               p22.v[i] * p22.v[i];
  }
  const SpectralField cub1 = product_spectrum(gsq, d1p);
  const SpectralField cub2 = product_spectrum(gsq, d2p);

  SnapshotSpectra sp;
  sp.eu.assign(nn, 0.0);
  sp.ed.assign(nn, 0.0);
  sp.qu_adv.assign(nn, 0.0);
  sp.qu_el.assign(nn, 0.0);
  sp.qd_adv.assign(nn, 0.0);
  sp.qd_cub.assign(nn, 0.0);

  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = g.idx(i, j);
      if (!g.keep(i, j)) continue;
      const std::complex<double> ixi1(0.0, g.dxi[i]);
      const std::complex<double> ixi2(0.0, g.dxi[j]);
      const double xisq = g.xi_sq(i, j);

      const std::complex<double> cu1 = std::conj(s.u1.c[k]);
      const std::complex<double> cu2 = std::conj(s.u2.c[k]);
      sp.eu[k] = std::norm(s.u1.c[k]) + std::norm(s.u2.c[k]);
      sp.ed[k] = xisq * (std::norm(dh[0].c[k]) + std::norm(dh[1].c[k]));

      const std::complex<double> tu1 = ixi1 * uu11.c[k] + ixi2 * uu12.c[k];
      const std::complex<double> tu2 = ixi1 * uu12.c[k] + ixi2 * uu22.c[k];
      sp.qu_adv[k] = (tu1 * cu1 + tu2 * cu2).real();

      const std::complex<double> ts1 = ixi1 * ss11.c[k] + ixi2 * ss12.c[k];
      const std::complex<double> ts2 = ixi1 * ss12.c[k] + ixi2 * ss22.c[k];
      sp.qu_el[k] = (ts1 * cu1 + ts2 * cu2).real();

      sp.qd_adv[k] =
          xisq * (adv1.c[k] * std::conj(dh[0].c[k]) + adv2.c[k] * std::conj(dh[1].c[k])).real();
      sp.qd_cub[k] =
          xisq * (cub1.c[k] * std::conj(dh[0].c[k]) + cub2.c[k] * std::conj(dh[1].c[k])).real();
    }
  }
  return sp;
}

std::vector<double> snapshot_times(const Trajectory& traj) {
  std::vector<double> t;
  t.reserve(traj.snapshots.size());
  for (const FlowState& s : traj.snapshots) t.push_back(s.t);
  return t;
}

std::size_t nearest_index(const std::vector<double>& times, double t) {
  std::size_t best = 0;
  double dist = std::abs(times[0] - t);
  for (std::size_t m = 1; m < times.size(); ++m) {
    const double d = std::abs(times[m] - t);
    if (d < dist) {
      dist = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

double phi_weight(double xi_sq, double t) { return std::exp(-xi_sq * t); }

double psi_weight(double xi_sq, double t) { return 1.0 - phi_weight(xi_sq, t); }

double MultiplierSpec::radius_at(double t) const {
  switch (rule) {
    case SplitRule::balance:
      return std::sqrt(0.5 * weight_exponent / (1.0 + t));
    case SplitRule::log_shell:
      if (!(omega_bar > 0.0)) throw config_error("MultiplierSpec: omega_bar must be positive");
      return 1.0 / std::sqrt(omega_bar * (kE + t) * std::log(kE + t));
    case SplitRule::algebraic_shell:
      if (!(omega_bar > 0.0)) throw config_error("MultiplierSpec: omega_bar must be positive");
      return 1.0 / std::sqrt(2.0 * omega_bar * (1.0 + t));
  }
  throw config_error("MultiplierSpec: unknown split rule");
}

double MultiplierSpec::poly_weight(double t) const {
  return std::pow(1.0 + t, static_cast<double>(weight_exponent));
}

double MultiplierSpec::poly_weight_rate(double t) const {
  return weight_exponent * std::pow(1.0 + t, static_cast<double>(weight_exponent - 1));
}

void InequalityReport::push(InequalityEntry e) {
  e.slack = e.rhs - e.lhs;
  const double denom = std::max(std::abs(e.rhs), 1e-300);
  e.slack_rel = e.slack / denom;
  e.holds = e.slack >= -kInequalityTol * std::abs(e.rhs);
  if (entries.empty()) {
    min_slack_rel = e.slack_rel;
  } else {
    min_slack_rel = std::min(min_slack_rel, e.slack_rel);
  }
  holds = holds && e.holds;
  entries.push_back(std::move(e));
}

EnergyLedger energy_budget(const Trajectory& traj, const Params& par) {
  if (traj.samples.empty()) throw config_error("energy_budget: empty trajectory");
  EnergyLedger led;
  const std::size_t m = traj.samples.size();
  led.t.reserve(m);
  led.energy.reserve(m);
  led.viscous_integral.reserve(m);
  led.tension_integral.reserve(m);
  led.residual_rel.reserve(m);

  double visc = 0.0, tens = 0.0;
  const double e0 = traj.samples.front().report.total;
  const double scale = std::max(std::abs(e0), 1e-300);
  for (std::size_t i = 0; i < m; ++i) {
    const Sample& s = traj.samples[i];
    if (i > 0) {
      const Sample& p = traj.samples[i - 1];
      const double h = 0.5 * (s.t - p.t);
      visc += h * par.nu * (p.report.viscous + s.report.viscous);
      tens += h * par.gamma * par.lambda * (p.report.tension_sq + s.report.tension_sq);
    }
    led.t.push_back(s.t);
    led.energy.push_back(s.report.total);
    led.viscous_integral.push_back(visc);
    led.tension_integral.push_back(tens);
    const double resid = std::abs(s.report.total + 2.0 * (visc + tens) - e0) / scale;
    led.residual_rel.push_back(resid);
    led.max_residual_rel = std::max(led.max_residual_rel, resid);
  }
  return led;
}

InequalityReport coercive_budget(const Trajectory& traj, const Params& par, double omega_bar) {
  if (traj.samples.empty()) throw config_error("coercive_budget: empty trajectory");
  if (!(omega_bar >= 0.0)) throw config_error("coercive_budget: omega_bar must be nonnegative");
  InequalityReport rep;
  rep.name = "coercive_budget";
  const double e0 = traj.samples.front().report.total;
  double diss = 0.0;  // int (nu ||grad u||^2 + gamma lambda ||lap d||^2)
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    if (i > 0) {
      const Sample& p = traj.samples[i - 1];
      const double h = 0.5 * (s.t - p.t);
      diss += h * (par.nu * (p.report.viscous + s.report.viscous) +
                   par.gamma * par.lambda * (p.report.lap_d_sq + s.report.lap_d_sq));
    }
    InequalityEntry e;
    e.label = "t=" + fmt_time(s.t);
    e.s = 0.0;
    e.t = s.t;
    e.lhs = s.report.total + omega_bar * diss;
    e.rhs = e0;
    e.rhs_start = e0;
    rep.push(std::move(e));
  }
  return rep;
}

RigidityReport rigidity_report(const EnergyReport& rep, double min_d2_value, double eps0) {
  RigidityReport out;
  out.grad_l4_fourth = rep.grad_d_l4_4;
  out.lap_l2_sq = rep.lap_d_sq;
  out.coercive_lhs = rep.tension_sq;
  out.hypothesis_ok = min_d2_value >= eps0;
  if (rep.lap_d_sq <= 0.0) {
    if (rep.grad_d_l4_4 > 0.0) {
      throw numeric_error("rigidity_report: ||grad d||_4 > 0 with ||lap d|| = 0");
    }
    out.zero_gradient = true;
    return out;
  }
  out.ratio = rep.grad_d_l4_4 / rep.lap_d_sq;
  out.coercive_margin = 2.0 * rep.tension_sq / (rep.lap_d_sq + rep.grad_d_l4_4);
  out.omega_empirical = std::max(0.0, std::min(1.0 - out.ratio, out.coercive_margin));
  return out;
}

RigidityReport rigidity_report(const FlowState& state, double eps0) {
  return rigidity_report(energy_report(state), min_d2(state), eps0);
}

std::pair<double, double> frequency_split_energy(const FlowState& state, double radius) {
  const SpectralGrid& g = *state.grid;
  const std::array<SpectralField, 2> dh = director_from_angle(state);
  const double rsq = radius * radius;
  const double lam = state.params.lambda;
  double low = 0.0, high = 0.0;
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!g.keep(i, j)) continue;
      const std::size_t k = g.idx(i, j);
      const double xisq = g.xi_sq(i, j);
      const double e = std::norm(state.u1.c[k]) + std::norm(state.u2.c[k]) +
                       lam * xisq * (std::norm(dh[0].c[k]) + std::norm(dh[1].c[k]));
      if (xisq <= rsq) {
        low += e;
      } else {
        high += e;
      }
    }
  }
  const double area = g.length * g.length;
  return {area * low, area * high};
}

std::vector<std::pair<double, double>> default_pair_times(const Trajectory& traj) {
  if (traj.snapshots.size() < 2) {
    throw config_error("default_pair_times: need at least two snapshots");
  }
  const std::vector<double> times = snapshot_times(traj);
  // s starts after the initial transient. In the first few time units the
  // weighted integrands still carry modes whose decay time is shorter than
  // any practical snapshot cadence while the continuum slack is near zero,
  // so the trapezoid error dwarfs the verdict tolerance (the refinement test
  // shows the slack converging to 0+ like h^2). Callers probing earlier
  // starts must supply explicit pairs on a correspondingly finer grid.
  const double s_targets[] = {5.0, 20.0, 50.0};
  const double t_targets[] = {2.0, 5.0, 10.0, 20.0, 40.0, 70.0, 100.0};
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<double, double>> pairs;
  for (double st : s_targets) {
    std::size_t is = nearest_index(times, st);
    if (is == 0) is = 1;  // the multipliers assume s > 0
    for (double tt : t_targets) {
      const std::size_t it = nearest_index(times, tt);
      if (it <= is) continue;
      if (seen.insert({is, it}).second) pairs.emplace_back(times[is], times[it]);
    }
  }
  if (pairs.empty()) {
    // trajectory shorter than the target times: span what is stored instead
    const std::size_t last = times.size() - 1;
    const std::size_t is = last >= 2 ? 1 : 0;
    pairs.emplace_back(times[is], times[last]);
    const std::size_t mid = (is + last) / 2;
    if (mid > is && mid < last) {
      pairs.emplace_back(times[is], times[mid]);
      pairs.emplace_back(times[mid], times[last]);
    }
  }
  return pairs;
}

InequalityReport verify_weighted_inequality(const Trajectory& traj, const MultiplierSpec& spec,
                                            InequalityKind which, const Params& par,
                                            std::vector<std::pair<double, double>> pairs) {
  if (traj.snapshots.size() < 2) {
    throw config_error("verify_weighted_inequality: need at least two snapshots");
  }
  if (spec.weight_exponent < 1) {
    throw config_error("verify_weighted_inequality: weight exponent must be >= 1");
  }
  if (pairs.empty()) pairs = default_pair_times(traj);

  const std::vector<double> times = snapshot_times(traj);
  const std::size_t nsnap = times.size();

  struct Pair {
    std::size_t is, it;
  };
  std::vector<Pair> idx;
  idx.reserve(pairs.size());
  for (const auto& [ps, pt] : pairs) {
    Pair pr{nearest_index(times, ps), nearest_index(times, pt)};
    if (pr.is >= pr.it) throw config_error("verify_weighted_inequality: pair needs s < t");
    idx.push_back(pr);
  }

  const SpectralGrid& g = *traj.snapshots.front().grid;
  const double area = g.length * g.length;
  const int n = g.n;

  InequalityReport rep;

  if (which == InequalityKind::highpass_growth || which == InequalityKind::weighted_highpass) {
    rep.name = which == InequalityKind::highpass_growth ? "highpass_growth" : "weighted_highpass";
    // Multipliers depend only on the snapshot's own time, so one pass yields
    // per-snapshot scalars and every pair is a quadrature over them.
    std::vector<double> Su(nsnap), Au(nsnap), NuA(nsnap), NuE(nsnap);
    std::vector<double> Sd(nsnap), Ad(nsnap), NdA(nsnap), NdC(nsnap);
    for (std::size_t m = 0; m < nsnap; ++m) {
      const SnapshotSpectra sp = snapshot_spectra(traj.snapshots[m]);
      const double tau = times[m];
      double su = 0, au = 0, nua = 0, nue = 0, sd = 0, ad = 0, nda = 0, ndc = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (!g.keep(i, j)) continue;
          const std::size_t k = g.idx(i, j);
          const double xisq = g.xi_sq(i, j);
          const double phi = phi_weight(xisq, tau);
          const double psi = 1.0 - phi;
          const double psi2 = psi * psi;
          const double dpsi_psi = xisq * phi * psi;  // psi' psi
          su += psi2 * sp.eu[k];
          au += (dpsi_psi - par.nu * xisq * psi2) * sp.eu[k];
          nua += psi2 * sp.qu_adv[k];
          nue += psi2 * sp.qu_el[k];
          sd += psi2 * sp.ed[k];
          ad += (dpsi_psi - par.gamma * xisq * psi2) * sp.ed[k];
          nda += psi2 * sp.qd_adv[k];
          ndc += psi2 * sp.qd_cub[k];
        }
      }
      Su[m] = area * su;
      Au[m] = area * au;
      NuA[m] = area * nua;
      NuE[m] = area * nue;
      Sd[m] = area * sd;
      Ad[m] = area * ad;
      NdA[m] = area * nda;
      NdC[m] = area * ndc;
    }

    for (const Pair& pr : idx) {
      const std::vector<double> w = trapezoid_weights(times, pr.is, pr.it);
      double iu_lin = 0, iu_adv = 0, iu_el = 0, id_lin = 0, id_adv = 0, id_cub = 0;
      double iu_weight = 0, id_weight = 0;  // int E' S
      for (std::size_t m = pr.is; m <= pr.it; ++m) {
        if (w[m] == 0.0) continue;
        if (which == InequalityKind::highpass_growth) {
          iu_lin += w[m] * std::abs(Au[m]);
          iu_adv += w[m] * std::abs(NuA[m]);
          iu_el += w[m] * std::abs(NuE[m]);
          id_lin += w[m] * std::abs(Ad[m]);
          id_adv += w[m] * std::abs(NdA[m]);
          id_cub += w[m] * std::abs(NdC[m]);
        } else {
          const double E = spec.poly_weight(times[m]);
          const double Ep = spec.poly_weight_rate(times[m]);
          iu_lin += w[m] * E * Au[m];  // kept signed
          iu_adv += w[m] * E * std::abs(NuA[m]);
          iu_el += w[m] * E * std::abs(NuE[m]);
          id_lin += w[m] * E * Ad[m];
          id_adv += w[m] * E * std::abs(NdA[m]);
          id_cub += w[m] * E * std::abs(NdC[m]);
          iu_weight += w[m] * Ep * Su[m];
          id_weight += w[m] * Ep * Sd[m];
        }
      }
      const double Es = which == InequalityKind::weighted_highpass ? spec.poly_weight(times[pr.is]) : 1.0;
      const double Et = which == InequalityKind::weighted_highpass ? spec.poly_weight(times[pr.it]) : 1.0;

      InequalityEntry eu;
      eu.label = "velocity s=" + fmt_time(times[pr.is]) + " t=" + fmt_time(times[pr.it]);
      eu.s = times[pr.is];
      eu.t = times[pr.it];
      eu.lhs = Et * Su[pr.it];
      eu.rhs_start = Es * Su[pr.is];
      eu.rhs = eu.rhs_start + iu_weight + 2.0 * iu_lin + 2.0 * iu_adv + 2.0 * par.lambda * iu_el;
      rep.push(std::move(eu));

      InequalityEntry ed;
      ed.label = "director s=" + fmt_time(times[pr.is]) + " t=" + fmt_time(times[pr.it]);
      ed.s = times[pr.is];
      ed.t = times[pr.it];
      ed.lhs = Et * Sd[pr.it];
      ed.rhs_start = Es * Sd[pr.is];
      ed.rhs = ed.rhs_start + id_weight + 2.0 * id_lin + 2.0 * id_adv + 2.0 * par.gamma * id_cub;
      rep.push(std::move(ed));
    }
    return rep;
  }

  // lowpass_duhamel: the retarded kernel couples (t - tau), so each pair
  // accumulates its own weighted mode sums during a single snapshot pass.
  rep.name = "lowpass_duhamel";
  struct Acc {
    double lhs_u = 0, lhs_d = 0, start_u = 0, start_d = 0;
    double int_u_adv = 0, int_u_el = 0, int_d_adv = 0, int_d_cub = 0;
    std::vector<double> w;
  };
  std::vector<Acc> acc(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    acc[q].w = trapezoid_weights(times, idx[q].is, idx[q].it);
  }

  for (std::size_t m = 0; m < nsnap; ++m) {
    bool needed = false;
    for (const Pair& pr : idx) needed = needed || (m >= pr.is && m <= pr.it);
    if (!needed) continue;
    const SnapshotSpectra sp = snapshot_spectra(traj.snapshots[m]);
    const double tau = times[m];
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const Pair& pr = idx[q];
      if (m < pr.is || m > pr.it) continue;
      const double tp = times[pr.it];
      double su = 0, sd = 0, ua = 0, ue = 0, da = 0, dc = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (!g.keep(i, j)) continue;
          const std::size_t k = g.idx(i, j);
          const double xisq = g.xi_sq(i, j);
          const double phi2 = std::exp(-2.0 * xisq * tp);  // phi(xi, t)^2
          const double ker_u = std::exp(-2.0 * par.nu * xisq * (tp - tau)) * phi2;
          const double ker_d = std::exp(-2.0 * par.gamma * xisq * (tp - tau)) * phi2;
          if (m == pr.is) {
            su += ker_u * sp.eu[k];
            sd += ker_d * sp.ed[k];
          }
          ua += ker_u * sp.qu_adv[k];
          ue += ker_u * sp.qu_el[k];
          da += ker_d * sp.qd_adv[k];
          dc += ker_d * sp.qd_cub[k];
        }
      }
      if (m == pr.is) {
        acc[q].start_u = area * su;
        acc[q].start_d = area * sd;
      }
      if (m == pr.it) {
        // at tau = t both kernels reduce to phi(xi,t)^2
        double lu = 0, ld = 0;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (!g.keep(i, j)) continue;
            const std::size_t k = g.idx(i, j);
            const double phi2 = std::exp(-2.0 * g.xi_sq(i, j) * tp);
            lu += phi2 * sp.eu[k];
            ld += phi2 * sp.ed[k];
          }
        }
        acc[q].lhs_u = area * lu;
        acc[q].lhs_d = area * ld;
      }
      const double wm = acc[q].w[m];
      acc[q].int_u_adv += wm * std::abs(area * ua);
      acc[q].int_u_el += wm * std::abs(area * ue);
      acc[q].int_d_adv += wm * std::abs(area * da);
      acc[q].int_d_cub += wm * std::abs(area * dc);
    }
  }

  for (std::size_t q = 0; q < idx.size(); ++q) {
    const Pair& pr = idx[q];
    InequalityEntry eu;
    eu.label = "velocity s=" + fmt_time(times[pr.is]) + " t=" + fmt_time(times[pr.it]);
    eu.s = times[pr.is];
    eu.t = times[pr.it];
    eu.lhs = acc[q].lhs_u;
    eu.rhs_start = acc[q].start_u;
    eu.rhs = eu.rhs_start + 2.0 * acc[q].int_u_adv + 2.0 * par.lambda * acc[q].int_u_el;
    rep.push(std::move(eu));

    InequalityEntry ed;
    ed.label = "director s=" + fmt_time(times[pr.is]) + " t=" + fmt_time(times[pr.it]);
    ed.s = times[pr.is];
    ed.t = times[pr.it];
    ed.lhs = acc[q].lhs_d;
    ed.rhs_start = acc[q].start_d;
    ed.rhs = ed.rhs_start + 2.0 * acc[q].int_d_adv + 2.0 * par.gamma * acc[q].int_d_cub;
    rep.push(std::move(ed));
  }
  return rep;
}

InequalityReport pointwise_fourier_bound(const Trajectory& traj, const Params& par) {
  if (traj.snapshots.empty() || traj.samples.empty()) {
    throw config_error("pointwise_fourier_bound: empty trajectory");
  }
  if (std::abs(traj.snapshots.front().t) > 1e-12) {
    throw config_error("pointwise_fourier_bound: missing initial snapshot");
  }

  const SpectralGrid& g = *traj.snapshots.front().grid;
  const int n = g.n;
  const std::size_t nn = g.size();

  // Cumulative trapezoid of ||u||^2 + ||grad d||^2 on the dense sample grid.
  std::vector<double> st(traj.samples.size()), cum(traj.samples.size(), 0.0);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    st[i] = traj.samples[i].t;
    if (i > 0) {
      const auto& a = traj.samples[i - 1].report;
      const auto& b = traj.samples[i].report;
      cum[i] = cum[i - 1] + 0.5 * (st[i] - st[i - 1]) *
                                ((a.kinetic + a.elastic) + (b.kinetic + b.elastic));
    }
  }
  auto cum_at = [&](double t) {
    if (t <= st.front()) return cum.front();
    if (t >= st.back()) return cum.back();
    const auto it = std::upper_bound(st.begin(), st.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - st.begin());
    const std::size_t lo = hi - 1;
    const double f = (t - st[lo]) / (st[hi] - st[lo]);
    return cum[lo] + f * (cum[hi] - cum[lo]);
  };

  auto mode_amplitudes = [&](const FlowState& s) {
    const std::array<SpectralField, 2> dh = director_from_angle(s);
    std::vector<double> amp(nn, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!g.keep(i, j)) continue;
        const std::size_t k = g.idx(i, j);
        const double xim = std::sqrt(g.xi_sq(i, j));
        amp[k] = std::sqrt(std::norm(s.u1.c[k]) + std::norm(s.u2.c[k])) +
                 xim * std::sqrt(std::norm(dh[0].c[k]) + std::norm(dh[1].c[k]));
      }
    }
    return amp;
  };

  const std::vector<double> base = mode_amplitudes(traj.snapshots.front());
  const double coeff =
      2.0 * std::max({1.0, par.lambda, par.gamma}) / (g.length * g.length);

  InequalityReport rep;
  rep.name = "pointwise_fourier_bound";
  for (const FlowState& snap : traj.snapshots) {
    const std::vector<double> amp = mode_amplitudes(snap);
    const double integral = cum_at(snap.t);
    InequalityEntry worst;
    bool first = true;
    int wi = 0, wj = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!g.keep(i, j)) continue;
        const std::size_t k = g.idx(i, j);
        const double xim = std::sqrt(g.xi_sq(i, j));
        const double lhs = amp[k];
        const double rhs = base[k] + coeff * xim * integral;
        const double slack = rhs - lhs;
        if (first || slack < worst.rhs - worst.lhs) {
          worst.lhs = lhs;
          worst.rhs = rhs;
          worst.rhs_start = base[k];
          wi = g.kint[i];
          wj = g.kint[j];
          first = false;
        }
      }
    }
    worst.s = 0.0;
    worst.t = snap.t;
    worst.label = "t=" + fmt_time(snap.t) + " mode=(" + std::to_string(wi) + "," +
                  std::to_string(wj) + ")";
    rep.push(std::move(worst));
  }
  return rep;
}

InequalityReport shell_energy_bound(const SpectralField& f, double g, double p) {
  if (!(p >= 1.0 && p < 2.0)) throw config_error("shell_energy_bound: p must lie in [1,2)");
  if (!(g > 0.0)) throw config_error("shell_energy_bound: radius must be positive");
  const SpectralGrid& gr = *f.grid;
  const int n = gr.n;
  double shell = 0.0;
  const double gsq = g * g;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!gr.keep(i, j)) continue;
      if (gr.xi_sq(i, j) > gsq) continue;
      shell += std::norm(f.c[gr.idx(i, j)]);
    }
  }
  shell *= gr.length * gr.length;

  const RealField phys = inverse_transform(f);
  const double lp = lp_norm_estimate(phys, p);
  const double two_pi = 2.0 * 3.14159265358979323846;
  const double pi = 3.14159265358979323846;
  const double bound =
      std::pow(two_pi, 2.0 - 4.0 / p) * lp * lp * std::pow(pi * gsq, 2.0 / p - 1.0);

  InequalityReport rep;
  rep.name = "shell_energy_bound";
  InequalityEntry e;
  {
    std::ostringstream os;
    os << "p=" << p << " g=" << g;
    e.label = os.str();
  }
  e.lhs = shell;
  e.rhs = bound;
  e.rhs_start = bound;
  rep.push(std::move(e));
  return rep;
}

std::vector<SplitTraceRow> splitting_decay_trace(const Trajectory& traj,
                                                 const MultiplierSpec& spec) {
  std::vector<SplitTraceRow> rows;
  rows.reserve(traj.snapshots.size());
  for (const FlowState& s : traj.snapshots) {
    SplitTraceRow r;
    r.t = s.t;
    r.radius = spec.radius_at(s.t);
    const auto [low, high] = frequency_split_energy(s, r.radius);
    r.low = low;
    r.high = high;
    r.total = low + high;
    r.weighted_poly = (1.0 + s.t) * r.total;
    const double lg = std::log(kE + s.t);
    r.weighted_log = lg * lg * r.total;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace nemflow
