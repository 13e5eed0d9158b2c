#include "nemflow/model.hpp"

#include <cmath>

#include "nemflow/errors.hpp"

namespace nemflow {

namespace {

RealField multiply(const RealField& a, const RealField& b) {
  RealField out(a.grid);
  const std::size_t sz = out.v.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p) out.v[p] = a.v[p] * b.v[p];
  return out;
}

SpectralField forward_dealiased(const RealField& f) {
  SpectralField out = forward_transform(f);
  dealias_inplace(out);
  return out;
}

// -(i xi1 a + i xi2 b) accumulated into out with coefficient c.
void accumulate_divergence(SpectralField& out, const SpectralField& a, const SpectralField& b,
                           double coeff) {
  const auto& g = *out.grid;
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double x1 = g.dxi[i];
    for (int j = 0; j < n; ++j) {
      const double x2 = g.dxi[j];
      const std::size_t p = g.idx(i, j);
      const std::complex<double> div(-(x1 * a.c[p].imag() + x2 * b.c[p].imag()),
                                     x1 * a.c[p].real() + x2 * b.c[p].real());
      out.c[p] -= coeff * div;
    }
  }
}

double max_vector_norm(const RealField& a, const RealField& b) {
  double m = 0.0;
  const std::size_t sz = a.v.size();
  for (std::size_t p = 0; p < sz; ++p)
    m = std::max(m, a.v[p] * a.v[p] + b.v[p] * b.v[p]);
  return std::sqrt(m);
}

struct PhysicalDirector {
  RealField d1, d2;        // components
  RealField g11, g12, g22; // grad d (.) grad d entries
  RealField gsq;           // |grad d|^2
};

// Physical director gradients. In the angle chart grad d = grad theta * d_perp
// pointwise, so the stress entries are products of theta gradients and |grad
// d|^2 = |grad theta|^2 exactly.
PhysicalDirector physical_director(const FlowState& s) {
  PhysicalDirector out;
  if (s.mode == DirectorMode::angle) {
    RealField th = inverse_transform(s.theta);
    auto [txh, tyh] = gradient(s.theta);
    RealField tx = inverse_transform(txh), ty = inverse_transform(tyh);
    out.d1 = RealField(s.grid);
    out.d2 = RealField(s.grid);
    const std::size_t sz = th.v.size();
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(sz); ++p) {
      out.d1.v[p] = std::cos(th.v[p]);
      out.d2.v[p] = std::sin(th.v[p]);
    }
    out.g11 = multiply(tx, tx);
    out.g12 = multiply(tx, ty);
    out.g22 = multiply(ty, ty);
    out.gsq = RealField(s.grid);
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(sz); ++p)
      out.gsq.v[p] = out.g11.v[p] + out.g22.v[p];
    return out;
  }
  out.d1 = inverse_transform(s.d1);
  out.d2 = inverse_transform(s.d2);
  auto [d1xh, d1yh] = gradient(s.d1);
  auto [d2xh, d2yh] = gradient(s.d2);
  RealField d1x = inverse_transform(d1xh), d1y = inverse_transform(d1yh);
  RealField d2x = inverse_transform(d2xh), d2y = inverse_transform(d2yh);
  out.g11 = RealField(s.grid);
  out.g12 = RealField(s.grid);
  out.g22 = RealField(s.grid);
  out.gsq = RealField(s.grid);
  const std::size_t sz = out.g11.v.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p) {
    out.g11.v[p] = d1x.v[p] * d1x.v[p] + d2x.v[p] * d2x.v[p];
    out.g12.v[p] = d1x.v[p] * d1y.v[p] + d2x.v[p] * d2y.v[p];
    out.g22.v[p] = d1y.v[p] * d1y.v[p] + d2y.v[p] * d2y.v[p];
    out.gsq.v[p] = out.g11.v[p] + out.g22.v[p];
  }
  return out;
}

}  // namespace

double velocity_linf(const FlowState& s) {
  return max_vector_norm(inverse_transform(s.u1), inverse_transform(s.u2));
}

double unit_constraint_error(const FlowState& s) {
  double m = 0.0;
  if (s.mode == DirectorMode::angle) {
    RealField th = inverse_transform(s.theta);
    for (double t : th.v) {
      const double c = std::cos(t), sn = std::sin(t);
      m = std::max(m, std::abs(c * c + sn * sn - 1.0));
    }
    return m;
  }
  RealField d1 = inverse_transform(s.d1), d2 = inverse_transform(s.d2);
  const std::size_t sz = d1.v.size();
  for (std::size_t p = 0; p < sz; ++p)
    m = std::max(m, std::abs(std::sqrt(d1.v[p] * d1.v[p] + d2.v[p] * d2.v[p]) - 1.0));
  return m;
}

double min_d2(const FlowState& s) {
  double m = 1.0 / 0.0;
  if (s.mode == DirectorMode::angle) {
    RealField th = inverse_transform(s.theta);
    for (double t : th.v) m = std::min(m, std::sin(t));
    return m;
  }
  RealField d2 = inverse_transform(s.d2);
  for (double x : d2.v) m = std::min(m, x);
  return m;
}

std::array<SpectralField, 2> director_from_angle(const FlowState& s) {
  if (s.mode == DirectorMode::vec) return {s.d1, s.d2};
  RealField th = inverse_transform(s.theta);
  RealField c1(s.grid), c2(s.grid);
  const std::size_t sz = th.v.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p) {
    c1.v[p] = std::cos(th.v[p]);
    c2.v[p] = std::sin(th.v[p]);
  }
  return {forward_dealiased(c1), forward_dealiased(c2)};
}

std::array<SpectralField, 3> elastic_stress(const FlowState& s) {
  PhysicalDirector pd = physical_director(s);
  return {forward_dealiased(pd.g11), forward_dealiased(pd.g12), forward_dealiased(pd.g22)};
}

Tendencies nonlinear_rhs(const FlowState& s) {
  const Params& pr = s.params;
  Tendencies out;
  RealField u1p = inverse_transform(s.u1);
  RealField u2p = inverse_transform(s.u2);
  out.u_linf = max_vector_norm(u1p, u2p);

  SpectralField uu11 = forward_dealiased(multiply(u1p, u1p));
  SpectralField uu12 = forward_dealiased(multiply(u1p, u2p));
  SpectralField uu22 = forward_dealiased(multiply(u2p, u2p));

  out.u1 = SpectralField(s.grid);
  out.u2 = SpectralField(s.grid);
  accumulate_divergence(out.u1, uu11, uu12, 1.0);
  accumulate_divergence(out.u2, uu12, uu22, 1.0);

  if (s.mode == DirectorMode::angle) {
    auto [txh, tyh] = gradient(s.theta);
    RealField tx = inverse_transform(txh), ty = inverse_transform(tyh);
    SpectralField g11 = forward_dealiased(multiply(tx, tx));
    SpectralField g12 = forward_dealiased(multiply(tx, ty));
    SpectralField g22 = forward_dealiased(multiply(ty, ty));
    accumulate_divergence(out.u1, g11, g12, pr.lambda);
    accumulate_divergence(out.u2, g12, g22, pr.lambda);
    leray_project(out.u1, out.u2);

    RealField adv(s.grid);
    const std::size_t sz = adv.v.size();
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(sz); ++p)
      adv.v[p] = u1p.v[p] * tx.v[p] + u2p.v[p] * ty.v[p];
    out.theta = forward_dealiased(adv);
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(out.theta.c.size()); ++p)
      out.theta.c[p] = -out.theta.c[p];
    return out;
  }

  PhysicalDirector pd = physical_director(s);
  SpectralField s11 = forward_dealiased(pd.g11);
  SpectralField s12 = forward_dealiased(pd.g12);
  SpectralField s22 = forward_dealiased(pd.g22);
  accumulate_divergence(out.u1, s11, s12, pr.lambda);
  accumulate_divergence(out.u2, s12, s22, pr.lambda);
  leray_project(out.u1, out.u2);

  auto [d1xh, d1yh] = gradient(s.d1);
  auto [d2xh, d2yh] = gradient(s.d2);
  RealField d1x = inverse_transform(d1xh), d1y = inverse_transform(d1yh);
  RealField d2x = inverse_transform(d2xh), d2y = inverse_transform(d2yh);
  RealField r1(s.grid), r2(s.grid);
  const std::size_t sz = r1.v.size();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(sz); ++p) {
    r1.v[p] = -(u1p.v[p] * d1x.v[p] + u2p.v[p] * d1y.v[p]) + pr.gamma * pd.gsq.v[p] * pd.d1.v[p];
    r2.v[p] = -(u1p.v[p] * d2x.v[p] + u2p.v[p] * d2y.v[p]) + pr.gamma * pd.gsq.v[p] * pd.d2.v[p];
  }
  out.d1 = forward_dealiased(r1);
  out.d2 = forward_dealiased(r2);
  return out;
}

std::pair<SpectralField, SpectralField> velocity_rhs(const FlowState& s) {
  Tendencies t = nonlinear_rhs(s);
  return {std::move(t.u1), std::move(t.u2)};
}

std::pair<SpectralField, SpectralField> director_rhs(const FlowState& s) {
  Tendencies t = nonlinear_rhs(s);
  if (s.mode == DirectorMode::angle) return {std::move(t.theta), SpectralField()};
  return {std::move(t.d1), std::move(t.d2)};
}

SpectralField compute_pressure(const FlowState& s) {
  RealField u1p = inverse_transform(s.u1);
  RealField u2p = inverse_transform(s.u2);
  SpectralField t11 = forward_dealiased(multiply(u1p, u1p));
  SpectralField t12 = forward_dealiased(multiply(u1p, u2p));
  SpectralField t22 = forward_dealiased(multiply(u2p, u2p));
  std::array<SpectralField, 3> st = elastic_stress(s);
  const double lam = s.params.lambda;
  const auto& g = *s.grid;
  SpectralField P(s.grid);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double x1 = g.xi[i];
    for (int j = 0; j < n; ++j) {
      const double x2 = g.xi[j];
      const double x_sq = x1 * x1 + x2 * x2;
      if (x_sq == 0.0) continue;
      const std::size_t p = g.idx(i, j);
      const std::complex<double> ddT =
          -(x1 * x1 * (t11.c[p] + lam * st[0].c[p]) + 2.0 * x1 * x2 * (t12.c[p] + lam * st[1].c[p]) +
            x2 * x2 * (t22.c[p] + lam * st[2].c[p]));
      // -lap P = div div T and (div div T)^ = ddT, so |xi|^2 P = ddT
      P.c[p] = ddT / x_sq;
    }
  }
  return P;
}

EnergyReport energy_report(const FlowState& s) {
  EnergyReport r;
  r.kinetic = parseval_energy(s.u1) + parseval_energy(s.u2);
  r.viscous = gradient_energy(s.u1) + gradient_energy(s.u2);
  const double dx2 = s.grid->dx * s.grid->dx;
  if (s.mode == DirectorMode::angle) {
    r.elastic = gradient_energy(s.theta);
    r.tension_sq = laplacian_energy(s.theta);  // ||lap d + |grad d|^2 d|| = ||lap theta|| in the chart
    auto [txh, tyh] = gradient(s.theta);
    RealField tx = inverse_transform(txh), ty = inverse_transform(tyh);
    double l4 = 0.0;
    const std::size_t sz = tx.v.size();
    for (std::size_t p = 0; p < sz; ++p) {
      const double gsq = tx.v[p] * tx.v[p] + ty.v[p] * ty.v[p];
      l4 += gsq * gsq;
    }
    r.grad_d_l4_4 = l4 * dx2;
    r.lap_d_sq = r.tension_sq + r.grad_d_l4_4;  // |lap d|^2 = (lap theta)^2 + |grad theta|^4 pointwise
  } else {
    r.elastic = gradient_energy(s.d1) + gradient_energy(s.d2);
    r.lap_d_sq = laplacian_energy(s.d1) + laplacian_energy(s.d2);
    PhysicalDirector pd = physical_director(s);
    RealField l1 = inverse_transform(laplacian(s.d1));
    RealField l2 = inverse_transform(laplacian(s.d2));
    double l4 = 0.0, ten = 0.0;
    const std::size_t sz = l1.v.size();
    for (std::size_t p = 0; p < sz; ++p) {
      l4 += pd.gsq.v[p] * pd.gsq.v[p];
      const double t1 = l1.v[p] + pd.gsq.v[p] * pd.d1.v[p];
      const double t2 = l2.v[p] + pd.gsq.v[p] * pd.d2.v[p];
      ten += t1 * t1 + t2 * t2;
    }
    r.grad_d_l4_4 = l4 * dx2;
    r.tension_sq = ten * dx2;
  }
  r.total = r.kinetic + s.params.lambda * r.elastic;
  return r;
}

double divergence_linf(const FlowState& s) {
  const auto& g = *s.grid;
  const int n = g.n;
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t p = g.idx(i, j);
      m = std::max(m, std::abs(g.xi[i] * s.u1.c[p] + g.xi[j] * s.u2.c[p]));
    }
  return m;
}

bool all_finite(const FlowState& s) {
  auto ok = [](const SpectralField& f) {
    for (const auto& z : f.c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  };
  if (!ok(s.u1) || !ok(s.u2)) return false;
  if (s.mode == DirectorMode::angle) return ok(s.theta);
  return ok(s.d1) && ok(s.d2);
}

}  // namespace nemflow
