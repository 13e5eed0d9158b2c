#include "nemflow/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nemflow/errors.hpp"

namespace nemflow {

SpectralField dft_bruteforce(const RealField& f) {
  const auto& g = *f.grid;
  if (g.n > 16) throw config_error("dft_bruteforce is an oracle; n must be <= 16");
  const int n = g.n;
  SpectralField out(f.grid);
  const double w = -2.0 * std::numbers::pi_v<double> / n;
  for (int ki = 0; ki < n; ++ki)
    for (int kj = 0; kj < n; ++kj) {
      std::complex<double> acc(0.0, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double ang = w * (static_cast<double>(ki) * i + static_cast<double>(kj) * j);
          acc += f.v[g.idx(i, j)] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
      out.c[g.idx(ki, kj)] = acc / static_cast<double>(n * n);
    }
  return out;
}

double heat_energy_exact(double s, double t) {
  if (s <= -1.0) throw config_error("heat_energy_exact requires slope > -1");
  const double a = 2.0 * (1.0 + t);
  return std::numbers::pi_v<double> * std::tgamma(s + 1.0) / std::pow(a, s + 1.0);
}

FlowState taylor_green_exact(std::shared_ptr<const SpectralGrid> grid, double amplitude,
                             double nu, double t) {
  const double two_pi = 2.0 * std::numbers::pi_v<double>;
  if (std::abs(grid->length - two_pi) > 1e-12 * two_pi)
    throw config_error("taylor_green_exact is defined on the 2 pi box");
  FlowState s;
  s.t = t;
  s.mode = DirectorMode::angle;
  s.params.nu = nu;
  s.grid = grid;
  s.u1 = SpectralField(grid);
  s.u2 = SpectralField(grid);
  s.theta = SpectralField(grid);

  // sin x cos y = (1/4i)(e^{i(x+y)} + e^{i(x-y)} - e^{-i(x-y)} - e^{-i(x+y)})
  // Coefficients land on (k1,k2) = (+-1,+-1); in the mean-normalized
  // convention the coefficient of e^{i(k.x)} is written directly.
  const double a = amplitude * std::exp(-2.0 * nu * t);
  const int n = grid->n;
  auto at = [&](int k1, int k2) -> std::size_t {
    const int i = (k1 + n) % n;
    const int j = (k2 + n) % n;
    return grid->idx(i, j);
  };
  const std::complex<double> quarter_i(0.0, 0.25);
  // u1 = a sin x cos y: coefficient -i a/4 at (1,1),(1,-1); +i a/4 at (-1,1),(-1,-1)
  s.u1.c[at(1, 1)] = -quarter_i * a;
  s.u1.c[at(1, -1)] = -quarter_i * a;
  s.u1.c[at(-1, 1)] = quarter_i * a;
  s.u1.c[at(-1, -1)] = quarter_i * a;
  // u2 = -a cos x sin y
  s.u2.c[at(1, 1)] = quarter_i * a;
  s.u2.c[at(-1, 1)] = quarter_i * a;
  s.u2.c[at(1, -1)] = -quarter_i * a;
  s.u2.c[at(-1, -1)] = -quarter_i * a;
  // theta = pi/2 everywhere
  s.theta.c[grid->idx(0, 0)] = std::numbers::pi_v<double> / 2.0;
  return s;
}

}  // namespace nemflow
