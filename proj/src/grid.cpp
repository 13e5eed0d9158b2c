#include "nemflow/grid.hpp"

#include <numbers>
#include <string>

#include "nemflow/errors.hpp"
#include "nemflow/fft.hpp"

namespace nemflow {

std::shared_ptr<const SpectralGrid> make_grid(int n, double length) {
  if (n < 8 || (n % 2) != 0)
    throw config_error("grid size must be even and at least 8, got " + std::to_string(n));
  if (!(length > 0.0)) throw config_error("box length must be positive");

  auto g = std::make_shared<SpectralGrid>();
  g->n = n;
  g->length = length;
  g->dx = length / n;
  g->kint.resize(n);
  g->xi.resize(n);
  g->dxi.resize(n);
  g->keep1d.resize(n);
  const double dk = 2.0 * std::numbers::pi_v<double> / length;
  for (int i = 0; i < n; ++i) {
    const int k = (i < n / 2) ? i : i - n;
    g->kint[i] = k;
    g->xi[i] = dk * k;
    g->dxi[i] = (k == -n / 2) ? 0.0 : dk * k;
    g->keep1d[i] = (3 * std::abs(k) < n) ? 1 : 0;
  }
  g->plan = make_plan(n);
  return g;
}

}  // namespace nemflow
