// Kernel timing: OpenMP transform vs the serial reference, plus the
// end-to-end cost of the nonlinear tendency and one full step. The serial
// path must stay bitwise identical to the parallel one; this harness checks
// that while it times.
#include <chrono>
#include <complex>
#include <cstdio>
#include <vector>

#include "nemflow/fft.hpp"
#include "nemflow/grid.hpp"
#include "nemflow/initdata.hpp"
#include "nemflow/integrator.hpp"
#include "nemflow/model.hpp"
#include "nemflow/rng.hpp"

using namespace nemflow;
using clock_type = std::chrono::steady_clock;

namespace {

double time_loop(int iters, const std::function<void()>& body) {
  // one warm-up, then the timed batch
  body();
  const auto t0 = clock_type::now();
  for (int i = 0; i < iters; ++i) body();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double>(t1 - t0).count() / iters;
}

std::vector<std::complex<double>> random_block(int n, std::uint64_t seed) {
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n) * n);
  SplitMix64 rng(seed);
  for (auto& z : a) z = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  return a;
}

}  // namespace

int main() {
  std::printf("%-28s %12s %12s %8s\n", "kernel", "parallel us", "serial us", "speedup");

  for (int n : {128, 256, 384}) {
    auto plan = make_plan(n);
    auto base = random_block(n, 7);

    auto par = base;
    auto ser = base;
    fft2d(*plan, par.data(), -1);
    serialref::fft2d(*plan, ser.data(), -1);
    bool same = true;
    for (std::size_t i = 0; i < par.size(); ++i) same = same && par[i] == ser[i];
    if (!same) {
      std::printf("FATAL: fft2d n=%d parallel/serial outputs differ bitwise\n", n);
      return 1;
    }

    const int iters = n <= 128 ? 40 : 12;
    auto work_par = base;
    const double tp = time_loop(iters, [&] { fft2d(*plan, work_par.data(), -1); });
    auto work_ser = base;
    const double ts = time_loop(iters, [&] { serialref::fft2d(*plan, work_ser.data(), -1); });

    char label[64];
    std::snprintf(label, sizeof(label), "fft2d n=%d%s", n, plan->pow2 ? "" : " (bluestein)");
    std::printf("%-28s %12.1f %12.1f %8.2f\n", label, tp * 1e6, ts * 1e6, ts / tp);
  }

  {
    auto grid = make_grid(256, 256.0);
    InitSpec spec;
    spec.family = InitFamily::spectral_slope;
    spec.slope = 0.0;
    spec.seed = 42;
    spec.kinetic_target = 1.0;
    spec.elastic_target = 0.3;
    Params par;
    FlowState s = make_initial_state(grid, spec, par);

    const double t_rhs = time_loop(8, [&] {
      volatile double sink = nonlinear_rhs(s).u1.c[1].real();
      (void)sink;
    });
    std::printf("%-28s %12.1f %12s %8s\n", "nonlinear_rhs n=256", t_rhs * 1e6, "-", "-");

    const double t_step = time_loop(8, [&] { s = step(s, 1e-3); });
    std::printf("%-28s %12.1f %12s %8s\n", "step n=256", t_step * 1e6, "-", "-");
  }

  return 0;
}
