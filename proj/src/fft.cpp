#include "nemflow/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nemflow/errors.hpp"

namespace nemflow {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

std::vector<std::uint32_t> make_bitrev(int m) {
  std::vector<std::uint32_t> rev(m, 0);
  int lg = 0;
  while ((1 << lg) < m) ++lg;
  for (int i = 1; i < m; ++i) rev[i] = (rev[i >> 1] >> 1) | ((i & 1u) << (lg - 1));
  return rev;
}

// Stage-packed roots: twiddle[half + j] = exp(-2 pi i j / (2*half)).
std::vector<std::complex<double>> make_twiddle(int m) {
  std::vector<std::complex<double>> tw(m, std::complex<double>(0.0, 0.0));
  for (int len = 2; len <= m; len <<= 1) {
    const int half = len >> 1;
    for (int j = 0; j < half; ++j) {
      const double ang = -2.0 * std::numbers::pi_v<double> * j / len;
      tw[half + j] = std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }
  return tw;
}

void radix2(const FftPlan& p, std::complex<double>* a, int sign) {
  const int m = p.m;
  for (int i = 0; i < m; ++i) {
    const int j = static_cast<int>(p.bitrev[i]);
    if (j > i) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= m; len <<= 1) {
    const int half = len >> 1;
    const std::complex<double>* tw = p.twiddle.data() + half;
    for (int base = 0; base < m; base += len) {
      for (int j = 0; j < half; ++j) {
        const std::complex<double> w = (sign < 0) ? tw[j] : std::conj(tw[j]);
        const std::complex<double> t = a[base + j + half] * w;
        a[base + j + half] = a[base + j] - t;
        a[base + j] += t;
      }
    }
  }
}

// Chirp-z: X_k = chirp_k * IFFT_m( FFT_m(x_j chirp_j) . chirp_fft )_k.
// Handles the forward transform; the caller conjugates around it for sign=+1.
void bluestein_forward(const FftPlan& p, std::complex<double>* row,
                       std::complex<double>* scratch) {
  const int n = p.n;
  const int m = p.m;
  for (int j = 0; j < n; ++j) scratch[j] = row[j] * p.chirp[j];
  for (int j = n; j < m; ++j) scratch[j] = std::complex<double>(0.0, 0.0);
  radix2(p, scratch, -1);
  for (int j = 0; j < m; ++j) scratch[j] *= p.chirp_fft[j];
  radix2(p, scratch, +1);
  const double inv_m = 1.0 / m;
  for (int k = 0; k < n; ++k) row[k] = scratch[k] * p.chirp[k] * inv_m;
}

}  // namespace

std::shared_ptr<const FftPlan> make_plan(int n) {
  if (n < 8 || (n % 2) != 0)
    throw config_error("grid size must be even and at least 8, got " + std::to_string(n));
  auto plan = std::make_shared<FftPlan>();
  plan->n = n;
  plan->pow2 = is_pow2(n);
  plan->m = plan->pow2 ? n : next_pow2(2 * n - 1);
  plan->bitrev = make_bitrev(plan->m);
  plan->twiddle = make_twiddle(plan->m);
  if (!plan->pow2) {
    plan->chirp.resize(n);
    for (int j = 0; j < n; ++j) {
      // j^2 mod 2n keeps the angle bounded; exp is 2 pi periodic in (j^2/2n).
      const long long q = (static_cast<long long>(j) * j) % (2LL * n);
      const double ang = -std::numbers::pi_v<double> * static_cast<double>(q) / n;
      plan->chirp[j] = std::complex<double>(std::cos(ang), std::sin(ang));
    }
    std::vector<std::complex<double>> b(plan->m, std::complex<double>(0.0, 0.0));
    b[0] = std::conj(plan->chirp[0]);
    for (int j = 1; j < n; ++j) {
      b[j] = std::conj(plan->chirp[j]);
      b[plan->m - j] = std::conj(plan->chirp[j]);
    }
    radix2(*plan, b.data(), -1);
    plan->chirp_fft = std::move(b);
  }
  return plan;
}

void fft1d(const FftPlan& plan, std::complex<double>* row, int sign,
           std::complex<double>* scratch) {
  if (plan.pow2) {
    radix2(plan, row, sign);
    return;
  }
  if (sign > 0) {
    for (int j = 0; j < plan.n; ++j) row[j] = std::conj(row[j]);
    bluestein_forward(plan, row, scratch);
    for (int j = 0; j < plan.n; ++j) row[j] = std::conj(row[j]);
  } else {
    bluestein_forward(plan, row, scratch);
  }
}

void fft2d(const FftPlan& plan, std::complex<double>* data, int sign) {
  const int n = plan.n;
  const std::size_t scr = plan.pow2 ? 0 : static_cast<std::size_t>(plan.m);
#pragma omp parallel
  {
    std::vector<std::complex<double>> scratch(scr);
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) fft1d(plan, data + static_cast<std::size_t>(i) * n, sign, scratch.data());

    std::vector<std::complex<double>> col(n);
#pragma omp for schedule(static)
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) col[i] = data[static_cast<std::size_t>(i) * n + j];
      fft1d(plan, col.data(), sign, scratch.data());
      for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(i) * n + j] = col[i];
    }
  }
}

namespace serialref {

void fft2d(const FftPlan& plan, std::complex<double>* data, int sign) {
  const int n = plan.n;
  std::vector<std::complex<double>> scratch(plan.pow2 ? 0 : static_cast<std::size_t>(plan.m));
  for (int i = 0; i < n; ++i) fft1d(plan, data + static_cast<std::size_t>(i) * n, sign, scratch.data());
  std::vector<std::complex<double>> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = data[static_cast<std::size_t>(i) * n + j];
    fft1d(plan, col.data(), sign, scratch.data());
    for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(i) * n + j] = col[i];
  }
}

}  // namespace serialref

}  // namespace nemflow
