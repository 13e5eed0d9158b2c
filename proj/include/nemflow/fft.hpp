#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace nemflow {

// Precomputed tables for one transform size. Power-of-two sizes use the
// iterative radix-2 kernel directly; other even sizes go through Bluestein's
// chirp-z reduction to a padded power-of-two convolution.
struct FftPlan {
  int n = 0;
  bool pow2 = false;

  // radix-2 tables (for n itself when pow2, else for the Bluestein pad size m)
  int m = 0;                                   // pow2 working size
  std::vector<std::uint32_t> bitrev;           // size m
  std::vector<std::complex<double>> twiddle;   // stage-packed roots, size m
  // Bluestein tables (empty when pow2)
  std::vector<std::complex<double>> chirp;     // e^{-i pi j^2 / n}, size n
  std::vector<std::complex<double>> chirp_fft; // FFT of the padded conjugate chirp, size m

  std::size_t scratch_doubles() const { return static_cast<std::size_t>(pow2 ? n : m) * 2; }
};

std::shared_ptr<const FftPlan> make_plan(int n);

// In-place unnormalized 1D transform of one contiguous row of plan.n values.
// sign = -1 forward, +1 inverse. scratch must hold plan.scratch_doubles()/2
// complex values; unused for pow2 sizes.
void fft1d(const FftPlan& plan, std::complex<double>* row, int sign,
           std::complex<double>* scratch);

// In-place unnormalized 2D transform (rows then columns) of an n x n
// row-major array. Rows and columns are independent 1D transforms, so the
// OpenMP variant assigns whole lines to threads and is bitwise identical to
// the serial reference for every thread count.
void fft2d(const FftPlan& plan, std::complex<double>* data, int sign);

namespace serialref {
// Reference implementation with the parallel pragmas stripped; kept for
// bitwise cross-checks in the tests and as the benchmark baseline.
void fft2d(const FftPlan& plan, std::complex<double>* data, int sign);
}  // namespace serialref

}  // namespace nemflow
