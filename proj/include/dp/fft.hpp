#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dp::fft {

using cplx = std::complex<double>;

/// Radix-2 FFT plan for a fixed power-of-two size. Twiddles and the
/// bit-reversal permutation are precomputed once per size.
class Plan {
 public:
  explicit Plan(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place forward transform, X[m] = sum_j x[j] exp(-2*pi*i*j*m/n).
  void forward(cplx* data) const;
  /// In-place unnormalized inverse (forward with conjugated twiddles).
  void backward(cplx* data) const;

 private:
  void transform(cplx* data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> twiddle_;   // w_n^j, j in [0, n/2)
};

/// Half-spectrum of a real signal: bins 0..n/2, bin 0 and n/2 purely real.
/// forward is unnormalized; inverse divides by n.
class RealPlan {
 public:
  explicit RealPlan(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(const double* in, cplx* out) const;  // out has n/2+1 bins
  void inverse(const cplx* in, double* out) const;

 private:
  std::size_t n_;
  Plan half_;
  std::vector<cplx> unpack_;           // exp(-pi*i*m/ (n/2)) table
  mutable std::vector<cplx> scratch_;  // n/2 packed values
};

/// Per-thread plan cache keyed on size.
const RealPlan& real_plan(std::size_t n);

}  // namespace dp::fft
