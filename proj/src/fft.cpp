#include "dp/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

namespace dp::fft {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Plan::Plan(std::size_t n) : n_(n) {
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
  bitrev_.resize(n);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = {std::cos(ang), std::sin(ang)};
  }
}

void Plan::transform(cplx* a, bool inverse) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = bitrev_[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cplx w = twiddle_[j * stride];
        if (inverse) w = std::conj(w);
        cplx t = a[base + j + half] * w;
        cplx u = a[base + j];
        a[base + j] = u + t;
        a[base + j + half] = u - t;
      }
    }
  }
}

void Plan::forward(cplx* data) const { transform(data, false); }
void Plan::backward(cplx* data) const { transform(data, true); }

RealPlan::RealPlan(std::size_t n) : n_(n), half_(n / 2) {
  if (!is_pow2(n) || n < 4) throw std::invalid_argument("fft: real size must be a power of two >= 4");
  unpack_.resize(n / 2 + 1);
  for (std::size_t m = 0; m <= n / 2; ++m) {
    double ang = -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n);
    unpack_[m] = {std::cos(ang), std::sin(ang)};
  }
  scratch_.resize(n / 2);
}

void RealPlan::forward(const double* in, cplx* out) const {
  const std::size_t h = n_ / 2;
  for (std::size_t j = 0; j < h; ++j) scratch_[j] = {in[2 * j], in[2 * j + 1]};
  half_.forward(scratch_.data());
  // Z[m] = E[m] + i*O[m] with E,O the even/odd-sample spectra; recombine.
  for (std::size_t m = 0; m <= h; ++m) {
    cplx z = scratch_[m % h];
    cplx zc = std::conj(scratch_[(h - m) % h]);
    cplx even = 0.5 * (z + zc);
    cplx odd = cplx(0, -0.5) * (z - zc);
    out[m] = even + unpack_[m] * odd;
  }
  out[0] = cplx(out[0].real(), 0.0);
  out[h] = cplx(out[h].real(), 0.0);
}

void RealPlan::inverse(const cplx* in, double* out) const {
  const std::size_t h = n_ / 2;
  for (std::size_t m = 0; m < h; ++m) {
    cplx a = in[m];
    cplx b = std::conj(in[h - m]);
    cplx even = 0.5 * (a + b);
    cplx odd = 0.5 * (a - b) * std::conj(unpack_[m]);
    scratch_[m] = even + cplx(0, 1) * odd;
  }
  half_.backward(scratch_.data());
  const double s = 1.0 / static_cast<double>(h);
  for (std::size_t j = 0; j < h; ++j) {
    out[2 * j] = s * scratch_[j].real();
    out[2 * j + 1] = s * scratch_[j].imag();
  }
}

const RealPlan& real_plan(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<RealPlan>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<RealPlan>(n)).first;
  return *it->second;
}

}  // namespace dp::fft
