#include "vlcsim/fft.hpp"

#include <cmath>
#include <utility>

#include "vlcsim/matrix.hpp"

namespace vlc {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  require(is_power_of_two(n), "transform length must be a power of two");
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

FftPlan::FftPlan(std::size_t size) : n(size) {
  const std::size_t bits = log2_exact(n);
  rev.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0, v = i;
    for (std::size_t b = 0; b < bits; ++b) {
      r = (r << 1) | (v & 1u);
      v >>= 1;
    }
    rev[i] = r;
  }
  tw.resize(n / 2);
  const double step = -2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2; ++k)
    tw[k] = cplx(std::cos(step * static_cast<double>(k)), std::sin(step * static_cast<double>(k)));
  scale = 1.0 / std::sqrt(static_cast<double>(n));
}

void FftPlan::execute(cplx* x, bool inverse) const {
  for (std::size_t i = 0; i < n; ++i)
    if (rev[i] > i) std::swap(x[i], x[rev[i]]);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = tw[k * stride];
        if (inverse) w = std::conj(w);
        const cplx u = x[base + k];
        const cplx v = x[base + k + half] * w;
        x[base + k] = u + v;
        x[base + k + half] = u - v;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) x[i] *= scale;
}

std::vector<cplx> fft(const std::vector<cplx>& x) {
  std::vector<cplx> out = x;
  FftPlan(out.size()).execute(out.data(), false);
  return out;
}

std::vector<cplx> ifft(const std::vector<cplx>& x) {
  std::vector<cplx> out = x;
  FftPlan(out.size()).execute(out.data(), true);
  return out;
}

std::vector<cplx> fft_real(const std::vector<double>& x) {
  std::vector<cplx> buf(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = cplx(x[i], 0.0);
  FftPlan(buf.size()).execute(buf.data(), false);
  return buf;
}

}  // namespace vlc
