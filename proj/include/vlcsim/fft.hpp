#pragma once
#include <complex>
#include <cstddef>
#include <vector>

namespace vlc {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);
std::size_t log2_exact(std::size_t n);

// radix-2 transform with 1/sqrt(n) applied in both directions, so
// forward followed by inverse is the identity up to rounding
struct FftPlan {
  std::size_t n = 0;
  std::vector<std::size_t> rev;
  std::vector<cplx> tw;  // exp(-2*pi*i*k/n) for k < n/2
  double scale = 1.0;

  FftPlan() = default;
  explicit FftPlan(std::size_t size);
  void execute(cplx* x, bool inverse) const;  // in place
};

std::vector<cplx> fft(const std::vector<cplx>& x);
std::vector<cplx> ifft(const std::vector<cplx>& x);
std::vector<cplx> fft_real(const std::vector<double>& x);

}  // namespace vlc
