#pragma once
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vlc {

// row-major dense matrix, the exchange type across the public API
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  std::size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }

  const double* row_ptr(std::size_t r) const { return a.data() + r * cols; }
  double* row_ptr(std::size_t r) { return a.data() + r * cols; }

  std::vector<double> col(std::size_t c) const {
    std::vector<double> v(rows);
    for (std::size_t r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
  }
};

inline void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace vlc
