#include "vlcsim/normalization.hpp"

#include <cmath>

namespace vlc {

void InputNormalization::apply_inplace(double* r, std::size_t n) const {
  if (!enabled) return;
  require(offsets.size() == n, "normalization offsets do not match input size");
  for (std::size_t i = 0; i < n; ++i) r[i] = gain * (r[i] - offsets[i]);
}

std::vector<double> InputNormalization::apply(const double* r, std::size_t n) const {
  std::vector<double> out(r, r + n);
  apply_inplace(out.data(), n);
  return out;
}

Mat InputNormalization::apply(const Mat& R) const {
  Mat out = R;
  if (!enabled) return out;
  require(offsets.size() == R.rows, "normalization offsets do not match input size");
  for (std::size_t q = 0; q < R.rows; ++q)
    for (std::size_t u = 0; u < R.cols; ++u) out(q, u) = gain * (out(q, u) - offsets[q]);
  return out;
}

InputNormalization fit_center_scale(const Mat& R, double target_rms) {
  require(R.rows > 0 && R.cols > 0, "cannot fit normalization on an empty matrix");
  require(target_rms > 0.0, "target rms must be positive");
  InputNormalization norm;
  norm.enabled = true;
  norm.offsets.resize(R.rows);
  for (std::size_t q = 0; q < R.rows; ++q) {
    double s = 0.0;
    for (std::size_t u = 0; u < R.cols; ++u) s += R(q, u);
    norm.offsets[q] = s / static_cast<double>(R.cols);
  }
  double sq = 0.0;
  for (std::size_t q = 0; q < R.rows; ++q) {
    for (std::size_t u = 0; u < R.cols; ++u) {
      const double c = R(q, u) - norm.offsets[q];
      sq += c * c;
    }
  }
  const double rms = std::sqrt(sq / static_cast<double>(R.rows * R.cols));
  require(rms > 0.0, "inputs are constant, cannot scale them");
  norm.gain = target_rms / rms;
  return norm;
}

}  // namespace vlc
