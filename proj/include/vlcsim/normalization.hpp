#pragma once
#include <cstddef>
#include <vector>

#include "vlcsim/matrix.hpp"

namespace vlc {

// affine input conditioning shared by a model and its saved form:
// each input channel is shifted by its offset, then everything is
// multiplied by one global gain
struct InputNormalization {
  bool enabled = false;
  std::vector<double> offsets;
  double gain = 1.0;

  void apply_inplace(double* r, std::size_t n) const;
  std::vector<double> apply(const double* r, std::size_t n) const;
  Mat apply(const Mat& R) const;  // channels x symbols
};

// offsets = per-channel means of R, gain chosen so the conditioned
// entries have root-mean-square target_rms
InputNormalization fit_center_scale(const Mat& R, double target_rms);

}  // namespace vlc
