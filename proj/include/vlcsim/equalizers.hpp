#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "vlcsim/constellation.hpp"
#include "vlcsim/geometry.hpp"
#include "vlcsim/matrix.hpp"

namespace vlc {

// x_hat = output_offset + G * (r - input_offset)
struct LinearEqualizer {
  std::string kind;  // "zf" or "lmmse"
  Mat gain;          // streams x receivers
  std::vector<double> input_offset;
  std::vector<double> output_offset;
  std::vector<std::string> warnings;

  Mat apply(const Mat& R) const;  // receivers x symbols -> streams x symbols
};

LinearEqualizer build_zf(const ChannelMatrix& H);
LinearEqualizer build_lmmse(const ChannelMatrix& H, const PamConstellation& c, double noise_var);

// independent per-stream polynomial cleanup fitted on training pairs;
// the polynomial argument is centered and scaled by the training statistics
// for conditioning, coefficients are stored constant first in that variable
struct Postdistorter {
  std::size_t order = 0;
  std::vector<double> centers;               // per stream
  std::vector<double> scales;                // per stream
  std::vector<std::vector<double>> coeffs;   // streams x (order + 1)
  std::vector<double> residual_rms;          // per stream, at the fit

  double apply_one(std::size_t stream, double x) const;
  Mat apply(const Mat& X) const;
};

Postdistorter fit_postdistorter(const Mat& equalized, const Mat& symbols, std::size_t order);

Mat equalize_and_postdistort(const LinearEqualizer& eq, const Postdistorter& pd, const Mat& R);

void save_equalizer_text(const LinearEqualizer& eq, const std::string& path);
LinearEqualizer load_equalizer_text(const std::string& path);
void save_postdistorter_text(const Postdistorter& pd, const std::string& path);
Postdistorter load_postdistorter_text(const std::string& path);

}  // namespace vlc
