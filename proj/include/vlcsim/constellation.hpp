#pragma once
#include <vector>

#include "vlcsim/matrix.hpp"

namespace vlc {

struct PamConstellation {
  std::vector<double> levels;  // strictly ascending, all positive

  void validate() const;
  static PamConstellation uniform(int j, double v_min, double v_max);

  // nearest level; exact midpoints resolve to the lower level
  double detect(double x) const;
  std::vector<double> detect(const std::vector<double>& x) const;
  Mat detect(const Mat& x) const;

  double mean() const;
  double variance() const;
  std::size_t order() const { return levels.size(); }
};

}  // namespace vlc
