#include "vlcsim/constellation.hpp"

#include <cmath>

namespace vlc {

void PamConstellation::validate() const {
  require(levels.size() >= 2, "constellation needs at least two levels");
  require(levels.front() > 0.0, "intensity levels must be positive");
  for (std::size_t j = 1; j < levels.size(); ++j)
    require(levels[j] > levels[j - 1], "levels must be strictly ascending");
}

PamConstellation PamConstellation::uniform(int j, double v_min, double v_max) {
  require(j >= 2 && v_max > v_min, "bad uniform constellation parameters");
  PamConstellation c;
  c.levels.resize(j);
  for (int i = 0; i < j; ++i)
    c.levels[i] = v_min + (v_max - v_min) * static_cast<double>(i) / (j - 1);
  c.validate();
  return c;
}

double PamConstellation::detect(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("cannot detect a non-finite value");
  double best = levels[0];
  double bestd = std::abs(x - levels[0]);
  for (std::size_t j = 1; j < levels.size(); ++j) {
    double d = std::abs(x - levels[j]);
    if (d < bestd) {  // strict: ties keep the lower level
      bestd = d;
      best = levels[j];
    }
  }
  return best;
}

std::vector<double> PamConstellation::detect(const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = detect(x[i]);
  return out;
}

Mat PamConstellation::detect(const Mat& x) const {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.size(); ++i) out.a[i] = detect(x.a[i]);
  return out;
}

double PamConstellation::mean() const {
  double s = 0.0;
  for (double l : levels) s += l;
  return s / levels.size();
}

double PamConstellation::variance() const {
  double m = mean(), s = 0.0;
  for (double l : levels) s += (l - m) * (l - m);
  return s / levels.size();
}

}  // namespace vlc
