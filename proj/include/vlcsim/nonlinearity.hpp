#pragma once
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "vlcsim/matrix.hpp"

namespace vlc {

// memoryless polynomial drive curve y = sum_{k=1..K} a_k x^k (no constant term)
struct PolynomialNonlinearity {
  std::vector<double> coeffs;  // a_1 .. a_K

  int order() const { return static_cast<int>(coeffs.size()); }
  void validate() const;
  double apply(double x) const;
  Mat apply(const Mat& x) const;
  bool is_identity() const;

  // strict monotonicity probe on a 1e-4 V grid, needed for decodability
  bool strictly_increasing_on(double lo, double hi) const;
};

PolynomialNonlinearity fit_polynomial_iv(const std::vector<std::pair<double, double>>& samples,
                                         int order);

std::vector<std::pair<double, double>> read_iv_csv(const std::string& path);
void write_coeffs_text(const PolynomialNonlinearity& nl, std::ostream& os);
PolynomialNonlinearity read_coeffs_text(const std::string& path);

}  // namespace vlc
