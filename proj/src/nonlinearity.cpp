#include "vlcsim/nonlinearity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace vlc {

void PolynomialNonlinearity::validate() const {
  require(!coeffs.empty(), "nonlinearity needs at least one coefficient");
  bool any = false;
  for (double c : coeffs) {
    require(std::isfinite(c), "nonlinearity coefficients must be finite");
    if (c != 0.0) any = true;
  }
  require(any, "nonlinearity needs a nonzero coefficient");
}

double PolynomialNonlinearity::apply(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("nonlinearity input must be finite");
  // Horner on a_K..a_1, then one final multiply for the missing constant term
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc * x;
}

Mat PolynomialNonlinearity::apply(const Mat& x) const {
  Mat y(x.rows, x.cols);
  for (std::size_t i = 0; i < x.size(); ++i) y.a[i] = apply(x.a[i]);
  return y;
}

bool PolynomialNonlinearity::is_identity() const {
  if (coeffs.empty() || coeffs[0] != 1.0) return false;
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    if (coeffs[k] != 0.0) return false;
  return true;
}

bool PolynomialNonlinearity::strictly_increasing_on(double lo, double hi) const {
  double prev = apply(lo);
  for (double v = lo + 1e-4; v <= hi + 1e-12; v += 1e-4) {
    double cur = apply(v);
    if (!(cur > prev)) return false;
    prev = cur;
  }
  return true;
}

PolynomialNonlinearity fit_polynomial_iv(const std::vector<std::pair<double, double>>& samples,
                                         int order) {
  require(order >= 1, "fit order must be >= 1");
  std::vector<double> vs;
  for (const auto& s : samples)
    if (std::find(vs.begin(), vs.end(), s.first) == vs.end()) vs.push_back(s.first);
  require(static_cast<int>(vs.size()) >= order, "need at least K distinct voltages");

  const std::size_t m = samples.size();
  Eigen::MatrixXd A(m, order);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = samples[i].first;
    double p = 1.0;
    for (int k = 0; k < order; ++k) {
      p *= v;  // v^(k+1), no constant column
      A(i, k) = p;
    }
    b(i) = samples[i].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < order) throw std::runtime_error("rank-deficient design matrix in I-V fit");
  Eigen::VectorXd x = qr.solve(b);

  PolynomialNonlinearity nl;
  nl.coeffs.assign(x.data(), x.data() + order);
  nl.validate();
  return nl;
}

std::vector<std::pair<double, double>> read_iv_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open I-V table: " + path);
  std::vector<std::pair<double, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    double v, i;
    if (ss >> v >> i) out.emplace_back(v, i);
    // header rows and blanks fall through silently
  }
  if (out.empty()) throw std::runtime_error("no (volts, amps) rows in " + path);
  return out;
}

void write_coeffs_text(const PolynomialNonlinearity& nl, std::ostream& os) {
  char buf[32];
  for (std::size_t k = 0; k < nl.coeffs.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", nl.coeffs[k]);
    os << (k ? " " : "") << buf;
  }
  os << "\n";
}

PolynomialNonlinearity read_coeffs_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coefficient file: " + path);
  PolynomialNonlinearity nl;
  double c;
  while (in >> c) nl.coeffs.push_back(c);
  nl.validate();
  return nl;
}

}  // namespace vlc
