#include "vlcsim/equalizers.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "vlcsim/textio.hpp"

namespace vlc {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapT = Eigen::Map<RowMat>;
using CMapT = Eigen::Map<const RowMat>;

CMapT map_of(const Mat& m) {
  return CMapT(m.a.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
}

}  // namespace

Mat LinearEqualizer::apply(const Mat& R) const {
  require(R.rows == gain.cols, "receive rows do not match the equalizer");
  require(R.cols > 0, "no symbols to equalize");
  Mat out(gain.rows, R.cols);
  CMapT g = map_of(gain);
  CMapT r = map_of(R);
  MapT o(out.a.data(), static_cast<Eigen::Index>(out.rows), static_cast<Eigen::Index>(out.cols));
  Eigen::Map<const Eigen::VectorXd> ioff(input_offset.data(),
                                         static_cast<Eigen::Index>(input_offset.size()));
  Eigen::Map<const Eigen::VectorXd> ooff(output_offset.data(),
                                         static_cast<Eigen::Index>(output_offset.size()));
  const Eigen::VectorXd base = ooff - g * ioff;
  o.noalias() = g * r;
  o.colwise() += base;
  return out;
}

LinearEqualizer build_zf(const ChannelMatrix& H) {
  const Mat& h = H.gains;
  require(h.rows >= h.cols && h.cols > 0, "channel must have at least as many receivers as streams");
  CMapT hm = map_of(h);
  const Eigen::MatrixXd gram = hm.transpose() * hm;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  require(lu.isInvertible(), "channel matrix is rank deficient");
  LinearEqualizer eq;
  eq.kind = "zf";
  eq.gain = Mat(h.cols, h.rows);
  MapT g(eq.gain.a.data(), static_cast<Eigen::Index>(h.cols), static_cast<Eigen::Index>(h.rows));
  g.noalias() = lu.solve(hm.transpose());
  eq.input_offset.assign(h.rows, 0.0);
  eq.output_offset.assign(h.cols, 0.0);
  return eq;
}

LinearEqualizer build_lmmse(const ChannelMatrix& H, const PamConstellation& c, double noise_var) {
  c.validate();
  require(noise_var >= 0.0, "noise variance must be nonnegative");
  const Mat& h = H.gains;
  require(h.rows > 0 && h.cols > 0, "empty channel matrix");
  const double mu = c.mean();
  const double var = c.variance();
  require(var > 0.0, "constellation has no spread");
  CMapT hm = map_of(h);
  LinearEqualizer eq;
  eq.kind = "lmmse";
  Eigen::MatrixXd s = var * (hm * hm.transpose());
  s.diagonal().array() += noise_var;
  if (noise_var == 0.0) {
    const double jitter = 1e-12 * s.trace() / static_cast<double>(h.rows);
    s.diagonal().array() += jitter;
    eq.warnings.push_back("zero noise variance makes the receive covariance singular, "
                          "added diagonal jitter " + g17(jitter));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-12 * s.trace() / static_cast<double>(h.rows);
    s.diagonal().array() += jitter;
    eq.warnings.push_back("receive covariance was not positive definite, added diagonal jitter " +
                          g17(jitter));
    llt.compute(s);
    require(llt.info() == Eigen::Success, "receive covariance cannot be factorized");
  }
  eq.gain = Mat(h.cols, h.rows);
  MapT g(eq.gain.a.data(), static_cast<Eigen::Index>(h.cols), static_cast<Eigen::Index>(h.rows));
  g.noalias() = var * llt.solve(hm).transpose();
  eq.input_offset.resize(h.rows);
  for (std::size_t q = 0; q < h.rows; ++q) {
    double s_row = 0.0;
    for (std::size_t p = 0; p < h.cols; ++p) s_row += h(q, p);
    eq.input_offset[q] = mu * s_row;
  }
  eq.output_offset.assign(h.cols, mu);
  return eq;
}

double Postdistorter::apply_one(std::size_t stream, double x) const {
  require(stream < coeffs.size(), "no such stream");
  const double z = (x - centers[stream]) / scales[stream];
  const std::vector<double>& c = coeffs[stream];
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

Mat Postdistorter::apply(const Mat& X) const {
  require(X.rows == coeffs.size(), "stream count does not match the cleanup stage");
  Mat out(X.rows, X.cols);
  for (std::size_t n = 0; n < X.rows; ++n)
    for (std::size_t u = 0; u < X.cols; ++u) out(n, u) = apply_one(n, X(n, u));
  return out;
}

Postdistorter fit_postdistorter(const Mat& equalized, const Mat& symbols, std::size_t order) {
  require(order >= 1, "cleanup order must be at least one");
  require(equalized.rows == symbols.rows && equalized.cols == symbols.cols,
          "training pair shapes disagree");
  require(equalized.rows > 0, "no streams to fit");
  const std::size_t m = equalized.cols;
  const std::size_t terms = order + 1;
  require(m > terms, "not enough training symbols for the requested order");
  Postdistorter pd;
  pd.order = order;
  pd.centers.resize(equalized.rows);
  pd.scales.resize(equalized.rows);
  pd.coeffs.resize(equalized.rows);
  pd.residual_rms.resize(equalized.rows);
  for (std::size_t n = 0; n < equalized.rows; ++n) {
    double mean = 0.0;
    for (std::size_t u = 0; u < m; ++u) mean += equalized(n, u);
    mean /= static_cast<double>(m);
    double spread = 0.0;
    for (std::size_t u = 0; u < m; ++u) {
      const double d = equalized(n, u) - mean;
      spread += d * d;
    }
    spread = std::sqrt(spread / static_cast<double>(m));
    require(spread > 0.0, "training values have no spread, cannot fit a cleanup polynomial");
    pd.centers[n] = mean;
    pd.scales[n] = spread;
    Eigen::MatrixXd v(m, terms);
    for (std::size_t u = 0; u < m; ++u) {
      const double z = (equalized(n, u) - mean) / spread;
      double p = 1.0;
      for (std::size_t k = 0; k < terms; ++k) {
        v(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(k)) = p;
        p *= z;
      }
    }
    Eigen::VectorXd x(m);
    for (std::size_t u = 0; u < m; ++u) x(static_cast<Eigen::Index>(u)) = symbols(n, u);
    // fewer distinct values than terms still fits fine, the solve keeps
    // the pivoted columns and the redundant degrees drop out
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    const Eigen::VectorXd c = qr.solve(x);
    pd.coeffs[n].assign(c.data(), c.data() + terms);
    pd.residual_rms[n] = std::sqrt((v * c - x).squaredNorm() / static_cast<double>(m));
  }
  return pd;
}

Mat equalize_and_postdistort(const LinearEqualizer& eq, const Postdistorter& pd, const Mat& R) {
  return pd.apply(eq.apply(R));
}

namespace {

void write_row(std::ofstream& out, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << g17(v[i]);
  }
  out << '\n';
}

}  // namespace

void save_equalizer_text(const LinearEqualizer& eq, const std::string& path) {
  std::ofstream out(path);
  require(out.is_open(), "cannot open equalizer file for writing");
  out << "equalizer 1\nkind " << eq.kind << '\n';
  out << "streams " << eq.gain.rows << "\nreceivers " << eq.gain.cols << '\n';
  out << "gain\n";
  for (std::size_t n = 0; n < eq.gain.rows; ++n) write_row(out, eq.gain.row_ptr(n), eq.gain.cols);
  out << "input_offset ";
  write_row(out, eq.input_offset.data(), eq.input_offset.size());
  out << "output_offset ";
  write_row(out, eq.output_offset.data(), eq.output_offset.size());
  require(out.good(), "failed while writing equalizer file");
}

LinearEqualizer load_equalizer_text(const std::string& path) {
  std::ifstream in(path);
  require(in.is_open(), "cannot open equalizer file");
  const char* bad = "malformed equalizer file";
  expect_word(in, "equalizer", bad);
  require(static_cast<int>(read_num(in, bad)) == 1, "unsupported equalizer format");
  LinearEqualizer eq;
  expect_word(in, "kind", bad);
  in >> eq.kind;
  require(static_cast<bool>(in), bad);
  expect_word(in, "streams", bad);
  const std::size_t streams = static_cast<std::size_t>(read_num(in, bad));
  expect_word(in, "receivers", bad);
  const std::size_t receivers = static_cast<std::size_t>(read_num(in, bad));
  require(streams > 0 && receivers > 0, bad);
  expect_word(in, "gain", bad);
  eq.gain = Mat(streams, receivers);
  for (double& v : eq.gain.a) v = read_num(in, bad);
  expect_word(in, "input_offset", bad);
  eq.input_offset.resize(receivers);
  for (double& v : eq.input_offset) v = read_num(in, bad);
  expect_word(in, "output_offset", bad);
  eq.output_offset.resize(streams);
  for (double& v : eq.output_offset) v = read_num(in, bad);
  return eq;
}

void save_postdistorter_text(const Postdistorter& pd, const std::string& path) {
  std::ofstream out(path);
  require(out.is_open(), "cannot open cleanup file for writing");
  out << "postdistorter 1\norder " << pd.order << "\nstreams " << pd.coeffs.size() << '\n';
  out << "centers ";
  write_row(out, pd.centers.data(), pd.centers.size());
  out << "scales ";
  write_row(out, pd.scales.data(), pd.scales.size());
  out << "coeffs\n";
  for (const std::vector<double>& c : pd.coeffs) write_row(out, c.data(), c.size());
  out << "residual_rms ";
  write_row(out, pd.residual_rms.data(), pd.residual_rms.size());
  require(out.good(), "failed while writing cleanup file");
}

Postdistorter load_postdistorter_text(const std::string& path) {
  std::ifstream in(path);
  require(in.is_open(), "cannot open cleanup file");
  const char* bad = "malformed cleanup file";
  expect_word(in, "postdistorter", bad);
  require(static_cast<int>(read_num(in, bad)) == 1, "unsupported cleanup format");
  Postdistorter pd;
  expect_word(in, "order", bad);
  pd.order = static_cast<std::size_t>(read_num(in, bad));
  expect_word(in, "streams", bad);
  const std::size_t streams = static_cast<std::size_t>(read_num(in, bad));
  require(pd.order >= 1 && streams > 0, bad);
  expect_word(in, "centers", bad);
  pd.centers.resize(streams);
  for (double& v : pd.centers) v = read_num(in, bad);
  expect_word(in, "scales", bad);
  pd.scales.resize(streams);
  for (double& v : pd.scales) v = read_num(in, bad);
  expect_word(in, "coeffs", bad);
  pd.coeffs.assign(streams, std::vector<double>(pd.order + 1));
  for (std::vector<double>& c : pd.coeffs)
    for (double& v : c) v = read_num(in, bad);
  expect_word(in, "residual_rms", bad);
  pd.residual_rms.resize(streams);
  for (double& v : pd.residual_rms) v = read_num(in, bad);
  return pd;
}

}  // namespace vlc
