#include "vlcsim/frontend.hpp"

#include <cmath>
#include <ostream>

#include "vlcsim/textio.hpp"

namespace vlc {

Mat draw_symbol_frame(const PamConstellation& c, std::size_t n_tx, std::size_t n_symbols,
                      Prng& rng) {
  c.validate();
  require(n_tx > 0 && n_symbols > 0, "frame dimensions must be positive");
  Mat X(n_tx, n_symbols);
  const std::size_t j = c.order();
  for (std::size_t u = 0; u < n_symbols; ++u) {
    for (std::size_t p = 0; p < n_tx; ++p) {
      std::size_t idx = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(j));
      if (idx >= j) idx = j - 1;
      X(p, u) = c.levels[idx];
    }
  }
  return X;
}

Mat transmit_frame(const ChannelMatrix& H, const PolynomialNonlinearity& nl, const Mat& X,
                   double noise_var, Prng& noise_rng) {
  require(X.rows == H.gains.cols, "frame streams do not match channel inputs");
  require(noise_var >= 0.0, "noise variance must be nonnegative");
  const Mat driven = nl.apply(X);
  Mat R(H.gains.rows, X.cols);
  // plain accumulation keeps the noiseless path reproducible down to the last bit
  for (std::size_t q = 0; q < R.rows; ++q) {
    const double* hq = H.gains.row_ptr(q);
    for (std::size_t u = 0; u < R.cols; ++u) {
      double s = 0.0;
      for (std::size_t p = 0; p < X.rows; ++p) s += hq[p] * driven(p, u);
      R(q, u) = s;
    }
  }
  if (noise_var > 0.0) {
    const double sigma = std::sqrt(noise_var);
    for (std::size_t u = 0; u < R.cols; ++u)
      for (std::size_t q = 0; q < R.rows; ++q) R(q, u) += sigma * noise_rng.gauss();
  }
  return R;
}

double measure_signal_power(const ChannelMatrix& H, const PolynomialNonlinearity& nl,
                            const PamConstellation& c, std::size_t n_symbols, Prng& rng) {
  require(n_symbols > 0, "need at least one probe symbol");
  const Mat X = draw_symbol_frame(c, H.gains.cols, n_symbols, rng);
  const Mat R = transmit_frame(H, nl, X, 0.0, rng);
  double s = 0.0;
  for (double v : R.a) s += v * v;
  return s / static_cast<double>(R.size());
}

double noise_variance_for_snr(double signal_power, double snr_db) {
  require(signal_power > 0.0, "signal power must be positive");
  return signal_power / std::pow(10.0, snr_db / 10.0);
}

double calibrate_noise_variance(const ChannelMatrix& H, const PolynomialNonlinearity& nl,
                                const PamConstellation& c, double snr_db,
                                std::size_t n_symbols, Prng& rng) {
  return noise_variance_for_snr(measure_signal_power(H, nl, c, n_symbols, rng), snr_db);
}

TrainingSet make_training_set(const ChannelMatrix& H, const PolynomialNonlinearity& nl,
                              const PamConstellation& c, std::size_t n_symbols,
                              double noise_var, Prng& symbol_rng, Prng& noise_rng) {
  TrainingSet set;
  set.symbols = draw_symbol_frame(c, H.gains.cols, n_symbols, symbol_rng);
  set.received = transmit_frame(H, nl, set.symbols, noise_var, noise_rng);
  return set;
}

void write_frame_csv(const Mat& frame, std::ostream& os) {
  require(!frame.empty(), "nothing to write");
  os << "# format=1\n";
  os << "symbol_index";
  for (std::size_t p = 0; p < frame.rows; ++p) os << ", stream_" << p;
  os << '\n';
  for (std::size_t u = 0; u < frame.cols; ++u) {
    os << u;
    for (std::size_t p = 0; p < frame.rows; ++p) os << ", " << g17(frame(p, u));
    os << '\n';
  }
}

}  // namespace vlc
