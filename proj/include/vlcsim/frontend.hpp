#pragma once
#include <cstddef>
#include <iosfwd>

#include "vlcsim/constellation.hpp"
#include "vlcsim/geometry.hpp"
#include "vlcsim/matrix.hpp"
#include "vlcsim/nonlinearity.hpp"
#include "vlcsim/rng.hpp"

namespace vlc {

struct TrainingSet {
  Mat received;  // receivers x symbols
  Mat symbols;   // transmitters x symbols, drive levels
};

// transmitters x symbols matrix of levels drawn uniformly; draws run
// symbol by symbol, transmitter-major inside a symbol
Mat draw_symbol_frame(const PamConstellation& c, std::size_t n_tx, std::size_t n_symbols,
                      Prng& rng);

// R = H * I(X) + noise, one gaussian draw per photodiode per symbol,
// same draw order as draw_symbol_frame
Mat transmit_frame(const ChannelMatrix& H, const PolynomialNonlinearity& nl, const Mat& X,
                   double noise_var, Prng& noise_rng);

// mean squared noiseless receive amplitude over photodiodes and symbols
double measure_signal_power(const ChannelMatrix& H, const PolynomialNonlinearity& nl,
                            const PamConstellation& c, std::size_t n_symbols, Prng& rng);

double noise_variance_for_snr(double signal_power, double snr_db);

// convenience wrapper over the two steps above
double calibrate_noise_variance(const ChannelMatrix& H, const PolynomialNonlinearity& nl,
                                const PamConstellation& c, double snr_db,
                                std::size_t n_symbols, Prng& rng);

TrainingSet make_training_set(const ChannelMatrix& H, const PolynomialNonlinearity& nl,
                              const PamConstellation& c, std::size_t n_symbols,
                              double noise_var, Prng& symbol_rng, Prng& noise_rng);

// one row per symbol with a stream_<k> column per matrix row
void write_frame_csv(const Mat& frame, std::ostream& os);

}  // namespace vlc
