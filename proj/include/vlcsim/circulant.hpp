#pragma once
#include <cstdint>
#include <string>

#include "vlcsim/elm.hpp"
#include "vlcsim/fft.hpp"

namespace vlc {

// same receiver as ElmModel, but the hidden weights are the first
// `inputs` columns of the square circulant whose first column is the
// generator, so the hidden product runs through the transform instead
// of a dense multiply
struct CirculantElmModel {
  std::size_t hidden = 0;  // power of two, strictly greater than inputs
  std::size_t inputs = 0;
  std::vector<double> generator;  // length hidden
  std::vector<double> bias;       // length hidden
  Mat output_weights;             // hidden x streams, empty until trained
  std::string activation = "sigmoid";
  std::uint64_t seed = 0;
  InputNormalization norm;

  FftPlan plan;               // rebuilt from hidden
  std::vector<cplx> spectrum;  // plain unnormalized transform of the generator

  void validate() const;
  void rebuild_transform();  // refresh plan and spectrum after generator edits
};

// generator then bias i.i.d. uniform on [-1, 1]
CirculantElmModel init_circulant(std::size_t hidden, std::size_t inputs, std::uint64_t seed,
                                 const std::string& activation = "sigmoid");

std::vector<cplx> circulant_spectrum(const std::vector<double>& generator);

// y = C * pad(r): transform the zero-padded input, multiply by the
// spectrum bin by bin, transform back; an imaginary residue above
// 1e-10 of the result's largest magnitude trips an internal error
std::vector<double> circulant_matvec(const CirculantElmModel& m, const double* r, std::size_t n);

Mat implied_dense_weights(const CirculantElmModel& m);  // hidden x inputs
ElmModel implied_dense_model(const CirculantElmModel& m);

std::vector<double> circulant_hidden_map(const CirculantElmModel& m, const double* r);
Mat circulant_build_hidden_matrix(const CirculantElmModel& m, const Mat& R);
Mat circulant_infer(const CirculantElmModel& m, const Mat& R);
void train_circulant_receiver(CirculantElmModel& m, const TrainingSet& set, double ridge);

void save_celm_text(const CirculantElmModel& m, const std::string& path);
CirculantElmModel load_celm_text(const std::string& path);

}  // namespace vlc
