#pragma once
#include <cstdint>
#include <string>

#include "vlcsim/frontend.hpp"
#include "vlcsim/matrix.hpp"
#include "vlcsim/normalization.hpp"
#include "vlcsim/rng.hpp"

namespace vlc {

double activation_eval(const std::string& name, double z);
bool activation_known(const std::string& name);

struct ElmModel {
  std::size_t hidden = 0;  // L
  std::size_t inputs = 0;  // photodiode count
  Mat input_weights;       // L x inputs
  std::vector<double> bias;  // L
  Mat output_weights;        // L x streams, empty until trained
  std::string activation = "sigmoid";
  std::uint64_t seed = 0;
  InputNormalization norm;

  void validate() const;
};

// input weights and biases i.i.d. uniform on [-1, 1]; weights are drawn
// row by row, then the biases
ElmModel init_elm(std::size_t hidden, std::size_t inputs, std::uint64_t seed,
                  const std::string& activation = "sigmoid");

// feature row for one receive vector: activation(W r' + b), with the
// preactivation clamped to [-710, 710] and r' the conditioned input
std::vector<double> hidden_map(const ElmModel& m, const double* r);

// R: inputs x symbols; rows of the result are the per-symbol features
Mat build_hidden_matrix(const ElmModel& m, const Mat& R);

// targets come in streams x symbols; column n of the result solves the
// regularized normal equations for stream n when ridge > 0, and is the
// minimum-norm least squares solution when ridge == 0
Mat train_output_weights(const Mat& phi, const Mat& targets, double ridge);

// estimates, streams x symbols
Mat elm_infer(const ElmModel& m, const Mat& R);

void train_receiver(ElmModel& m, const TrainingSet& set, double ridge);

void save_elm_text(const ElmModel& m, const std::string& path);
ElmModel load_elm_text(const std::string& path);

}  // namespace vlc
