#include "vlcsim/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "vlcsim/textio.hpp"

namespace vlc {

namespace {

void apply_through_transform(const FftPlan& plan, const std::vector<cplx>& spectrum,
                             std::vector<cplx>& buf, std::vector<double>& out) {
  plan.execute(buf.data(), false);
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= spectrum[k];
  plan.execute(buf.data(), true);
  double real_max = 0.0, imag_max = 0.0;
  for (const cplx& v : buf) {
    real_max = std::max(real_max, std::abs(v.real()));
    imag_max = std::max(imag_max, std::abs(v.imag()));
  }
  if (imag_max > 1e-10 * real_max)
    throw std::runtime_error("circulant product left a non-real residue");
  out.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
}

}  // namespace

void CirculantElmModel::validate() const {
  require(hidden > 0 && inputs > 0, "model dimensions must be positive");
  require(is_power_of_two(hidden), "hidden size must be a power of two");
  require(hidden > inputs, "hidden size must exceed the input count");
  require(generator.size() == hidden, "generator length is inconsistent");
  require(bias.size() == hidden, "bias length is inconsistent");
  require(activation_known(activation), "unknown activation");
  require(output_weights.empty() || output_weights.rows == hidden,
          "output weight shape is inconsistent");
  require(plan.n == hidden && spectrum.size() == hidden, "transform state is stale");
  if (norm.enabled) require(norm.offsets.size() == inputs, "normalization size is inconsistent");
}

void CirculantElmModel::rebuild_transform() {
  plan = FftPlan(hidden);
  spectrum = circulant_spectrum(generator);
}

std::vector<cplx> circulant_spectrum(const std::vector<double>& generator) {
  require(is_power_of_two(generator.size()), "generator length must be a power of two");
  std::vector<cplx> d = fft_real(generator);
  const double root = std::sqrt(static_cast<double>(generator.size()));
  for (cplx& v : d) v *= root;
  return d;
}

CirculantElmModel init_circulant(std::size_t hidden, std::size_t inputs, std::uint64_t seed,
                                 const std::string& activation) {
  require(is_power_of_two(hidden), "hidden size must be a power of two");
  require(hidden > inputs && inputs > 0, "hidden size must exceed the input count");
  require(activation_known(activation), "unknown activation");
  CirculantElmModel m;
  m.hidden = hidden;
  m.inputs = inputs;
  m.activation = activation;
  m.seed = seed;
  m.generator.resize(hidden);
  m.bias.resize(hidden);
  Prng rng(seed);
  for (double& v : m.generator) v = rng.uniform_pm1();
  for (double& v : m.bias) v = rng.uniform_pm1();
  m.rebuild_transform();
  return m;
}

std::vector<double> circulant_matvec(const CirculantElmModel& m, const double* r, std::size_t n) {
  m.validate();
  require(n == m.inputs, "input length does not match the model");
  std::vector<cplx> buf(m.hidden, cplx(0.0, 0.0));
  for (std::size_t q = 0; q < n; ++q) buf[q] = cplx(r[q], 0.0);
  std::vector<double> out;
  apply_through_transform(m.plan, m.spectrum, buf, out);
  return out;
}

Mat implied_dense_weights(const CirculantElmModel& m) {
  m.validate();
  Mat w(m.hidden, m.inputs);
  for (std::size_t i = 0; i < m.hidden; ++i)
    for (std::size_t q = 0; q < m.inputs; ++q)
      w(i, q) = m.generator[(i + m.hidden - q) % m.hidden];
  return w;
}

ElmModel implied_dense_model(const CirculantElmModel& m) {
  ElmModel d;
  d.hidden = m.hidden;
  d.inputs = m.inputs;
  d.input_weights = implied_dense_weights(m);
  d.bias = m.bias;
  d.output_weights = m.output_weights;
  d.activation = m.activation;
  d.seed = m.seed;
  d.norm = m.norm;
  return d;
}

std::vector<double> circulant_hidden_map(const CirculantElmModel& m, const double* r) {
  const std::vector<double> rn = m.norm.apply(r, m.inputs);
  const std::vector<double> v = circulant_matvec(m, rn.data(), rn.size());
  std::vector<double> phi(m.hidden);
  for (std::size_t j = 0; j < m.hidden; ++j)
    phi[j] = activation_eval(m.activation, v[j] + m.bias[j]);
  return phi;
}

Mat circulant_build_hidden_matrix(const CirculantElmModel& m, const Mat& R) {
  m.validate();
  require(R.rows == m.inputs, "input rows do not match the model");
  require(R.cols > 0, "no symbols to map");
  const Mat rn = m.norm.apply(R);
  Mat phi(R.cols, m.hidden);
  std::vector<cplx> buf(m.hidden);
  std::vector<double> v;
  for (std::size_t u = 0; u < R.cols; ++u) {
    for (std::size_t q = 0; q < m.hidden; ++q)
      buf[q] = q < m.inputs ? cplx(rn(q, u), 0.0) : cplx(0.0, 0.0);
    apply_through_transform(m.plan, m.spectrum, buf, v);
    for (std::size_t j = 0; j < m.hidden; ++j)
      phi(u, j) = activation_eval(m.activation, v[j] + m.bias[j]);
  }
  return phi;
}

Mat circulant_infer(const CirculantElmModel& m, const Mat& R) {
  require(!m.output_weights.empty(), "model has not been trained");
  const Mat phi = circulant_build_hidden_matrix(m, R);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> p(phi.a.data(), static_cast<Eigen::Index>(phi.rows),
                             static_cast<Eigen::Index>(phi.cols));
  Eigen::Map<const RowMat> b(m.output_weights.a.data(),
                             static_cast<Eigen::Index>(m.output_weights.rows),
                             static_cast<Eigen::Index>(m.output_weights.cols));
  Mat out(m.output_weights.cols, R.cols);
  Eigen::Map<RowMat> o(out.a.data(), static_cast<Eigen::Index>(out.rows),
                       static_cast<Eigen::Index>(out.cols));
  o.noalias() = (p * b).transpose();
  return out;
}

void train_circulant_receiver(CirculantElmModel& m, const TrainingSet& set, double ridge) {
  require(set.received.cols == set.symbols.cols, "training set sizes disagree");
  const Mat phi = circulant_build_hidden_matrix(m, set.received);
  m.output_weights = train_output_weights(phi, set.symbols, ridge);
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

void save_celm_text(const CirculantElmModel& m, const std::string& path) {
  m.validate();
  std::ofstream out(path);
  require(out.is_open(), "cannot open model file for writing");
  const std::size_t streams = m.output_weights.empty() ? 0 : m.output_weights.cols;
  out << "elm-model 1\nvariant circulant\n";
  out << "hidden " << m.hidden << "\ninputs " << m.inputs << "\nstreams " << streams << '\n';
  out << "activation " << m.activation << "\nseed " << m.seed << '\n';
  out << "normalization " << (m.norm.enabled ? 1 : 0) << '\n';
  if (m.norm.enabled) {
    out << "gain " << g17(m.norm.gain) << '\n' << "offsets ";
    write_row(out, m.norm.offsets.data(), m.norm.offsets.size());
  }
  out << "generator ";
  write_row(out, m.generator.data(), m.generator.size());
  out << "bias ";
  write_row(out, m.bias.data(), m.bias.size());
  if (streams > 0) {
    out << "output_weights\n";
    for (std::size_t j = 0; j < m.hidden; ++j) write_row(out, m.output_weights.row_ptr(j), streams);
  }
  require(out.good(), "failed while writing model file");
}

CirculantElmModel load_celm_text(const std::string& path) {
  std::ifstream in(path);
  require(in.is_open(), "cannot open model file");
  const char* bad = "malformed model file";
  expect_word(in, "elm-model", bad);
  require(static_cast<int>(read_num(in, bad)) == 1, "unsupported model format");
  expect_word(in, "variant", bad);
  std::string variant;
  in >> variant;
  require(static_cast<bool>(in) && variant == "circulant", "model file holds a different variant");
  CirculantElmModel m;
  expect_word(in, "hidden", bad);
  m.hidden = static_cast<std::size_t>(read_num(in, bad));
  expect_word(in, "inputs", bad);
  m.inputs = static_cast<std::size_t>(read_num(in, bad));
  expect_word(in, "streams", bad);
  const std::size_t streams = static_cast<std::size_t>(read_num(in, bad));
  expect_word(in, "activation", bad);
  in >> m.activation;
  require(static_cast<bool>(in), bad);
  expect_word(in, "seed", bad);
  unsigned long long seed = 0;
  in >> seed;
  require(static_cast<bool>(in), bad);
  m.seed = seed;
  expect_word(in, "normalization", bad);
  const int has_norm = static_cast<int>(read_num(in, bad));
  require(has_norm == 0 || has_norm == 1, bad);
  if (has_norm) {
    m.norm.enabled = true;
    expect_word(in, "gain", bad);
    m.norm.gain = read_num(in, bad);
    expect_word(in, "offsets", bad);
    m.norm.offsets.resize(m.inputs);
    for (double& v : m.norm.offsets) v = read_num(in, bad);
  }
  expect_word(in, "generator", bad);
  m.generator.resize(m.hidden);
  for (double& v : m.generator) v = read_num(in, bad);
  expect_word(in, "bias", bad);
  m.bias.resize(m.hidden);
  for (double& v : m.bias) v = read_num(in, bad);
  if (streams > 0) {
    expect_word(in, "output_weights", bad);
    m.output_weights = Mat(m.hidden, streams);
    for (double& v : m.output_weights.a) v = read_num(in, bad);
  }
  m.rebuild_transform();
  m.validate();
  return m;
}

}  // namespace vlc
