#include "vlcsim/elm.hpp"

#include <cmath>
#include <fstream>

#include <Eigen/Dense>

#include "vlcsim/textio.hpp"

namespace vlc {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapT = Eigen::Map<RowMat>;
using CMapT = Eigen::Map<const RowMat>;

enum class Act { sigmoid, identity };

Act act_of(const std::string& name) {
  if (name == "sigmoid") return Act::sigmoid;
  if (name == "identity") return Act::identity;
  throw std::invalid_argument("unknown activation: " + name);
}

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double eval(Act act, double z) {
  if (z > 710.0) z = 710.0;
  if (z < -710.0) z = -710.0;
  return act == Act::sigmoid ? stable_sigmoid(z) : z;
}

}  // namespace

double activation_eval(const std::string& name, double z) { return eval(act_of(name), z); }

bool activation_known(const std::string& name) {
  return name == "sigmoid" || name == "identity";
}

void ElmModel::validate() const {
  require(hidden > 0 && inputs > 0, "model dimensions must be positive");
  require(input_weights.rows == hidden && input_weights.cols == inputs,
          "input weight shape is inconsistent");
  require(bias.size() == hidden, "bias length is inconsistent");
  require(activation_known(activation), "unknown activation");
  require(output_weights.empty() || output_weights.rows == hidden,
          "output weight shape is inconsistent");
  if (norm.enabled) require(norm.offsets.size() == inputs, "normalization size is inconsistent");
}

ElmModel init_elm(std::size_t hidden, std::size_t inputs, std::uint64_t seed,
                  const std::string& activation) {
  require(hidden > 0 && inputs > 0, "model dimensions must be positive");
  act_of(activation);
  ElmModel m;
  m.hidden = hidden;
  m.inputs = inputs;
  m.activation = activation;
  m.seed = seed;
  m.input_weights = Mat(hidden, inputs);
  m.bias.resize(hidden);
  Prng rng(seed);
  for (std::size_t j = 0; j < hidden; ++j)
    for (std::size_t q = 0; q < inputs; ++q) m.input_weights(j, q) = rng.uniform_pm1();
  for (std::size_t j = 0; j < hidden; ++j) m.bias[j] = rng.uniform_pm1();
  return m;
}

std::vector<double> hidden_map(const ElmModel& m, const double* r) {
  m.validate();
  const Act act = act_of(m.activation);
  const std::vector<double> rn = m.norm.apply(r, m.inputs);
  std::vector<double> phi(m.hidden);
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double z = m.bias[j];
    const double* w = m.input_weights.row_ptr(j);
    for (std::size_t q = 0; q < m.inputs; ++q) z += w[q] * rn[q];
    phi[j] = eval(act, z);
  }
  return phi;
}

Mat build_hidden_matrix(const ElmModel& m, const Mat& R) {
  m.validate();
  require(R.rows == m.inputs, "input rows do not match the model");
  require(R.cols > 0, "no symbols to map");
  const Act act = act_of(m.activation);
  const Mat rn = m.norm.apply(R);
  CMapT w(m.input_weights.a.data(), static_cast<Eigen::Index>(m.hidden),
          static_cast<Eigen::Index>(m.inputs));
  CMapT x(rn.a.data(), static_cast<Eigen::Index>(rn.rows), static_cast<Eigen::Index>(rn.cols));
  Eigen::MatrixXd pre = w * x;  // hidden x symbols
  Mat phi(R.cols, m.hidden);
  for (std::size_t u = 0; u < R.cols; ++u)
    for (std::size_t j = 0; j < m.hidden; ++j)
      phi(u, j) = eval(act, pre(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(u)) +
                                m.bias[j]);
  return phi;
}

Mat train_output_weights(const Mat& phi, const Mat& targets, double ridge) {
  require(phi.rows > 0 && phi.cols > 0, "empty feature matrix");
  require(targets.cols == phi.rows, "feature and target symbol counts differ");
  require(targets.rows > 0, "no target streams");
  require(ridge >= 0.0, "ridge must be nonnegative");
  CMapT p(phi.a.data(), static_cast<Eigen::Index>(phi.rows), static_cast<Eigen::Index>(phi.cols));
  CMapT t(targets.a.data(), static_cast<Eigen::Index>(targets.rows),
          static_cast<Eigen::Index>(targets.cols));
  Mat out(phi.cols, targets.rows);
  MapT b(out.a.data(), static_cast<Eigen::Index>(out.rows), static_cast<Eigen::Index>(out.cols));
  if (ridge > 0.0) {
    Eigen::MatrixXd gram = p.transpose() * p;
    gram.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    require(llt.info() == Eigen::Success, "regularized solve failed");
    b = llt.solve(p.transpose() * t.transpose());
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    b = svd.solve(t.transpose());
  }
  return out;
}

Mat elm_infer(const ElmModel& m, const Mat& R) {
  require(!m.output_weights.empty(), "model has not been trained");
  const Mat phi = build_hidden_matrix(m, R);
  Mat out(m.output_weights.cols, R.cols);
  CMapT p(phi.a.data(), static_cast<Eigen::Index>(phi.rows), static_cast<Eigen::Index>(phi.cols));
  CMapT b(m.output_weights.a.data(), static_cast<Eigen::Index>(m.output_weights.rows),
          static_cast<Eigen::Index>(m.output_weights.cols));
  MapT o(out.a.data(), static_cast<Eigen::Index>(out.rows), static_cast<Eigen::Index>(out.cols));
  o.noalias() = (p * b).transpose();
  return out;
}

void train_receiver(ElmModel& m, const TrainingSet& set, double ridge) {
  require(set.received.cols == set.symbols.cols, "training set sizes disagree");
  const Mat phi = build_hidden_matrix(m, set.received);
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

void save_elm_text(const ElmModel& m, const std::string& path) {
  m.validate();
  std::ofstream out(path);
  require(out.is_open(), "cannot open model file for writing");
  const std::size_t streams = m.output_weights.empty() ? 0 : m.output_weights.cols;
  out << "elm-model 1\nvariant dense\n";
  out << "hidden " << m.hidden << "\ninputs " << m.inputs << "\nstreams " << streams << '\n';
  out << "activation " << m.activation << "\nseed " << m.seed << '\n';
  out << "normalization " << (m.norm.enabled ? 1 : 0) << '\n';
  if (m.norm.enabled) {
    out << "gain " << g17(m.norm.gain) << '\n' << "offsets ";
    write_row(out, m.norm.offsets.data(), m.norm.offsets.size());
  }
  out << "input_weights\n";
  for (std::size_t j = 0; j < m.hidden; ++j) write_row(out, m.input_weights.row_ptr(j), m.inputs);
  out << "bias ";
  write_row(out, m.bias.data(), m.bias.size());
  if (streams > 0) {
    out << "output_weights\n";
    for (std::size_t j = 0; j < m.hidden; ++j) write_row(out, m.output_weights.row_ptr(j), streams);
  }
  require(out.good(), "failed while writing model file");
}

ElmModel load_elm_text(const std::string& path) {
  std::ifstream in(path);
  require(in.is_open(), "cannot open model file");
  const char* bad = "malformed model file";
  expect_word(in, "elm-model", bad);
  require(static_cast<int>(read_num(in, bad)) == 1, "unsupported model format");
  expect_word(in, "variant", bad);
  std::string variant;
  in >> variant;
  require(static_cast<bool>(in) && variant == "dense", "model file holds a different variant");
  ElmModel m;
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
  expect_word(in, "input_weights", bad);
  m.input_weights = Mat(m.hidden, m.inputs);
  for (double& v : m.input_weights.a) v = read_num(in, bad);
  expect_word(in, "bias", bad);
  m.bias.resize(m.hidden);
  for (double& v : m.bias) v = read_num(in, bad);
  if (streams > 0) {
    expect_word(in, "output_weights", bad);
    m.output_weights = Mat(m.hidden, streams);
    for (double& v : m.output_weights.a) v = read_num(in, bad);
  }
  m.validate();
  return m;
}

}  // namespace vlc
