#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "vlcsim/circulant.hpp"
#include "vlcsim/elm.hpp"
#include "vlcsim/equalizers.hpp"
#include "vlcsim/normalization.hpp"

using namespace vlc;

namespace {

Mat transpose_of(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

}  // namespace

TEST_CASE("activation evaluation") {
  CHECK(activation_eval("sigmoid", 0.0) == 0.5);
  CHECK(activation_eval("sigmoid", 3.0) == doctest::Approx(1.0 / (1.0 + std::exp(-3.0))));
  CHECK(activation_eval("identity", -2.5) == -2.5);
  CHECK(activation_known("sigmoid"));
  CHECK(activation_known("identity"));
  CHECK(!activation_known("tanh"));
  CHECK_THROWS(activation_eval("tanh", 0.0));

  // the two sigmoid branches agree where both are stable
  for (double z : {-30.0, -5.0, -0.1, 0.1, 5.0, 30.0}) {
    const double direct = 1.0 / (1.0 + std::exp(-z));
    CHECK(activation_eval("sigmoid", z) == doctest::Approx(direct).epsilon(1e-15));
  }
  // extremes neither overflow nor collapse
  CHECK(activation_eval("sigmoid", 1e308) == 1.0);
  CHECK(activation_eval("sigmoid", -1e308) > 0.0);
  CHECK(activation_eval("sigmoid", -1e308) < 1e-300);
  CHECK(activation_eval("identity", 1e308) == 710.0);
  CHECK(activation_eval("identity", -1e308) == -710.0);
}

TEST_CASE("random init is deterministic and bounded") {
  const ElmModel a = init_elm(32, 8, 5);
  const ElmModel b = init_elm(32, 8, 5);
  const ElmModel c = init_elm(32, 8, 6);
  CHECK(a.input_weights.a == b.input_weights.a);
  CHECK(a.bias == b.bias);
  CHECK(a.input_weights.a != c.input_weights.a);
  for (double v : a.input_weights.a) CHECK((v >= -1.0 && v <= 1.0));
  for (double v : a.bias) CHECK((v >= -1.0 && v <= 1.0));
  CHECK_THROWS(init_elm(0, 8, 1));
  CHECK_THROWS(init_elm(8, 0, 1));
  CHECK_THROWS(init_elm(8, 4, 1, "tanh"));
}

TEST_CASE("init entries average to zero over many draws") {
  const ElmModel m = init_elm(100, 100, 12345);
  double s = 0.0;
  for (double v : m.input_weights.a) s += v;
  CHECK(std::abs(s / 1e4) < 0.05);
}

TEST_CASE("zero weights and biases sit at the sigmoid midpoint") {
  ElmModel m;
  m.hidden = 6;
  m.inputs = 3;
  m.input_weights = Mat(6, 3, 0.0);
  m.bias.assign(6, 0.0);
  const double r[3] = {12.0, -7.0, 0.3};
  const std::vector<double> phi = hidden_map(m, r);
  for (double v : phi) CHECK(v == 0.5);
}

TEST_CASE("feature rows match the single-vector map") {
  const ElmModel m = init_elm(24, 6, 9);
  Prng rng(10);
  Mat R(6, 15);
  for (double& v : R.a) v = 3.0 * rng.uniform_pm1();
  const Mat phi = build_hidden_matrix(m, R);
  REQUIRE(phi.rows == 15);
  REQUIRE(phi.cols == 24);
  for (std::size_t u = 0; u < R.cols; ++u) {
    const std::vector<double> row = hidden_map(m, R.col(u).data());
    for (std::size_t j = 0; j < 24; ++j)
      CHECK(phi(u, j) == doctest::Approx(row[j]).epsilon(1e-14));
  }
  for (double v : phi.a) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("permuting inputs with matching weight columns leaves features unchanged") {
  const ElmModel m = init_elm(16, 5, 77);
  ElmModel p = m;
  const std::size_t perm[5] = {3, 0, 4, 1, 2};
  for (std::size_t j = 0; j < 16; ++j)
    for (std::size_t q = 0; q < 5; ++q) p.input_weights(j, q) = m.input_weights(j, perm[q]);
  const double r[5] = {0.3, -0.8, 1.1, 0.05, -2.0};
  double rp[5];
  for (std::size_t q = 0; q < 5; ++q) rp[q] = r[perm[q]];
  const std::vector<double> a = hidden_map(m, r);
  const std::vector<double> b = hidden_map(p, rp);
  for (std::size_t j = 0; j < 16; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-15));
}

TEST_CASE("identity features return the targets exactly") {
  const std::size_t n = 6;
  Mat phi(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) phi(i, i) = 1.0;
  Mat targets(2, n);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t u = 0; u < n; ++u)
      targets(s, u) = 0.1 * static_cast<double>(u + 1) + 1.7 * static_cast<double>(s) + 0.123456789;
  const Mat b = train_output_weights(phi, targets, 0.0);
  const Mat want = transpose_of(targets);
  REQUIRE(b.rows == want.rows);
  REQUIRE(b.cols == want.cols);
  CHECK(b.a == want.a);
}

TEST_CASE("orthonormal features reduce training to a projection") {
  const std::size_t m = 40, L = 12;
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(m, L);
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ() *
                      Eigen::MatrixXd::Identity(m, L);
  Mat phi(m, L);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < L; ++j)
      phi(i, j) = Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  Mat targets(3, m);
  Prng rng(8);
  for (double& v : targets.a) v = rng.uniform_pm1();
  const Mat b = train_output_weights(phi, targets, 0.0);
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t s = 0; s < 3; ++s) {
      double dot = 0.0;
      for (std::size_t u = 0; u < m; ++u) dot += phi(u, j) * targets(s, u);
      CHECK(b(j, s) == doctest::Approx(dot).epsilon(1e-11));
    }
}

TEST_CASE("regularized training solves the normal equations") {
  const std::size_t m = 50, L = 8, streams = 2;
  const double ridge = 1e-3;
  Prng rng(3);
  Mat phi(m, L);
  for (double& v : phi.a) v = rng.uniform_pm1();
  Mat targets(streams, m);
  for (double& v : targets.a) v = rng.uniform_pm1();
  const Mat b = train_output_weights(phi, targets, ridge);

  Eigen::MatrixXd P(m, L), T(m, streams);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < L; ++j) P(i, j) = phi(i, j);
    for (std::size_t s = 0; s < streams; ++s) T(i, s) = targets(s, i);
  }
  Eigen::MatrixXd G = P.transpose() * P;
  G.diagonal().array() += ridge;
  const Eigen::MatrixXd rhs = P.transpose() * T;
  Eigen::MatrixXd B(L, streams);
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t s = 0; s < streams; ++s) B(j, s) = b(j, s);

  const double resid = (G * B - rhs).cwiseAbs().maxCoeff();
  CHECK(resid <= 1e-10);
  CHECK(resid <= 1e-8 * rhs.cwiseAbs().maxCoeff() + 1e-30);
  const Eigen::MatrixXd direct = G.fullPivLu().solve(rhs);
  CHECK((B - direct).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("zero ridge takes the minimum norm solution") {
  const std::size_t m = 10, L = 30;
  Prng rng(4);
  Mat phi(m, L);
  for (double& v : phi.a) v = rng.uniform_pm1();
  Mat targets(1, m);
  for (double& v : targets.a) v = rng.uniform_pm1();
  const Mat b = train_output_weights(phi, targets, 0.0);

  Eigen::MatrixXd P(m, L);
  Eigen::VectorXd t(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < L; ++j) P(i, j) = phi(i, j);
    t(i) = targets(0, i);
  }
  Eigen::VectorXd B(L);
  for (std::size_t j = 0; j < L; ++j) B(j) = b(j, 0);
  CHECK((P * B - t).cwiseAbs().maxCoeff() <= 1e-10);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd pinv =
      svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() * svd.matrixU().transpose() *
      t;
  CHECK((B - pinv).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("heavier ridge never grows the weights") {
  Prng rng(6);
  Mat phi(60, 20);
  for (double& v : phi.a) v = rng.uniform_pm1();
  Mat targets(2, 60);
  for (double& v : targets.a) v = rng.uniform_pm1();
  double prev = 1e300;
  for (double ridge : {1e-8, 1e-4, 1e-2, 1.0, 100.0}) {
    const Mat b = train_output_weights(phi, targets, ridge);
    double norm = 0.0;
    for (double v : b.a) norm += v * v;
    CHECK(norm <= prev * (1.0 + 1e-12));
    prev = norm;
  }
}

TEST_CASE("training input checks") {
  Mat phi(4, 2, 1.0);
  Mat targets(1, 4, 1.0);
  CHECK_THROWS(train_output_weights(phi, targets, -1e-9));
  CHECK_THROWS(train_output_weights(Mat(), targets, 0.1));
  CHECK_THROWS(train_output_weights(phi, Mat(1, 3, 1.0), 0.1));
}

TEST_CASE("inference matches a scalar chain") {
  ElmModel m = init_elm(12, 4, 31);
  Prng rng(32);
  m.output_weights = Mat(12, 3);
  for (double& v : m.output_weights.a) v = rng.uniform_pm1();
  Mat R(4, 9);
  for (double& v : R.a) v = 2.0 * rng.uniform_pm1();
  const Mat x = elm_infer(m, R);
  REQUIRE(x.rows == 3);
  REQUIRE(x.cols == 9);
  for (std::size_t u = 0; u < 9; ++u) {
    const std::vector<double> phi = hidden_map(m, R.col(u).data());
    for (std::size_t s = 0; s < 3; ++s) {
      double dot = 0.0;
      for (std::size_t j = 0; j < 12; ++j) dot += phi[j] * m.output_weights(j, s);
      CHECK(std::abs(x(s, u) - dot) < 1e-13);
    }
  }
}

TEST_CASE("single neuron closed form") {
  ElmModel m;
  m.hidden = 1;
  m.inputs = 1;
  m.input_weights = Mat(1, 1, 0.0);
  m.bias.assign(1, 0.0);
  m.output_weights = Mat(1, 1, 2.0);
  Mat R(1, 1, 123.0);
  const Mat x = elm_infer(m, R);
  CHECK(x(0, 0) == 1.0);  // sigmoid(0) * 2
}

TEST_CASE("untrained model refuses inference") {
  const ElmModel m = init_elm(8, 2, 1);
  CHECK_THROWS(elm_infer(m, Mat(2, 3, 1.0)));
}

TEST_CASE("trained receiver keeps pace with a linear equalizer on a linear channel") {
  const std::size_t n_tx = 3, n_rx = 6, train_n = 600, payload_n = 2000;
  Prng hrng(21);
  ChannelMatrix H;
  H.gains = Mat(n_rx, n_tx);
  for (double& v : H.gains.a) v = 0.5 + 0.5 * hrng.uniform01();
  PolynomialNonlinearity nl;
  nl.coeffs = {1.0};
  const PamConstellation c = PamConstellation::uniform(4, 1.7, 2.0);

  Prng probe(100);
  const double noise_var = calibrate_noise_variance(H, nl, c, 55.0, 20000, probe);
  Prng ts(101), tn(102), ps(103), pn(104);
  const TrainingSet train = make_training_set(H, nl, c, train_n, noise_var, ts, tn);
  const Mat payload_x = draw_symbol_frame(c, n_tx, payload_n, ps);
  const Mat payload_r = transmit_frame(H, nl, payload_x, noise_var, pn);

  ElmModel m = init_elm(128, n_rx, 7);
  m.norm = fit_center_scale(train.received, 0.125);
  train_receiver(m, train, 1e-6);
  const Mat elm_est = c.detect(elm_infer(m, payload_r));

  const LinearEqualizer zf = build_zf(H);
  const Mat zf_est = c.detect(zf.apply(payload_r));

  std::size_t elm_err = 0, zf_err = 0;
  for (std::size_t i = 0; i < payload_x.size(); ++i) {
    if (elm_est.a[i] != payload_x.a[i]) ++elm_err;
    if (zf_est.a[i] != payload_x.a[i]) ++zf_err;
  }
  const double total = static_cast<double>(payload_x.size());
  CHECK(static_cast<double>(elm_err) / total <=
        static_cast<double>(zf_err) / total + 0.01);
}

TEST_CASE("training is reproducible") {
  Prng s1(1), n1(2), s2(1), n2(2);
  ChannelMatrix H;
  H.gains = Mat(4, 2);
  Prng hr(3);
  for (double& v : H.gains.a) v = hr.uniform01() + 0.5;
  PolynomialNonlinearity nl;
  nl.coeffs = {1.0, 0.05};
  const PamConstellation c = PamConstellation::uniform(4, 1.7, 2.0);
  const TrainingSet a = make_training_set(H, nl, c, 300, 1e-4, s1, n1);
  const TrainingSet b = make_training_set(H, nl, c, 300, 1e-4, s2, n2);
  ElmModel ma = init_elm(32, 4, 9);
  ElmModel mb = init_elm(32, 4, 9);
  train_receiver(ma, a, 1e-6);
  train_receiver(mb, b, 1e-6);
  CHECK(ma.output_weights.a == mb.output_weights.a);
  const Mat xa = elm_infer(ma, a.received);
  const Mat xb = elm_infer(mb, b.received);
  CHECK(xa.a == xb.a);
}

TEST_CASE("dense model text round trip") {
  ElmModel m = init_elm(16, 4, 99);
  Prng rng(100);
  m.output_weights = Mat(16, 4);
  for (double& v : m.output_weights.a) v = rng.uniform_pm1() * 3.7;
  m.norm.enabled = true;
  m.norm.offsets = {1e-7, -2.5e-7, 3.25e-6, 0.0};
  m.norm.gain = 1234.567;

  const char* path = "test_elm_model.txt";
  save_elm_text(m, path);
  const ElmModel back = load_elm_text(path);
  CHECK(back.hidden == m.hidden);
  CHECK(back.inputs == m.inputs);
  CHECK(back.activation == m.activation);
  CHECK(back.seed == m.seed);
  CHECK(back.input_weights.a == m.input_weights.a);
  CHECK(back.bias == m.bias);
  CHECK(back.output_weights.a == m.output_weights.a);
  CHECK(back.norm.enabled);
  CHECK(back.norm.offsets == m.norm.offsets);
  CHECK(back.norm.gain == m.norm.gain);
  CHECK_THROWS(load_celm_text(path));  // transform loader must refuse the dense variant
  std::remove(path);
}

TEST_CASE("untrained model round trips without an output block") {
  const ElmModel m = init_elm(8, 3, 42);
  const char* path = "test_elm_untrained.txt";
  save_elm_text(m, path);
  const ElmModel back = load_elm_text(path);
  CHECK(back.output_weights.empty());
  CHECK(back.input_weights.a == m.input_weights.a);
  std::remove(path);
}

TEST_CASE("input conditioning centers and scales") {
  Prng rng(50);
  Mat R(4, 500);
  for (std::size_t q = 0; q < 4; ++q)
    for (std::size_t u = 0; u < 500; ++u)
      R(q, u) = 10.0 * static_cast<double>(q) + rng.gauss() * (1.0 + static_cast<double>(q));
  const InputNormalization norm = fit_center_scale(R, 0.125);
  REQUIRE(norm.enabled);
  REQUIRE(norm.offsets.size() == 4);
  const Mat out = norm.apply(R);
  double rms = 0.0;
  for (std::size_t q = 0; q < 4; ++q) {
    double mean = 0.0;
    for (std::size_t u = 0; u < 500; ++u) mean += out(q, u);
    CHECK(std::abs(mean / 500.0) < 1e-9);
  }
  for (double v : out.a) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(out.size()));
  CHECK(rms == doctest::Approx(0.125).epsilon(1e-12));

  // scalar and in-place paths agree with the matrix path
  std::vector<double> one = norm.apply(R.col(7).data(), 4);
  for (std::size_t q = 0; q < 4; ++q) CHECK(one[q] == out(q, 7));
  std::vector<double> inplace = R.col(7);
  norm.apply_inplace(inplace.data(), 4);
  CHECK(inplace == one);
}

TEST_CASE("disabled conditioning is the identity") {
  InputNormalization norm;
  const double r[3] = {5.0, -2.0, 0.25};
  const std::vector<double> out = norm.apply(r, 3);
  CHECK(out == std::vector<double>{5.0, -2.0, 0.25});
}

TEST_CASE("conditioning rejects constant input") {
  // a binary-exact constant centers to exactly zero spread
  CHECK_THROWS(fit_center_scale(Mat(3, 10, 4.0), 0.125));
}
