#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "vlcsim/circulant.hpp"
#include "vlcsim/complexity.hpp"
#include "vlcsim/constellation.hpp"
#include "vlcsim/elm.hpp"
#include "vlcsim/geometry.hpp"
#include "vlcsim/harness.hpp"
#include "vlcsim/nonlinearity.hpp"

namespace py = pybind11;
using namespace vlc;

namespace {

py::array_t<double> to_array(const Mat& m) {
  py::array_t<double> out({m.rows, m.cols});
  std::copy(m.a.begin(), m.a.end(), out.mutable_data());
  return out;
}

Mat to_mat(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  require(arr.ndim() == 2, "expected a 2-d array");
  Mat m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
  std::copy(arr.data(), arr.data() + m.size(), m.a.begin());
  return m;
}

Experiment load_with_seed(const std::string& config_path, std::optional<std::uint64_t> seed) {
  Experiment ex = load_experiment(config_path);
  if (seed) ex.master_seed = *seed;
  return ex;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "LED MIMO link simulator and receiver bench";

  mod.def(
      "grid_channel",
      [](int led_rows, int led_cols, double led_spacing_m, int pd_rows, int pd_cols,
         double pd_spacing_m, double height_m, double lambertian_order, double fov_deg,
         double concentrator_index, double pd_area_cm2) {
        OpticalParams optics;
        optics.lambda_order = lambertian_order;
        optics.phi_c = fov_deg * 3.14159265358979323846 / 180.0;
        optics.gamma = concentrator_index;
        optics.a_pd = pd_area_cm2 * 1e-4;
        const ChannelGeometry g = make_grid_scene(led_rows, led_cols, led_spacing_m, pd_rows,
                                                  pd_cols, pd_spacing_m, height_m, optics);
        return to_array(build_channel_matrix(g).gains);
      },
      "optical gain matrix of co-centered rectangular emitter and detector grids",
      py::arg("led_rows"), py::arg("led_cols"), py::arg("led_spacing_m"), py::arg("pd_rows"),
      py::arg("pd_cols"), py::arg("pd_spacing_m"), py::arg("height_m"),
      py::arg("lambertian_order") = 1.0, py::arg("fov_deg") = 62.0,
      py::arg("concentrator_index") = 1.5, py::arg("pd_area_cm2") = 1.0);

  mod.def("lambertian", &lambertian_radiant_intensity, "angular emission profile",
          py::arg("phi"), py::arg("order"));

  mod.def(
      "fit_nonlinearity",
      [](const std::vector<double>& volts, const std::vector<double>& amps, int order) {
        require(volts.size() == amps.size(), "volts and amps must have the same length");
        std::vector<std::pair<double, double>> samples;
        for (std::size_t i = 0; i < volts.size(); ++i) samples.emplace_back(volts[i], amps[i]);
        return fit_polynomial_iv(samples, order).coeffs;
      },
      "least squares polynomial drive curve through measured samples, no constant term",
      py::arg("volts"), py::arg("amps"), py::arg("order") = 5);

  mod.def(
      "apply_nonlinearity",
      [](const std::vector<double>& coeffs,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        PolynomialNonlinearity nl;
        nl.coeffs = coeffs;
        nl.validate();
        py::array_t<double> out(std::vector<py::ssize_t>(x.shape(), x.shape() + x.ndim()));
        const double* src = x.data();
        double* dst = out.mutable_data();
        for (py::ssize_t i = 0; i < x.size(); ++i) dst[i] = nl.apply(src[i]);
        return out;
      },
      "evaluate a drive polynomial elementwise", py::arg("coeffs"), py::arg("x"));

  mod.def(
      "pam_levels",
      [](int order, double v_min, double v_max) {
        return PamConstellation::uniform(order, v_min, v_max).levels;
      },
      "evenly spaced drive levels", py::arg("order"), py::arg("v_min"), py::arg("v_max"));

  mod.def(
      "detect",
      [](const std::vector<double>& levels,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        PamConstellation c;
        c.levels = levels;
        c.validate();
        py::array_t<double> out(std::vector<py::ssize_t>(x.shape(), x.shape() + x.ndim()));
        const double* src = x.data();
        double* dst = out.mutable_data();
        for (py::ssize_t i = 0; i < x.size(); ++i) dst[i] = c.detect(src[i]);
        return out;
      },
      "nearest level decision, elementwise", py::arg("levels"), py::arg("x"));

  mod.def(
      "complexity",
      [](std::size_t hidden, std::size_t inputs) {
        const ComplexityReport rep = complexity_report(hidden, inputs);
        py::dict d;
        d["hidden"] = rep.hidden;
        d["inputs"] = rep.inputs;
        d["dense_per_symbol"] = rep.dense_per_symbol;
        d["circulant_per_symbol"] = rep.circulant_per_symbol;
        d["ratio"] = rep.ratio;
        d["dense_measured"] = rep.dense_measured;
        d["circulant_measured"] = rep.circulant_measured;
        return d;
      },
      "per-symbol multiply budget of the hidden stage", py::arg("hidden"), py::arg("inputs"));

  mod.def(
      "train_output_weights",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& phi,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& targets,
         double ridge) { return to_array(train_output_weights(to_mat(phi), to_mat(targets), ridge)); },
      "ridge or minimum-norm least squares output weights", py::arg("phi"), py::arg("targets"),
      py::arg("ridge") = 0.0);

  mod.def(
      "circulant_matvec",
      [](const std::vector<double>& generator, const std::vector<double>& r) {
        CirculantElmModel m;
        m.hidden = generator.size();
        m.inputs = r.size();
        m.generator = generator;
        m.bias.assign(generator.size(), 0.0);
        m.rebuild_transform();
        m.validate();
        return circulant_matvec(m, r.data(), r.size());
      },
      "transform-space product of a circulant's leading columns with a short input",
      py::arg("generator"), py::arg("r"));

  mod.def(
      "ser_sweep",
      [](const std::string& config_path, std::optional<std::uint64_t> seed, bool timing) {
        const Experiment ex = load_with_seed(config_path, seed);
        py::list out;
        for (const SerRecord& r : run_ser_sweep(ex, timing)) {
          py::dict d;
          d["receiver"] = r.receiver;
          d["snr_db"] = r.snr_db;
          d["symbols"] = r.symbols;
          d["errors"] = r.errors;
          d["ser"] = r.ser;
          d["wall_time_s"] = r.wall_time_s;
          d["low_confidence"] = r.low_confidence;
          d["failure"] = r.failure;
          out.append(d);
        }
        return out;
      },
      "symbol error rate across the configured receivers and operating points",
      py::arg("config_path"), py::arg("seed") = std::nullopt, py::arg("timing") = false);

  mod.def(
      "ser_sweep_csv",
      [](const std::string& config_path, std::optional<std::uint64_t> seed, bool timing) {
        const Experiment ex = load_with_seed(config_path, seed);
        return ser_csv_text(ex, run_ser_sweep(ex, timing));
      },
      "the sweep rendered in the csv exchange format", py::arg("config_path"),
      py::arg("seed") = std::nullopt, py::arg("timing") = false);

  mod.def(
      "constellation_dump",
      [](const std::string& config_path, const std::string& receiver, double snr_db,
         std::size_t n_symbols, std::optional<std::uint64_t> seed) {
        const Experiment ex = load_with_seed(config_path, seed);
        const ConstellationDump d = dump_constellation(ex, receiver, snr_db, n_symbols);
        py::dict out;
        out["receiver"] = d.receiver;
        out["snr_db"] = d.snr_db;
        out["truth"] = to_array(d.truth);
        out["estimates"] = to_array(d.estimates);
        return out;
      },
      "pre-decision soft estimates paired with the sent levels", py::arg("config_path"),
      py::arg("receiver"), py::arg("snr_db"), py::arg("n_symbols") = 4000,
      py::arg("seed") = std::nullopt);

  mod.def(
      "channel_csv",
      [](const std::string& config_path) {
        const Experiment ex = load_experiment(config_path);
        std::ostringstream os;
        write_channel_csv(ex.channel, os);
        return os.str();
      },
      "the configured scene's gain matrix in the csv exchange format", py::arg("config_path"));
}
