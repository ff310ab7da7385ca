#include "vlcsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "vlcsim/circulant.hpp"
#include "vlcsim/elm.hpp"
#include "vlcsim/equalizers.hpp"
#include "vlcsim/frontend.hpp"
#include "vlcsim/rng.hpp"
#include "vlcsim/textio.hpp"

namespace vlc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool known_receiver(const std::string& name) {
  return name == "zf" || name == "lmmse" || name == "zf+pd" || name == "lmmse+pd" ||
         name == "elm" || name == "celm";
}

void Experiment::validate() const {
  require(channel.gains.rows > 0 && channel.gains.cols > 0, "experiment lacks a channel");
  nonlinearity.validate();
  constellation.validate();
  require(hidden >= 1, "hidden size must be positive");
  require(ridge >= 0.0, "ridge must be nonnegative");
  require(training_symbols >= 1, "need training symbols");
  require(postdistorter_order >= 1, "cleanup order must be at least one");
  require(!snr_grid_db.empty(), "snr grid is empty");
  for (double s : snr_grid_db) require(std::isfinite(s), "snr grid holds a non-finite value");
  require(payload_symbols >= 1000, "payload must be at least 1000 symbols");
  require(probe_symbols >= 10000, "noise calibration needs at least 10000 probe symbols");
  require(!receivers.empty(), "no receivers requested");
  for (const std::string& r : receivers) require(known_receiver(r), "unknown receiver name");
  if (normalize_inputs) require(normalize_target_rms > 0.0, "normalization target must be positive");
}

Experiment experiment_from_config(const ConfigFile& cfg) {
  Experiment ex;
  if (cfg.has("channel", "matrix_csv")) {
    ex.channel = read_channel_csv(cfg.resolve_path(cfg.get_str("channel", "matrix_csv")));
  } else {
    OpticalParams optics;
    optics.lambda_order = cfg.get_double("channel", "lambertian_order", 1.0);
    optics.phi_c = cfg.get_double("channel", "fov_deg", 62.0) * kPi / 180.0;
    optics.gamma = cfg.get_double("channel", "concentrator_index", 1.5);
    optics.a_pd = cfg.get_double("channel", "pd_area_cm2", 1.0) * 1e-4;
    const ChannelGeometry g = make_grid_scene(
        static_cast<int>(cfg.get_int("channel", "led_rows")),
        static_cast<int>(cfg.get_int("channel", "led_cols")),
        cfg.get_double("channel", "led_spacing_m"),
        static_cast<int>(cfg.get_int("channel", "pd_rows")),
        static_cast<int>(cfg.get_int("channel", "pd_cols")),
        cfg.get_double("channel", "pd_spacing_m"), cfg.get_double("channel", "height_m"), optics);
    ex.channel = build_channel_matrix(g);
  }
  if (cfg.has("led", "coeffs")) {
    ex.nonlinearity.coeffs = cfg.get_double_list("led", "coeffs");
  } else if (cfg.has("led", "coeffs_file")) {
    ex.nonlinearity = read_coeffs_text(cfg.resolve_path(cfg.get_str("led", "coeffs_file")));
  } else {
    const auto samples = read_iv_csv(cfg.resolve_path(cfg.get_str("led", "iv_csv")));
    ex.nonlinearity =
        fit_polynomial_iv(samples, static_cast<int>(cfg.get_int("led", "fit_order", 5)));
  }
  ex.nonlinearity.validate();
  ex.constellation = PamConstellation::uniform(static_cast<int>(cfg.get_int("signal", "pam_order", 4)),
                                               cfg.get_double("signal", "v_min"),
                                               cfg.get_double("signal", "v_max"));
  ex.hidden = static_cast<std::size_t>(cfg.get_int("receiver", "hidden", 128));
  ex.ridge = cfg.get_double("receiver", "ridge", 1e-6);
  ex.activation = cfg.get_str("receiver", "activation", "sigmoid");
  ex.training_symbols = static_cast<std::size_t>(cfg.get_int("receiver", "training_symbols", 1000));
  ex.normalize_inputs = cfg.get_bool("receiver", "normalize_inputs", false);
  ex.normalize_target_rms = cfg.get_double("receiver", "normalize_target_rms", 0.125);
  ex.postdistorter_order =
      static_cast<std::size_t>(cfg.get_int("receiver", "postdistorter_order", 5));
  if (cfg.has("sweep", "snr_db")) {
    ex.snr_grid_db = cfg.get_double_list("sweep", "snr_db");
  } else {
    ex.snr_grid_db = {20, 25, 30, 35, 40, 45, 50};
  }
  ex.payload_symbols = static_cast<std::size_t>(cfg.get_int("sweep", "payload_symbols", 100000));
  ex.probe_symbols = static_cast<std::size_t>(cfg.get_int("sweep", "probe_symbols", 10000));
  if (cfg.has("sweep", "receivers")) {
    ex.receivers = cfg.get_str_list("sweep", "receivers");
  } else {
    ex.receivers = {"zf", "lmmse", "zf+pd", "lmmse+pd", "elm", "celm"};
  }
  ex.master_seed = cfg.get_u64("sweep", "master_seed", 1);
  ex.config_hash = fnv1a64(cfg.raw_text);
  ex.validate();
  return ex;
}

Experiment load_experiment(const std::string& cfg_path) {
  return experiment_from_config(ConfigFile::load(cfg_path));
}

namespace {

struct PointFrames {
  double noise_var = 0.0;
  TrainingSet train;
  Mat payload_x;
  Mat payload_r;
};

PointFrames make_point_frames(const Experiment& ex, double snr_db, std::uint64_t point,
                              double signal_power, std::size_t payload_symbols) {
  PointFrames f;
  f.noise_var = noise_variance_for_snr(signal_power, snr_db);
  Prng train_syms(derive_seed(ex.master_seed, Stream::training_symbols, point));
  Prng train_noise(derive_seed(ex.master_seed, Stream::training_noise, point));
  f.train = make_training_set(ex.channel, ex.nonlinearity, ex.constellation, ex.training_symbols,
                              f.noise_var, train_syms, train_noise);
  Prng pay_syms(derive_seed(ex.master_seed, Stream::payload_symbols, point));
  Prng pay_noise(derive_seed(ex.master_seed, Stream::payload_noise, point));
  f.payload_x =
      draw_symbol_frame(ex.constellation, ex.channel.gains.cols, payload_symbols, pay_syms);
  f.payload_r = transmit_frame(ex.channel, ex.nonlinearity, f.payload_x, f.noise_var, pay_noise);
  return f;
}

Mat receiver_estimates(const Experiment& ex, const std::string& name, const PointFrames& f,
                       std::uint64_t point) {
  const ChannelMatrix& H = ex.channel;
  if (name == "zf") return build_zf(H).apply(f.payload_r);
  if (name == "lmmse")
    return build_lmmse(H, ex.constellation, f.noise_var).apply(f.payload_r);
  if (name == "zf+pd" || name == "lmmse+pd") {
    const LinearEqualizer eq =
        name == "zf+pd" ? build_zf(H) : build_lmmse(H, ex.constellation, f.noise_var);
    const Postdistorter pd =
        fit_postdistorter(eq.apply(f.train.received), f.train.symbols, ex.postdistorter_order);
    return pd.apply(eq.apply(f.payload_r));
  }
  if (name == "elm") {
    ElmModel m = init_elm(ex.hidden, H.gains.rows,
                          derive_seed(ex.master_seed, Stream::elm_init, point), ex.activation);
    if (ex.normalize_inputs) m.norm = fit_center_scale(f.train.received, ex.normalize_target_rms);
    train_receiver(m, f.train, ex.ridge);
    return elm_infer(m, f.payload_r);
  }
  if (name == "celm") {
    CirculantElmModel m =
        init_circulant(ex.hidden, H.gains.rows,
                       derive_seed(ex.master_seed, Stream::celm_init, point), ex.activation);
    if (ex.normalize_inputs) m.norm = fit_center_scale(f.train.received, ex.normalize_target_rms);
    train_circulant_receiver(m, f.train, ex.ridge);
    return circulant_infer(m, f.payload_r);
  }
  throw std::invalid_argument("unknown receiver name: " + name);
}

double measured_signal_power(const Experiment& ex) {
  Prng probe(derive_seed(ex.master_seed, Stream::probe_symbols, 0));
  return measure_signal_power(ex.channel, ex.nonlinearity, ex.constellation, ex.probe_symbols,
                              probe);
}

std::uint64_t point_index_for(const Experiment& ex, double snr_db) {
  for (std::size_t i = 0; i < ex.snr_grid_db.size(); ++i)
    if (ex.snr_grid_db[i] == snr_db) return i;
  return fnv1a64(g17(snr_db));
}

}  // namespace

std::vector<SerRecord> run_ser_sweep(const Experiment& ex, bool timing) {
  ex.validate();
  const double p_sig = measured_signal_power(ex);
  std::vector<std::vector<SerRecord>> grouped(ex.receivers.size());
  for (std::size_t i = 0; i < ex.snr_grid_db.size(); ++i) {
    const PointFrames f =
        make_point_frames(ex, ex.snr_grid_db[i], i, p_sig, ex.payload_symbols);
    for (std::size_t ri = 0; ri < ex.receivers.size(); ++ri) {
      SerRecord rec;
      rec.receiver = ex.receivers[ri];
      rec.snr_db = ex.snr_grid_db[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Mat est = receiver_estimates(ex, rec.receiver, f, i);
        const Mat dec = ex.constellation.detect(est);
        rec.symbols = dec.size();
        for (std::size_t k = 0; k < dec.size(); ++k)
          if (dec.a[k] != f.payload_x.a[k]) ++rec.errors;
        rec.ser = static_cast<double>(rec.errors) / static_cast<double>(rec.symbols);
        rec.low_confidence = rec.ser >= 1e-3 && rec.errors < 100;
      } catch (const std::exception& e) {
        rec.failure = e.what();
      }
      if (timing) {
        const auto t1 = std::chrono::steady_clock::now();
        rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
      }
      grouped[ri].push_back(rec);
    }
  }
  std::vector<SerRecord> out;
  for (std::vector<SerRecord>& g : grouped) {
    std::stable_sort(g.begin(), g.end(),
                     [](const SerRecord& a, const SerRecord& b) { return a.snr_db < b.snr_db; });
    for (SerRecord& r : g) out.push_back(std::move(r));
  }
  return out;
}

std::string ser_csv_text(const Experiment& ex, const std::vector<SerRecord>& records) {
  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(ex.config_hash));
  out << "# format=1\n";
  out << "# config_hash=" << hash << "\n";
  out << "# master_seed=" << ex.master_seed << "\n";
  for (const SerRecord& r : records)
    if (!r.failure.empty())
      out << "# failed receiver=" << r.receiver << " snr_db=" << g17(r.snr_db) << " error="
          << r.failure << "\n";
  std::string flagged;
  for (const SerRecord& r : records)
    if (r.failure.empty() && r.low_confidence)
      flagged += (flagged.empty() ? "" : ",") + r.receiver + "@" + g17(r.snr_db);
  if (!flagged.empty()) out << "# low_confidence=" << flagged << "\n";
  out << "receiver,snr_db,symbols,errors,ser,wall_time_s\n";
  for (const SerRecord& r : records) {
    if (!r.failure.empty()) continue;
    out << r.receiver << ',' << g17(r.snr_db) << ',' << r.symbols << ',' << r.errors << ','
        << g17(r.ser) << ',' << g17(r.wall_time_s) << "\n";
  }
  return out.str();
}

void write_ser_csv(const std::string& path, const Experiment& ex,
                   const std::vector<SerRecord>& records) {
  std::ofstream out(path);
  require(out.is_open(), "cannot open output file for writing");
  out << ser_csv_text(ex, records);
  require(out.good(), "failed while writing output file");
}

std::vector<std::string> monotonicity_violations(const std::vector<SerRecord>& records) {
  std::map<std::string, std::vector<const SerRecord*>> by_receiver;
  for (const SerRecord& r : records)
    if (r.failure.empty() && r.symbols > 0) by_receiver[r.receiver].push_back(&r);
  std::vector<std::string> out;
  for (auto& entry : by_receiver) {
    std::vector<const SerRecord*>& recs = entry.second;
    std::stable_sort(recs.begin(), recs.end(),
                     [](const SerRecord* a, const SerRecord* b) { return a->snr_db < b->snr_db; });
    for (std::size_t i = 1; i < recs.size(); ++i) {
      const SerRecord& lo = *recs[i - 1];
      const SerRecord& hi = *recs[i];
      if (hi.snr_db == lo.snr_db) continue;
      const double se_lo = std::sqrt(lo.ser * (1.0 - lo.ser) / static_cast<double>(lo.symbols));
      const double se_hi = std::sqrt(hi.ser * (1.0 - hi.ser) / static_cast<double>(hi.symbols));
      const double slack = 3.0 * std::sqrt(se_lo * se_lo + se_hi * se_hi);
      if (hi.ser > lo.ser + slack)
        out.push_back(entry.first + ": ser rises from " + g17(lo.ser) + " at " + g17(lo.snr_db) +
                      " dB to " + g17(hi.ser) + " at " + g17(hi.snr_db) + " dB");
    }
  }
  return out;
}

ConstellationDump dump_constellation(const Experiment& ex, const std::string& receiver,
                                     double snr_db, std::size_t n_symbols) {
  ex.validate();
  require(known_receiver(receiver), "unknown receiver name");
  require(n_symbols >= 1, "need at least one symbol");
  const double p_sig = measured_signal_power(ex);
  const std::uint64_t point = point_index_for(ex, snr_db);
  const PointFrames f = make_point_frames(ex, snr_db, point, p_sig, n_symbols);
  ConstellationDump d;
  d.receiver = receiver;
  d.snr_db = snr_db;
  d.estimates = receiver_estimates(ex, receiver, f, point);
  d.truth = f.payload_x;
  return d;
}

std::string constellation_csv_text(const Experiment& ex, const ConstellationDump& dump) {
  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(ex.config_hash));
  out << "# format=1\n";
  out << "# config_hash=" << hash << "\n";
  out << "# master_seed=" << ex.master_seed << "\n";
  out << "# receiver=" << dump.receiver << "\n";
  out << "# snr_db=" << g17(dump.snr_db) << "\n";
  out << "stream, true_level, estimate\n";
  for (std::size_t n = 0; n < dump.truth.rows; ++n)
    for (std::size_t u = 0; u < dump.truth.cols; ++u)
      out << n << ", " << g17(dump.truth(n, u)) << ", " << g17(dump.estimates(n, u)) << "\n";
  return out.str();
}

void write_constellation_csv(const std::string& path, const Experiment& ex,
                             const ConstellationDump& dump) {
  std::ofstream out(path);
  require(out.is_open(), "cannot open output file for writing");
  out << constellation_csv_text(ex, dump);
  require(out.good(), "failed while writing output file");
}

}  // namespace vlc
