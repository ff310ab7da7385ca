#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "vlcsim/config.hpp"
#include "vlcsim/constellation.hpp"
#include "vlcsim/geometry.hpp"
#include "vlcsim/matrix.hpp"
#include "vlcsim/nonlinearity.hpp"

namespace vlc {

struct Experiment {
  ChannelMatrix channel;
  PolynomialNonlinearity nonlinearity;
  PamConstellation constellation;

  std::size_t hidden = 128;
  double ridge = 1e-6;
  std::string activation = "sigmoid";
  std::size_t training_symbols = 1000;
  bool normalize_inputs = false;
  double normalize_target_rms = 0.125;
  std::size_t postdistorter_order = 5;

  std::vector<double> snr_grid_db;
  std::size_t payload_symbols = 100000;
  std::size_t probe_symbols = 10000;
  std::vector<std::string> receivers;
  std::uint64_t master_seed = 1;

  std::uint64_t config_hash = 0;

  void validate() const;
};

Experiment load_experiment(const std::string& cfg_path);
Experiment experiment_from_config(const ConfigFile& cfg);

struct SerRecord {
  std::string receiver;
  double snr_db = 0.0;
  std::size_t symbols = 0;  // stream decisions, streams x uses
  std::size_t errors = 0;
  double ser = 0.0;
  double wall_time_s = 0.0;
  bool low_confidence = false;
  std::string failure;  // nonempty if the receiver could not be built
};

// trains and evaluates every requested receiver on identical frames at
// each grid point; wall times stay zero unless timing is requested so
// that the output text is run-to-run reproducible
std::vector<SerRecord> run_ser_sweep(const Experiment& ex, bool timing = false);

std::string ser_csv_text(const Experiment& ex, const std::vector<SerRecord>& records);
void write_ser_csv(const std::string& path, const Experiment& ex,
                   const std::vector<SerRecord>& records);

// adjacent-point SER increases beyond three combined binomial standard
// errors, reported as human-readable strings; empty means clean
std::vector<std::string> monotonicity_violations(const std::vector<SerRecord>& records);

struct ConstellationDump {
  std::string receiver;
  double snr_db = 0.0;
  Mat truth;      // streams x symbols
  Mat estimates;  // streams x symbols, pre-decision soft values
};

ConstellationDump dump_constellation(const Experiment& ex, const std::string& receiver,
                                     double snr_db, std::size_t n_symbols);

std::string constellation_csv_text(const Experiment& ex, const ConstellationDump& dump);
void write_constellation_csv(const std::string& path, const Experiment& ex,
                             const ConstellationDump& dump);

bool known_receiver(const std::string& name);

}  // namespace vlc
