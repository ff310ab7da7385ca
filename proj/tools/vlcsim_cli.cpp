#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vlcsim/complexity.hpp"
#include "vlcsim/geometry.hpp"
#include "vlcsim/harness.hpp"
#include "vlcsim/nonlinearity.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os.is_open()) throw std::runtime_error("cannot open " + out_path + " for writing");
  os << text;
  if (!os.good()) throw std::runtime_error("failed while writing " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LED MIMO link simulator and receiver bench"};
  app.require_subcommand(1);

  std::string cfg_path, out_path, iv_path, receiver;
  std::uint64_t seed = 0;
  bool seed_given = false, timing = false, csv_fmt = false;
  double snr_db = 45.0;
  std::size_t n_symbols = 4000, hidden = 128, inputs = 64;
  int fit_order = 5;

  CLI::App* channel = app.add_subcommand("channel", "write the optical gain matrix as csv");
  channel->add_option("--config", cfg_path, "experiment config file")->required();
  channel->add_option("--out", out_path, "output file, stdout when omitted");

  CLI::App* fit = app.add_subcommand("fit-nonlinearity",
                                     "fit a polynomial drive curve to current-voltage samples");
  fit->add_option("--iv", iv_path, "csv of volts, amps samples")->required();
  fit->add_option("--order", fit_order, "polynomial order")->default_val(5);
  fit->add_option("--out", out_path, "output file, stdout when omitted");

  CLI::App* sweep = app.add_subcommand("ser-sweep", "run the symbol error rate sweep");
  sweep->add_option("--config", cfg_path, "experiment config file")->required();
  sweep->add_option("--out", out_path, "output file, stdout when omitted");
  sweep->add_option("--seed", seed, "override the master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  sweep->add_flag("--timing", timing, "record wall times, breaks run-to-run byte equality");

  CLI::App* scatter =
      app.add_subcommand("constellation", "dump soft estimates against the sent levels");
  scatter->add_option("--config", cfg_path, "experiment config file")->required();
  scatter->add_option("--receiver", receiver, "receiver name")->required();
  scatter->add_option("--snr", snr_db, "operating point in dB")->required();
  scatter->add_option("--symbols", n_symbols, "payload symbols to dump")->default_val(4000);
  scatter->add_option("--seed", seed, "override the master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  scatter->add_option("--out", out_path, "output file, stdout when omitted");

  CLI::App* complexity =
      app.add_subcommand("complexity", "per-symbol multiply budget of the hidden stage");
  complexity->add_option("--hidden", hidden, "hidden layer size")->required();
  complexity->add_option("--inputs", inputs, "input vector length")->required();
  complexity->add_flag("--csv", csv_fmt, "csv instead of the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (channel->parsed()) {
      const vlc::Experiment ex = vlc::load_experiment(cfg_path);
      std::ostringstream os;
      vlc::write_channel_csv(ex.channel, os);
      emit(os.str(), out_path);
    } else if (fit->parsed()) {
      const auto samples = vlc::read_iv_csv(iv_path);
      const vlc::PolynomialNonlinearity nl = vlc::fit_polynomial_iv(samples, fit_order);
      double lo = samples.front().first, hi = lo;
      for (const auto& s : samples) {
        lo = std::min(lo, s.first);
        hi = std::max(hi, s.first);
      }
      if (!nl.strictly_increasing_on(lo, hi))
        std::cerr << "warning: fitted curve is not strictly increasing on the sample range\n";
      std::ostringstream os;
      vlc::write_coeffs_text(nl, os);
      emit(os.str(), out_path);
    } else if (sweep->parsed()) {
      vlc::Experiment ex = vlc::load_experiment(cfg_path);
      if (seed_given) ex.master_seed = seed;
      const std::vector<vlc::SerRecord> recs = vlc::run_ser_sweep(ex, timing);
      for (const std::string& w : vlc::monotonicity_violations(recs))
        std::cerr << "warning: " << w << "\n";
      emit(vlc::ser_csv_text(ex, recs), out_path);
    } else if (scatter->parsed()) {
      vlc::Experiment ex = vlc::load_experiment(cfg_path);
      if (seed_given) ex.master_seed = seed;
      const vlc::ConstellationDump d = vlc::dump_constellation(ex, receiver, snr_db, n_symbols);
      emit(vlc::constellation_csv_text(ex, d), out_path);
    } else if (complexity->parsed()) {
      const vlc::ComplexityReport rep = vlc::complexity_report(hidden, inputs);
      emit(csv_fmt ? vlc::format_complexity_csv(rep) : vlc::format_complexity_table(rep),
           out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
