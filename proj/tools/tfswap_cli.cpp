// tfswap: source JSI, swap sweeps, toy negativity, rates, acceptance checks.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tfswap/acceptance.hpp"
#include "tfswap/config.hpp"
#include "tfswap/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Entanglement swapping by sum-frequency generation: spectra, rates, purity and negativity"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int threads = -1;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("-s,--set", overrides, "override one key, e.g. --set L_SFG_sweep_mm=0.5")->take_all();
  app.add_option("-o,--out", out_dir, "output directory (output_dir)");
  app.add_option("-j,--threads", threads, "thread budget (threads); 0 = all cores");

  auto* src = app.add_subcommand("source-jsi", "single-source JSI, pair probability and baseline state metrics");
  bool calibrate = false;
  src->add_flag("--calibrate", calibrate, "also report P_avg giving a pair probability of 0.1");
  auto* swp = app.add_subcommand("swap", "L_SFG sweep: psi, herald spectrum, per-bin purity and negativity");
  auto* toy = app.add_subcommand("toy", "negativity of the N-mode vacuum-mixed toy states");
  auto* rates = app.add_subcommand("rates", "pair probability, SFG probability and event rates");
  auto* val = app.add_subcommand("validate", "run the acceptance checks and print one line per criterion");
  std::vector<int> only;
  val->add_option("--only", only, "run only these criterion numbers, e.g. 1,3")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    tfswap::SimConfig cfg;
    if (!config_path.empty()) cfg = tfswap::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw tfswap::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (threads >= 0) cfg.threads = threads;
    cfg.validate();

    std::vector<std::string> files;
    if (*src) files = tfswap::run_source_jsi(cfg, calibrate);
    if (*swp) files = tfswap::run_swap(cfg);
    if (*toy) files = tfswap::run_toy(cfg);
    if (*rates) files = tfswap::run_rates(cfg);
    if (*val) {
      const auto results = tfswap::run_acceptance(cfg, only, std::cout);
      return tfswap::all_passed(results) ? 0 : 1;
    }
    for (const auto& f : files) std::cout << f << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
