#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfswap/config.hpp"
#include "tfswap/io.hpp"
#include "tfswap/measurement.hpp"
#include "tfswap/source.hpp"
#include "tfswap/swap.hpp"

namespace tfswap {

// SimConfig converted to internal units.
struct Design {
  SellmeierSet sellmeier;
  CrystalParams crystal;
  PumpParams pump;
  SourceConstants constants;
  double wi0 = 0.0, ws0 = 0.0;  // rad/fs
  double spacing = 0.0;         // bystander / source grids, rad/fs
  double spacing_sfg = 0.0;     // rad/fs
};

Design make_design(const SimConfig& c);
SpdcSource make_source(const Design& d);
CrystalParams sfg_crystal(const SimConfig& c, double L_SFG_mm);
NegativityOptions negativity_options(const SimConfig& c);
std::size_t memory_budget_bytes(const SimConfig& c);

struct SourceRun {
  SourceGrids grids;
  Jsa jsa;
  double pair_probability = 0.0;
};

// Grids from grid_half_cells when set, otherwise the capture rule.
SourceRun build_source(const SimConfig& c, const Design& d);

SwapGrids swap_grids(const SimConfig& c, const Design& d, const SourceRun& src);
ThreeFreqJsa build_psi(const SimConfig& c, const Design& d, const SourceRun& src, double L_SFG_mm,
                       Exec exec = Exec::parallel);

struct StateMetrics {
  double center = 0.0;       // rad/fs (bins only)
  double probability = 0.0;  // p_n or Xi^2
  double purity = 0.0;
  NegativityReport negativity;
  double trace = 0.0;
  double hermiticity = 0.0;     // max |rho - rho^H| over sampled entries
  double centroid_sum = 0.0;    // population-weighted w_b1 + w_b2, rad/fs
  double min_diagonal = 0.0;
  Eigen::MatrixXd jsi;          // populations, kept when requested
};

struct SwapRunOptions {
  bool states = true;        // build density matrices and their metrics
  bool unresolved = true;
  bool keep_jsi = false;
  Exec exec = Exec::parallel;
};

struct SwapResult {
  double L_SFG_mm = 0.0;
  SwapGrids grids;
  std::size_t quadrature_points = 0;
  double xi2_source = 0.0;
  double Xi2 = 0.0;
  double herald_rate = 0.0, false_rate = 0.0, multi_pair = 0.0;
  std::vector<double> slice_probability;  // per SFG node
  MeasurementBinning bins;
  std::vector<double> spectrum;           // p_n
  std::vector<StateMetrics> bin_metrics;
  StateMetrics unresolved;
  double avg_purity = 0.0, avg_negativity = 0.0;
  double seconds = 0.0;
};

SwapResult evaluate_swap(const SimConfig& c, double L_SFG_mm, const SwapRunOptions& opt = {});
// Same, reusing an already built source.
SwapResult evaluate_swap(const SimConfig& c, const Design& d, const SourceRun& src, double L_SFG_mm,
                         const SwapRunOptions& opt = {});

nlohmann::json metrics_json(const SimConfig& c, const SwapResult& r);

// Subcommand bodies; return the written file paths.
std::vector<std::string> run_source_jsi(const SimConfig& c, bool calibrate);
std::vector<std::string> run_swap(const SimConfig& c);
std::vector<std::string> run_toy(const SimConfig& c);
std::vector<std::string> run_rates(const SimConfig& c);

void apply_thread_budget(const SimConfig& c);

}  // namespace tfswap
