#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tfswap {

// `key = value` lines; '#' starts a comment. Later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

double parse_double(const std::string& s, const std::string& key);
long parse_long(const std::string& s, const std::string& key);
std::vector<double> parse_double_list(const std::string& s, const std::string& key);

// All parameters in the units of their key names; converted where used.
struct SimConfig {
  double L_mm = 0.50;
  double L_SFG_mm = 0.50;
  std::vector<double> L_SFG_sweep_mm = {0.25, 0.5, 1.0, 2.0, 4.0};
  double poling_period_um = 8.33;
  double poling_period_SFG_um = 8.33;
  double omega_p_rad_per_fs = 4.651;
  double omega_s_rad_per_fs = 3.090;
  double omega_i_rad_per_fs = 1.561;
  double sigma_p_rad_per_ps = 7.7245;
  double delta_omega_SFG_rad_per_ps = 1.287;
  double delta_omega_si_rad_per_ps = 4.544;
  double P_avg_W = 1.380;
  double R_R_GHz = 1.0;
  double d24_pm_per_V = 3.92;
  double A_I_um2 = 15.0;
  long Q = 3;
  long N_bins = 8;
  long integrationPoints = 300;
  double grid_capture = 0.99;
  long grid_half_cells = 0;  // 0: use grid_capture
  long grid_reference_half_cells = 220;
  double gamma = 0.9;
  double eta = 0.1;
  double kappa = 12.8831;
  double support_tolerance = 1e-6;
  double memory_budget_GB = 8.0;
  long threads = 0;  // 0: OpenMP default
  std::string output_dir = "out";
  std::string sellmeier_file;  // empty: shipped KTP data
  std::vector<double> toy_N = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17};
  std::vector<double> toy_eta = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                                 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};

  void set(const std::string& key, const std::string& value);
  void apply(const std::map<std::string, std::string>& kv);
  static std::vector<std::string> keys();
  std::map<std::string, std::string> values() const;

  // Canonical `key = value` listing (sorted keys, full precision) of the
  // settings that affect results; threads, output_dir and the memory budget
  // are left out.
  std::string canonical() const;
  // FNV-1a of canonical(), hex.
  std::string hash() const;

  void validate() const;
};

SimConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace tfswap
