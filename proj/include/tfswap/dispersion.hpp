#pragma once

#include <string>
#include <vector>

namespace tfswap {

enum class Axis { x, y, z };

const char* axis_name(Axis a);

// n^2 = A + sum_j B_j / (lambda^2 - C_j), lambda in um.
struct SellmeierModel {
  Axis axis = Axis::y;
  double A = 1.0;
  std::vector<double> B;
  std::vector<double> C;
  double lambda_min_um = 0.0;
  double lambda_max_um = 0.0;

  static SellmeierModel constant(Axis axis, double n, double lambda_min_um = 0.1, double lambda_max_um = 100.0);
};

struct SellmeierSet {
  SellmeierModel x, y, z;
  const SellmeierModel& operator[](Axis a) const;
};

SellmeierSet load_sellmeier(const std::string& path);
std::string default_sellmeier_path();
// Loaded once from default_sellmeier_path().
const SellmeierSet& default_ktp();

double refractive_index(const SellmeierModel& m, double omega);
double wavevector(const SellmeierModel& m, double omega);  // rad/um

inline constexpr double default_slowness_step = 1e-4;  // rad/fs

double group_slowness(const SellmeierModel& m, double omega, double h = default_slowness_step);  // fs/um
double group_index(const SellmeierModel& m, double omega, double h = default_slowness_step);

}  // namespace tfswap
