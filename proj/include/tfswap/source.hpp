#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "tfswap/density.hpp"
#include "tfswap/dispersion.hpp"
#include "tfswap/grid.hpp"
#include "tfswap/phasematch.hpp"

namespace tfswap {

struct PumpParams {
  double power_W = 1.380;
  double rep_rate_Hz = 1e9;
  double sigma = 7.7245e-3;  // rad/fs, amplitude exp(-(w - w0)^2 / (2 sigma^2))
  double center = 4.651;     // rad/fs
};

void validate(const PumpParams& p);

struct SourceConstants {
  double d_pm_per_V = 2.0 * 3.92 / 3.14159265358979323846;
  double area_um2 = 15.0;

  static SourceConstants from_d24(double d24_pm_per_V, double area_um2);
  // eps0 / (2 hbar (2pi)^3), SI
  static double b();
};

void validate(const SourceConstants& k);

// Pump spectral amplitude, SI: sqrt(photons per pulse per rad/s).
double pump_amplitude(const PumpParams& p, double wp);

// l(w) = sqrt(hbar w / (2 eps0 n c)), SI, w in rad/fs.
double field_factor(double omega, double n);

// Closed-form SPDC joint spectral amplitude of one source, SI units (s).
// Pair probability is iint |Phi|^2 dw_i dw_s with dw in rad/s.
class SpdcSource {
 public:
  SpdcSource(const SellmeierSet& s, CrystalParams crystal, PumpParams pump, SourceConstants k);

  std::complex<double> amplitude(double wi, double ws) const;

  // Beyond this many sigma_p the pump envelope is taken as exactly zero.
  static constexpr double pump_cutoff_sigmas = 10.0;

  const SellmeierSet& sellmeier() const { return s_; }
  const CrystalParams& crystal() const { return crystal_; }
  const PumpParams& pump() const { return pump_; }
  const SourceConstants& constants() const { return k_; }

 private:
  SellmeierSet s_;
  CrystalParams crystal_;
  PumpParams pump_;
  SourceConstants k_;
  double prefactor_;
};

struct Jsa {
  FrequencyGrid grid_i, grid_s;
  Eigen::MatrixXcd amplitude;  // rows: idler nodes, cols: signal nodes
};

Jsa source_jsa(const SpdcSource& src, const FrequencyGrid& grid_i, const FrequencyGrid& grid_s,
               Exec exec = Exec::parallel);

Jsa source_jsa(const SellmeierSet& s, const CrystalParams& crystal, const PumpParams& pump,
               const SourceConstants& k, const FrequencyGrid& grid_i, const FrequencyGrid& grid_s,
               Exec exec = Exec::parallel);

// 2-D trapezoid of |Phi|^2, spacings converted to rad/s.
double pair_probability(const Jsa& jsa);

// P_avg giving the target pair probability (linear in P_avg).
double calibrate_pump_power(double target, const SpdcSource& src, const FrequencyGrid& grid_i,
                            const FrequencyGrid& grid_s);

struct SourceGrids {
  FrequencyGrid grid_i, grid_s;
  std::size_t half_cells = 0;
  double captured = 0.0;        // fraction of the reference-box probability inside
  std::size_t reference_half_cells = 0;
};

// Smallest symmetric box about (wi0, ws0) holding `capture` of the pair
// probability found in a reference box of up to max_half_cells per side.
SourceGrids capture_grids(const SpdcSource& src, double wi0, double ws0, double spacing, double capture,
                          std::size_t max_half_cells = 220);

// Coarsest grid that resolves the sinc main lobe along each axis.
double main_lobe_half_width(const SpdcSource& src, double wi0, double ws0);

// (1 - eta)|vac><vac| + eta |psi><psi| with |psi> the normalised JSA;
// coherent keeps the vacuum-biphoton coherences.
DensityMatrix source_density_matrix(const Jsa& jsa, double eta, bool coherent);

}  // namespace tfswap
