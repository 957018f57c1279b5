#pragma once

#include <complex>
#include <functional>

#include "tfswap/dispersion.hpp"

namespace tfswap {

// Type-II: pump and signal polarised along y, idler along z.
struct CrystalParams {
  double length_um = 500.0;
  double poling_period_um = 8.33;
  int qpm_order = 1;
};

void validate(const CrystalParams& c);

// dk = k_y(ws) + k_z(wi) - k_y(wp) + q 2pi/Lambda, rad/um.
// For SFG pass the sum frequency as wp, the signal-like input as ws.
double delta_k(const SellmeierSet& s, const CrystalParams& c, double wp, double ws, double wi);

// L sinc(L dk/2) exp(-i L dk/2), in um.
std::complex<double> pm_sinc(const CrystalParams& c, double dk);

// Gaussian surrogate of |pm_sinc|: L exp(-(L dk)^2 / (2 kappa_x^2)).
// kappa_x is the width in the dimensionless variable x = L dk.
double pm_gaussian(const CrystalParams& c, double dk, double kappa_x);

// sigma_pi = kappa c / L in rad/fs.
double phase_matching_bandwidth(double kappa, double length_um);

struct GaussianFit {
  double width = 0.0;  // sigma of exp(-x^2/(2 sigma^2))
  double rms_residual = 0.0;
  int iterations = 0;
  double window = 0.0;
  std::size_t samples = 0;
};

// Uniformly weighted least squares of exp(-x^2/(2 s^2)) against target(x) on
// `samples` equispaced points over [-window, window]. Gauss-Newton in s.
GaussianFit fit_gaussian_width(const std::function<double(double)>& target, double window, std::size_t samples,
                               double initial_width);

struct KappaFit {
  GaussianFit fit;                // default window, |x| <= 2 pi
  GaussianFit half_window;        // |x| <= pi, sensitivity
  double kappa_x = 0.0;           // width in x = L dk
  double group_index_mismatch = 0.0;
  double kappa = 0.0;             // frequency-domain kappa = kappa_x / dn_g
  double sensitivity = 0.0;       // kappa(half window) - kappa(default)
};

struct KappaFitOptions {
  double window = 2.0 * 3.14159265358979323846;
  std::size_t samples = 4001;
};

// Fit of exp(-x^2/(2 k'^2)) to sinc(x/2), converted to the frequency-domain
// kappa (sigma_pi = kappa c / L) through the pump/pair group-index mismatch
// at the design frequencies.
KappaFit fit_kappa(const SellmeierSet& s, double wp, double ws, double wi, const KappaFitOptions& opt = {});

// n_g(pump) - (n_g(signal) + n_g(idler)) / 2: d(L dk)/d(delta) = -L dn_g / c
// along the sum-frequency direction.
double pump_group_index_mismatch(const SellmeierSet& s, double wp, double ws, double wi);

// -(np - ns)(np - ni) - sigma_pi^2 / sigma_p^2; zero for a separable Gaussian JSA.
double gaussian_separability_residual(double np, double ns, double ni, double sigma_pi, double sigma_p);

}  // namespace tfswap
