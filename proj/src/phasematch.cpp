#include "tfswap/phasematch.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tfswap/errors.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

void validate(const CrystalParams& c) {
  if (!(c.length_um > 0.0)) throw ConfigError("crystal length must be positive");
  if (!(c.poling_period_um > 0.0)) throw ConfigError("poling period must be positive");
  if (c.qpm_order < 1) throw ConfigError("quasi-phase-matching order must be >= 1");
}

double delta_k(const SellmeierSet& s, const CrystalParams& c, double wp, double ws, double wi) {
  const double grating = c.qpm_order * two_pi / c.poling_period_um;
  return wavevector(s.y, ws) + wavevector(s.z, wi) - wavevector(s.y, wp) + grating;
}

std::complex<double> pm_sinc(const CrystalParams& c, double dk) {
  const double half = 0.5 * c.length_um * dk;
  const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
  return c.length_um * sinc * std::polar(1.0, -half);
}

double pm_gaussian(const CrystalParams& c, double dk, double kappa_x) {
  if (!(kappa_x > 0.0)) throw DomainError("pm_gaussian: kappa must be positive");
  const double x = c.length_um * dk;
  return c.length_um * std::exp(-x * x / (2.0 * kappa_x * kappa_x));
}

double phase_matching_bandwidth(double kappa, double length_um) { return kappa * c_um_per_fs / length_um; }

GaussianFit fit_gaussian_width(const std::function<double(double)>& target, double window, std::size_t samples,
                               double initial_width) {
  if (samples < 3 || !(window > 0.0) || !(initial_width > 0.0))
    throw DomainError("fit_gaussian_width: need window > 0, width > 0 and at least 3 samples");
  std::vector<double> x(samples), y(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    x[j] = -window + 2.0 * window * static_cast<double>(j) / static_cast<double>(samples - 1);
    y[j] = target(x[j]);
  }
  GaussianFit out;
  out.window = window;
  out.samples = samples;
  double s = initial_width;
  for (int it = 1; it <= 200; ++it) {
    double jr = 0.0, jj = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
      const double g = std::exp(-x[j] * x[j] / (2.0 * s * s));
      const double dg = g * x[j] * x[j] / (s * s * s);
      jr += dg * (g - y[j]);
      jj += dg * dg;
    }
    if (!(jj > 0.0)) break;
    double step = jr / jj;
    // keep the width positive
    while (s - step <= 0.0) step *= 0.5;
    s -= step;
    out.iterations = it;
    if (std::abs(step) <= 1e-13 * s) {
      double ss = 0.0;
      for (std::size_t j = 0; j < samples; ++j) {
        const double r = std::exp(-x[j] * x[j] / (2.0 * s * s)) - y[j];
        ss += r * r;
      }
      out.width = s;
      out.rms_residual = std::sqrt(ss / static_cast<double>(samples));
      return out;
    }
  }
  throw NumericalError("fit_gaussian_width: no convergence after " + std::to_string(out.iterations) +
                       " iterations, last width " + std::to_string(s));
}

double pump_group_index_mismatch(const SellmeierSet& s, double wp, double ws, double wi) {
  return group_index(s.y, wp) - 0.5 * (group_index(s.y, ws) + group_index(s.z, wi));
}

KappaFit fit_kappa(const SellmeierSet& s, double wp, double ws, double wi, const KappaFitOptions& opt) {
  const auto sinc_half = [](double x) { return x == 0.0 ? 1.0 : std::sin(0.5 * x) / (0.5 * x); };
  KappaFit k;
  k.fit = fit_gaussian_width(sinc_half, opt.window, opt.samples, 3.0);
  k.half_window = fit_gaussian_width(sinc_half, 0.5 * opt.window, opt.samples, 3.0);
  k.kappa_x = k.fit.width;
  k.group_index_mismatch = pump_group_index_mismatch(s, wp, ws, wi);
  k.kappa = k.kappa_x / std::abs(k.group_index_mismatch);
  k.sensitivity = k.half_window.width / std::abs(k.group_index_mismatch) - k.kappa;
  return k;
}

double gaussian_separability_residual(double np, double ns, double ni, double sigma_pi, double sigma_p) {
  if (!(sigma_p > 0.0)) throw DomainError("gaussian_separability_residual: sigma_p must be positive");
  const double r = sigma_pi / sigma_p;
  return -(np - ns) * (np - ni) - r * r;
}

}  // namespace tfswap
