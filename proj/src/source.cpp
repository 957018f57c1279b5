#include "tfswap/source.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tfswap/errors.hpp"
#include "tfswap/kernels.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

void validate(const PumpParams& p) {
  if (!(p.power_W >= 0.0) || !std::isfinite(p.power_W)) throw ConfigError("P_avg must be >= 0");
  if (!(p.rep_rate_Hz > 0.0)) throw ConfigError("R_R must be positive");
  if (!(p.sigma > 0.0)) throw ConfigError("sigma_p must be positive");
  if (!(p.center > 0.0)) throw ConfigError("pump center frequency must be positive");
}

SourceConstants SourceConstants::from_d24(double d24_pm_per_V, double area_um2) {
  return {2.0 * d24_pm_per_V / pi, area_um2};
}

double SourceConstants::b() { return si::eps0 / (2.0 * si::hbar * two_pi * two_pi * two_pi); }

void validate(const SourceConstants& k) {
  if (!(k.d_pm_per_V > 0.0)) throw ConfigError("effective nonlinearity d must be positive");
  if (!(k.area_um2 > 0.0)) throw ConfigError("interaction area A_I must be positive");
}

double pump_amplitude(const PumpParams& p, double wp) {
  if (!(wp > 0.0)) throw DomainError("pump_amplitude: frequency must be positive");
  const double w_si = wp * per_fs_to_per_s, s_si = p.sigma * per_fs_to_per_s;
  const double peak = std::sqrt(p.power_W / (si::hbar * w_si * s_si * std::sqrt(pi) * p.rep_rate_Hz));
  const double u = (wp - p.center) / p.sigma;
  return peak * std::exp(-0.5 * u * u);
}

double field_factor(double omega, double n) {
  return std::sqrt(si::hbar * omega * per_fs_to_per_s / (2.0 * si::eps0 * n * si::c));
}

SpdcSource::SpdcSource(const SellmeierSet& s, CrystalParams crystal, PumpParams pump, SourceConstants k)
    : s_(s), crystal_(crystal), pump_(pump), k_(k) {
  validate(crystal_);
  validate(pump_);
  validate(k_);
  prefactor_ = SourceConstants::b() * k_.d_pm_per_V * pm_to_m * two_pi * two_pi /
               std::sqrt(k_.area_um2 * um_to_m * um_to_m);
}

std::complex<double> SpdcSource::amplitude(double wi, double ws) const {
  const double wp = wi + ws;
  if (std::abs(wp - pump_.center) > pump_cutoff_sigmas * pump_.sigma || pump_.power_W == 0.0) {
    // still reject signal/idler frequencies the model cannot describe
    refractive_index(s_.y, ws);
    refractive_index(s_.z, wi);
    return 0.0;
  }
  const double ny_s = refractive_index(s_.y, ws), nz_i = refractive_index(s_.z, wi), ny_p = refractive_index(s_.y, wp);
  const double dk = ny_s * ws / c_um_per_fs + nz_i * wi / c_um_per_fs - ny_p * wp / c_um_per_fs +
                    crystal_.qpm_order * two_pi / crystal_.poling_period_um;
  const double ell = field_factor(wp, ny_p) * field_factor(ws, ny_s) * field_factor(wi, nz_i);
  return prefactor_ * ell * pump_amplitude(pump_, wp) * (pm_sinc(crystal_, dk) * um_to_m);
}

Jsa source_jsa(const SpdcSource& src, const FrequencyGrid& grid_i, const FrequencyGrid& grid_s, Exec exec) {
  validate(grid_i, "idler grid");
  validate(grid_s, "signal grid");
  const double lobe = main_lobe_half_width(src, grid_i.center(), grid_s.center());
  if (grid_i.spacing > lobe || grid_s.spacing > lobe)
    throw ConfigError("grid spacing " + std::to_string(std::max(grid_i.spacing, grid_s.spacing)) +
                      " rad/fs does not resolve the phase-matching main lobe (half-width " + std::to_string(lobe) +
                      " rad/fs)");
  return {grid_i, grid_s, sample_source(src, grid_i, grid_s, exec)};
}

Jsa source_jsa(const SellmeierSet& s, const CrystalParams& crystal, const PumpParams& pump, const SourceConstants& k,
               const FrequencyGrid& grid_i, const FrequencyGrid& grid_s, Exec exec) {
  return source_jsa(SpdcSource(s, crystal, pump, k), grid_i, grid_s, exec);
}

double pair_probability(const Jsa& jsa) {
  const auto wi = trapezoid_weights(jsa.grid_i.count), ws = trapezoid_weights(jsa.grid_s.count);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < jsa.amplitude.cols(); ++k) {
    double col = 0.0;
    for (Eigen::Index j = 0; j < jsa.amplitude.rows(); ++j) col += wi[j] * std::norm(jsa.amplitude(j, k));
    sum += ws[k] * col;
  }
  return sum * jsa.grid_i.spacing * per_fs_to_per_s * jsa.grid_s.spacing * per_fs_to_per_s;
}

double calibrate_pump_power(double target, const SpdcSource& src, const FrequencyGrid& grid_i,
                            const FrequencyGrid& grid_s) {
  if (!(target >= 0.0) || target >= 1.0) throw DomainError("calibrate_pump_power: target must lie in [0, 1)");
  if (target == 0.0) return 0.0;
  PumpParams ref = src.pump();
  if (ref.power_W == 0.0) ref.power_W = 1.0;
  const double xi2 = pair_probability(source_jsa(SpdcSource(src.sellmeier(), src.crystal(), ref, src.constants()),
                                                 grid_i, grid_s));
  if (!(xi2 > 0.0)) throw NumericalError("calibrate_pump_power: zero pair probability at the reference power");
  return ref.power_W * target / xi2;
}

double main_lobe_half_width(const SpdcSource& src, double wi0, double ws0) {
  const auto& s = src.sellmeier();
  const double wp0 = wi0 + ws0;
  // |d dk / d w| along each axis with the other field held fixed
  const double kp = group_slowness(s.y, wp0);
  const double along_s = std::abs(group_slowness(s.y, ws0) - kp);
  const double along_i = std::abs(group_slowness(s.z, wi0) - kp);
  const double slope = std::max(along_s, along_i);
  return two_pi / (src.crystal().length_um * slope);
}

SourceGrids capture_grids(const SpdcSource& src, double wi0, double ws0, double spacing, double capture,
                          std::size_t max_half_cells) {
  if (!(capture > 0.0 && capture <= 1.0)) throw ConfigError("grid_capture must lie in (0, 1]");
  if (!(spacing > 0.0)) throw ConfigError("grid spacing must be positive");
  // largest reference box whose signal and idler nodes stay inside the model
  const auto& s = src.sellmeier();
  auto fits = [&](std::size_t h) {
    const double d = spacing * static_cast<double>(h);
    const double lo_i = wi0 - d, hi_i = wi0 + d, lo_s = ws0 - d, hi_s = ws0 + d;
    auto ok = [](const SellmeierModel& m, double w) {
      const double lam = wavelength_um(w);
      return w > 0.0 && lam >= m.lambda_min_um && lam <= m.lambda_max_um;
    };
    return ok(s.z, lo_i) && ok(s.z, hi_i) && ok(s.y, lo_s) && ok(s.y, hi_s);
  };
  std::size_t ref = max_half_cells;
  while (ref > 0 && !fits(ref)) --ref;
  if (ref < 2) throw ConfigError("no admissible reference box for the grid-extent rule");

  const auto box = FrequencyGrid::centered(wi0, spacing, ref), boxs = FrequencyGrid::centered(ws0, spacing, ref);
  const Eigen::MatrixXcd phi = sample_source(src, box, boxs, Exec::parallel);
  // probability on each square ring |j - ref|, |k - ref| with Chebyshev radius r
  std::vector<double> ring(ref + 1, 0.0);
  for (Eigen::Index k = 0; k < phi.cols(); ++k)
    for (Eigen::Index j = 0; j < phi.rows(); ++j) {
      const auto r = static_cast<std::size_t>(std::max(std::abs(static_cast<long>(j) - static_cast<long>(ref)),
                                                       std::abs(static_cast<long>(k) - static_cast<long>(ref))));
      ring[r] += std::norm(phi(j, k));
    }
  double total = 0.0;
  for (double x : ring) total += x;
  SourceGrids out;
  out.reference_half_cells = ref;
  if (!(total > 0.0)) throw ConfigError("source amplitude vanishes on the reference box; cannot size the grids");
  double acc = 0.0;
  for (std::size_t h = 0; h <= ref; ++h) {
    acc += ring[h];
    if (acc >= capture * total || h == ref) {
      out.half_cells = std::max<std::size_t>(h, 1);
      out.captured = acc / total;
      break;
    }
  }
  out.grid_i = FrequencyGrid::centered(wi0, spacing, out.half_cells);
  out.grid_s = FrequencyGrid::centered(ws0, spacing, out.half_cells);
  return out;
}

DensityMatrix source_density_matrix(const Jsa& jsa, double eta, bool coherent) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("source_density_matrix: eta must lie in [0, 1]");
  const auto ni = static_cast<std::size_t>(jsa.amplitude.rows()), ns = static_cast<std::size_t>(jsa.amplitude.cols());
  const double norm = jsa.amplitude.norm();
  const std::size_t dim = ni * ns + 1;
  // cell-weighted amplitudes; uniform spacing means plain normalisation
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  if (norm > 0.0) {
    for (std::size_t j = 0; j < ni; ++j)
      for (std::size_t k = 0; k < ns; ++k)
        v(static_cast<Eigen::Index>(1 + j * ns + k)) = jsa.amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) / norm;
  } else if (eta > 0.0) {
    throw DomainError("source_density_matrix: zero JSA cannot be normalised");
  }
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  vac(0) = 1.0;
  Eigen::MatrixXcd f;
  if (coherent) {
    f = std::sqrt(1.0 - eta) * vac + std::sqrt(eta) * v;
  } else {
    f.resize(static_cast<Eigen::Index>(dim), 2);
    f.col(0) = std::sqrt(1.0 - eta) * vac;
    f.col(1) = std::sqrt(eta) * v;
  }
  return DensityMatrix::from_factor(std::move(f), ni, ns, true);
}

}  // namespace tfswap
