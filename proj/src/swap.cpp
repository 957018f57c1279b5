#include "tfswap/swap.hpp"

#include <cmath>
#include <string>

#include "tfswap/errors.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

Eigen::MatrixXcd ThreeFreqJsa::slice(std::size_t l) const {
  if (l >= slice_count()) throw DomainError("ThreeFreqJsa::slice: index out of range");
  return materialized() ? slices_[l] : psi_slice(*plan_, l);
}

double ThreeFreqJsa::cell_measure() const {
  return two_pi * two_pi * two_pi * grid_b1().spacing * per_fs_to_per_s * grid_b2().spacing * per_fs_to_per_s *
         grid_sfg().spacing * per_fs_to_per_s;
}

ThreeFreqJsa three_freq_jsa(const SellmeierSet& s, const SpdcSource& source1, const SpdcSource& source2,
                            const CrystalParams& sfg, const SourceConstants& k, const SwapGrids& g,
                            const ThreeFreqOptions& opt) {
  validate(sfg);
  validate(k);
  validate(g.b1, "b1 grid");
  validate(g.b2, "b2 grid");
  validate(g.sfg, "SFG grid");
  if (!(g.a2_support.stop() > g.a2_support.start)) throw ConfigError("a2 support must have positive extent");
  if (opt.quadrature_points < min_quadrature_points)
    throw ConfigError("integrationPoints must be >= " + std::to_string(min_quadrature_points));

  // some node combination must reach each pump's centre
  const double p1_lo = g.b1.start + g.sfg.start - g.a2_support.stop();
  const double p1_hi = g.b1.stop() + g.sfg.stop() - g.a2_support.start;
  const double p2_lo = g.a2_support.start + g.b2.start, p2_hi = g.a2_support.stop() + g.b2.stop();
  const double c1 = source1.pump().center, c2 = source2.pump().center;
  if (c1 < p1_lo || c1 > p1_hi) throw ConfigError("b1/SFG/a2 grids miss the support of source 1");
  if (c2 < p2_lo || c2 > p2_hi) throw ConfigError("b2/a2 grids miss the support of source 2");

  auto plan = std::make_shared<PsiPlan>();
  auto src1 = std::make_shared<const SpdcSource>(source1);
  auto sel = std::make_shared<const SellmeierSet>(s);
  plan->source1 = src1.get();
  plan->sellmeier = sel.get();
  plan->sfg = sfg;
  plan->b1 = g.b1;
  plan->b2 = g.b2;
  plan->sfg_grid = g.sfg;
  const std::size_t nq = opt.quadrature_points;
  const FrequencyGrid a2{g.a2_support.start, (g.a2_support.stop() - g.a2_support.start) / static_cast<double>(nq - 1),
                         nq};
  plan->a2.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) plan->a2[q] = a2[q];
  plan->a2_weight = trapezoid_weights(nq);
  for (double& w : plan->a2_weight) w *= a2.spacing * per_fs_to_per_s;
  plan->phi2 = sample_source(source2, a2, g.b2, opt.exec);
  plan->prefactor = SourceConstants::b() * k.d_pm_per_V * pm_to_m * two_pi * two_pi * two_pi /
                    std::sqrt(k.area_um2 * um_to_m * um_to_m);
  ThreeFreqJsa out;
  out.source1_ = src1;
  out.sellmeier_ = sel;
  const std::size_t bytes = g.b1.count * g.b2.count * g.sfg.count * sizeof(std::complex<double>);
  out.norms_.resize(g.sfg.count);
  if (bytes <= opt.memory_budget_bytes) {
    out.slices_ = psi_slices(*plan, opt.exec);
    for (std::size_t l = 0; l < g.sfg.count; ++l) out.norms_[l] = out.slices_[l].squaredNorm();
  } else {
#pragma omp parallel for schedule(dynamic, 1) if (opt.exec == Exec::parallel)
    for (std::size_t l = 0; l < g.sfg.count; ++l) out.norms_[l] = psi_slice(*plan, l).squaredNorm();
  }
  out.plan_ = plan;
  return out;
}

double sfg_probability(const ThreeFreqJsa& psi) {
  double sum = 0.0;
  for (double x : psi.slice_norms()) sum += x;
  return psi.cell_measure() * sum;
}

double herald_rate(double xi2_sfg, double rep_rate_Hz) {
  if (!(xi2_sfg >= 0.0)) throw DomainError("herald_rate: probability must be >= 0");
  return xi2_sfg * rep_rate_Hz;
}

double false_event_rate(double xi2_sfg, double rep_rate_Hz) {
  if (!(xi2_sfg >= 0.0)) throw DomainError("false_event_rate: probability must be >= 0");
  return xi2_sfg * xi2_sfg * rep_rate_Hz;
}

double multi_pair_probability(double gamma, double xi2) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("multi_pair_probability: gamma must lie in [0, 1]");
  if (!(xi2 >= 0.0 && xi2 < 1.0)) throw DomainError("multi_pair_probability: xi^2 must lie in [0, 1)");
  return (1.0 - gamma) * xi2;
}

}  // namespace tfswap
