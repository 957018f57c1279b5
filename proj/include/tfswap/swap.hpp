#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "tfswap/kernels.hpp"
#include "tfswap/source.hpp"

namespace tfswap {

// Bystander grids b1 (idler of source 1) and b2 (signal of source 2), the SFG
// grid, and the extent of source 2's idler axis used for the inner integral.
struct SwapGrids {
  FrequencyGrid b1, b2, sfg, a2_support;
};

struct ThreeFreqOptions {
  std::size_t quadrature_points = 300;
  std::size_t memory_budget_bytes = std::size_t(2) << 30;  // for materialising psi
  Exec exec = Exec::parallel;
};

inline constexpr std::size_t min_quadrature_points = 50;

// psi(w_b1, w_b2, w_SFG) in SI units (s^(3/2)); slices are n_b1 x n_b2.
// Either materialised, or computed on demand from its plan.
class ThreeFreqJsa {
 public:
  const FrequencyGrid& grid_b1() const { return plan_->b1; }
  const FrequencyGrid& grid_b2() const { return plan_->b2; }
  const FrequencyGrid& grid_sfg() const { return plan_->sfg_grid; }
  std::size_t quadrature_points() const { return plan_->a2.size(); }
  std::size_t slice_count() const { return plan_->sfg_grid.count; }
  bool materialized() const { return !slices_.empty(); }

  Eigen::MatrixXcd slice(std::size_t l) const;
  // Squared norm of each slice, fixed order.
  const std::vector<double>& slice_norms() const { return norms_; }
  // (2pi)^3 dw_b1 dw_b2 dw_SFG, SI
  double cell_measure() const;

  friend ThreeFreqJsa three_freq_jsa(const SellmeierSet&, const SpdcSource&, const SpdcSource&, const CrystalParams&,
                                     const SourceConstants&, const SwapGrids&, const ThreeFreqOptions&);

 private:
  std::shared_ptr<const PsiPlan> plan_;
  // the plan points into these
  std::shared_ptr<const SpdcSource> source1_;
  std::shared_ptr<const SellmeierSet> sellmeier_;
  std::vector<Eigen::MatrixXcd> slices_;
  std::vector<double> norms_;
};

// Active fields a1 = signal 1 and a2 = idler 2 meet in the SFG crystal;
// b1 = idler 1 and b2 = signal 2 are kept.
ThreeFreqJsa three_freq_jsa(const SellmeierSet& s, const SpdcSource& source1, const SpdcSource& source2,
                            const CrystalParams& sfg, const SourceConstants& k, const SwapGrids& grids,
                            const ThreeFreqOptions& opt = {});

double sfg_probability(const ThreeFreqJsa& psi);
double herald_rate(double xi2_sfg, double rep_rate_Hz);
double false_event_rate(double xi2_sfg, double rep_rate_Hz);
double multi_pair_probability(double gamma, double xi2);

}  // namespace tfswap
