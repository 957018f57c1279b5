#pragma once

// Data-parallel inner loops. Every kernel has one code path; Exec::serial
// runs it on the calling thread, Exec::parallel splits the outer loop with
// OpenMP. Each output element is produced by the same arithmetic in a fixed
// order either way, so results are bit-identical across thread counts.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tfswap/grid.hpp"
#include "tfswap/phasematch.hpp"

namespace tfswap {

class SpdcSource;

Eigen::MatrixXcd sample_source(const SpdcSource& src, const FrequencyGrid& grid_i, const FrequencyGrid& grid_s,
                               Exec exec);

// Everything needed to produce psi(., ., w_l) for any SFG node l.
struct PsiPlan {
  const SpdcSource* source1 = nullptr;  // b1 = idler 1, a1 = signal 1
  const SellmeierSet* sellmeier = nullptr;
  CrystalParams sfg;
  FrequencyGrid b1, b2, sfg_grid;
  std::vector<double> a2;       // quadrature nodes over source 2's idler extent
  std::vector<double> a2_weight;  // trapezoid weight * spacing, rad/s
  Eigen::MatrixXcd phi2;        // Phi_2(a2_q, b2_k), nq x n_b2
  double prefactor = 0.0;       // b d (2pi)^3 / sqrt(A_I), SI
};

Eigen::MatrixXcd psi_slice(const PsiPlan& plan, std::size_t l);
std::vector<Eigen::MatrixXcd> psi_slices(const PsiPlan& plan, Exec exec);

// rho^G[(a,b),(a',b')] = sum_l P_l(a',b) conj(P_l(a,b')), index a * k2 + b.
// Each P_l is k1 x k2.
Eigen::MatrixXcd assemble_partial_transpose(const std::vector<Eigen::MatrixXcd>& P, Exec exec);

}  // namespace tfswap
