#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tfswap/density.hpp"
#include "tfswap/swap.hpp"

namespace tfswap {

// N disjoint bins of Q consecutive SFG nodes; bin n holds nodes [nQ, (n+1)Q).
struct MeasurementBinning {
  std::size_t N = 8;
  std::size_t Q = 3;
  std::vector<double> centers;  // rad/fs
  double width = 0.0;           // Q * spacing, rad/fs

  static MeasurementBinning make(const FrequencyGrid& sfg, std::size_t N, std::size_t Q);
  std::size_t first(std::size_t n) const { return n * Q; }
};

std::vector<double> herald_spectrum(const ThreeFreqJsa& psi, const MeasurementBinning& bins);

// Incoherent sum over the bin's slices, unit trace, no vacuum slot.
// Composite index m = j * n_b2 + k.
DensityMatrix conditional_density_matrix(const ThreeFreqJsa& psi, const MeasurementBinning& bins, std::size_t n);
DensityMatrix reduced_density_matrix(const ThreeFreqJsa& psi);

// Populations of rho reshaped to n_b1 x n_b2 (vacuum dropped).
Eigen::MatrixXd conditional_jsi(const DensityMatrix& rho);

double weighted_average(const std::vector<double>& values, const std::vector<double>& weights);

// N modes, maximally entangled anticorrelated biphoton mixed with vacuum.
DensityMatrix toy_state(std::size_t N, double eta, bool coherent);
double toy_state_negativity(std::size_t N, double eta, bool coherent);

}  // namespace tfswap
