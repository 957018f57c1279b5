#include "tfswap/measurement.hpp"

#include <cmath>
#include <string>

#include "tfswap/errors.hpp"

namespace tfswap {

using Eigen::Index;

MeasurementBinning MeasurementBinning::make(const FrequencyGrid& sfg, std::size_t N, std::size_t Q) {
  if (N == 0 || Q == 0) throw ConfigError("bin count N and points per bin Q must be positive");
  if (N * Q != sfg.count)
    throw ConfigError("N * Q = " + std::to_string(N * Q) + " does not equal the SFG grid count " +
                      std::to_string(sfg.count));
  MeasurementBinning b;
  b.N = N;
  b.Q = Q;
  b.width = static_cast<double>(Q) * sfg.spacing;
  for (std::size_t n = 0; n < N; ++n) b.centers.push_back(0.5 * (sfg[n * Q] + sfg[n * Q + Q - 1]));
  return b;
}

namespace {
void check(const ThreeFreqJsa& psi, const MeasurementBinning& bins) {
  if (bins.N * bins.Q != psi.slice_count())
    throw ConfigError("binning covers " + std::to_string(bins.N * bins.Q) + " SFG nodes, psi has " +
                      std::to_string(psi.slice_count()));
}

DensityMatrix from_slices(const ThreeFreqJsa& psi, std::size_t first, std::size_t count) {
  const std::size_t n1 = psi.grid_b1().count, n2 = psi.grid_b2().count;
  Eigen::MatrixXcd f(static_cast<Index>(n1 * n2), static_cast<Index>(count));
  double total = 0.0;
  for (std::size_t q = 0; q < count; ++q) {
    const Eigen::MatrixXcd s = psi.slice(first + q);
    // row-major flattening: m = j * n2 + k
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n2; ++k) f(static_cast<Index>(j * n2 + k), static_cast<Index>(q)) = s(static_cast<Index>(j), static_cast<Index>(k));
    total += psi.slice_norms()[first + q];
  }
  if (!(total > 0.0)) throw DomainError("herald impossible: zero probability for SFG nodes starting at " + std::to_string(first));
  return DensityMatrix::from_factor(std::move(f), n1, n2, false);
}
}  // namespace

std::vector<double> herald_spectrum(const ThreeFreqJsa& psi, const MeasurementBinning& bins) {
  check(psi, bins);
  std::vector<double> p(bins.N, 0.0);
  for (std::size_t n = 0; n < bins.N; ++n) {
    double s = 0.0;
    for (std::size_t q = 0; q < bins.Q; ++q) s += psi.slice_norms()[bins.first(n) + q];
    p[n] = psi.cell_measure() * s;
  }
  return p;
}

DensityMatrix conditional_density_matrix(const ThreeFreqJsa& psi, const MeasurementBinning& bins, std::size_t n) {
  check(psi, bins);
  if (n >= bins.N) throw DomainError("conditional_density_matrix: bin index out of range");
  return from_slices(psi, bins.first(n), bins.Q);
}

DensityMatrix reduced_density_matrix(const ThreeFreqJsa& psi) { return from_slices(psi, 0, psi.slice_count()); }

Eigen::MatrixXd conditional_jsi(const DensityMatrix& rho) {
  const Eigen::VectorXd d = rho.diagonal();
  const Index o = rho.has_vacuum() ? 1 : 0;
  Eigen::MatrixXd out(static_cast<Index>(rho.dim_b1()), static_cast<Index>(rho.dim_b2()));
  for (Index j = 0; j < out.rows(); ++j)
    for (Index k = 0; k < out.cols(); ++k) out(j, k) = d(o + j * out.cols() + k);
  return out;
}

double weighted_average(const std::vector<double>& v, const std::vector<double>& w) {
  if (v.size() != w.size()) throw DomainError("weighted_average: length mismatch");
  double sw = 0.0, s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(w[i] >= 0.0)) throw DomainError("weighted_average: negative weight");
    sw += w[i];
    s += w[i] * v[i];
  }
  if (!(sw > 0.0)) throw DomainError("weighted_average: all weights are zero");
  return s / sw;
}

DensityMatrix toy_state(std::size_t N, double eta, bool coherent) {
  if (N < 2) throw DomainError("toy_state: N must be >= 2");
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("toy_state: eta must lie in [0, 1]");
  const auto dim = static_cast<Index>(N * N + 1);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(dim), bi = Eigen::VectorXcd::Zero(dim);
  vac(0) = 1.0;
  // Psi_{j,k} = delta_{j, N-1-k} / sqrt(N), zero-based
  for (std::size_t k = 0; k < N; ++k) bi(static_cast<Index>(1 + (N - 1 - k) * N + k)) = 1.0 / std::sqrt(static_cast<double>(N));
  Eigen::MatrixXcd f;
  if (coherent) {
    f = std::sqrt(1.0 - eta) * vac + std::sqrt(eta) * bi;
  } else {
    f.resize(dim, 2);
    f.col(0) = std::sqrt(1.0 - eta) * vac;
    f.col(1) = std::sqrt(eta) * bi;
  }
  return DensityMatrix::from_factor(std::move(f), N, N, true);
}

double toy_state_negativity(std::size_t N, double eta, bool coherent) {
  return negativity(toy_state(N, eta, coherent));
}

}  // namespace tfswap
