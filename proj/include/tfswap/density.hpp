#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tfswap/grid.hpp"

namespace tfswap {

// rho = F F^H over the basis [vacuum] + {m = j * dim_b2 + k}. The vacuum
// slot, when present, is row 0 of F. Only the factor is stored, so a
// conditional state built from Q slices costs Q vectors, not a dense matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  // Normalises to unit trace unless normalize is false.
  static DensityMatrix from_factor(Eigen::MatrixXcd factor, std::size_t dim_b1, std::size_t dim_b2, bool vacuum,
                                   bool normalize = true);
  // Hermiticity checked to 1e-12 (relative to the largest entry).
  static DensityMatrix from_dense(const Eigen::MatrixXcd& rho, std::size_t dim_b1, std::size_t dim_b2, bool vacuum);

  std::size_t dim_b1() const { return d1_; }
  std::size_t dim_b2() const { return d2_; }
  bool has_vacuum() const { return vacuum_; }
  std::size_t dim() const { return d1_ * d2_ + (vacuum_ ? 1 : 0); }
  std::size_t rank_bound() const { return static_cast<std::size_t>(f_.cols()); }
  double trace() const { return trace_; }

  const Eigen::MatrixXcd& factor() const { return f_; }
  std::complex<double> operator()(std::size_t r, std::size_t c) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXcd dense() const;  // dim x dim; refuses above 8192

 private:
  Eigen::MatrixXcd f_;
  std::size_t d1_ = 0, d2_ = 0;
  bool vacuum_ = false;
  double trace_ = 0.0;
};

double purity(const DensityMatrix& rho);

struct NegativityOptions {
  double support_tolerance = 1e-6;  // local eigenvalues kept above tol * trace
  double clip = 1e-12;              // eigenvalues in (-clip, 0) count as zero
  double agreement = 1e-10;         // eigen-sum vs trace-norm forms
  std::size_t max_dense_dim = 16000;  // projected partial transpose limit
  Exec exec = Exec::parallel;
};

struct NegativityReport {
  double negativity = 0.0;       // clipped sum of |negative eigenvalues|
  double eigen_sum = 0.0;        // unclipped sum of |negative eigenvalues|
  double trace_norm_form = 0.0;  // (||rho^G||_1 - 1) / 2
  double min_eigenvalue = 0.0;
  std::size_t support_b1 = 0, support_b2 = 0;
  double discarded_weight = 0.0;  // trace lost to the local-support projection
  bool pure = false;              // Schmidt path, no projection
  double hermiticity_error = 0.0; // of the partial transpose
  double trace_error = 0.0;
  // relative change of the dominant component's negativity under projection
  double truncation_estimate = 0.0;
};

// Split so callers can size concurrent eigensolves before running them:
// prepare finds the local supports and projects (cheap), finish assembles
// the dense partial transpose and diagonalises it.
struct PreparedNegativity {
  NegativityReport report;
  std::vector<Eigen::MatrixXcd> P;  // projected components, k1 x k2
  double projected_trace = 0.0;
  double weight = 1.0;  // share of the trace outside a split-off vacuum block
  bool done = false;    // no dense stage needed
  std::size_t dense_dim() const { return report.support_b1 * report.support_b2; }
  std::size_t dense_bytes() const { return done ? 0 : dense_dim() * dense_dim() * 16; }
};

PreparedNegativity prepare_negativity(const DensityMatrix& rho, const NegativityOptions& opt = {});
NegativityReport finish_negativity(PreparedNegativity&& prep, const NegativityOptions& opt = {});
NegativityReport negativity_report(const DensityMatrix& rho, const NegativityOptions& opt = {});
double negativity(const DensityMatrix& rho, const NegativityOptions& opt = {});

// Dense reference path: vacuum embedded as level 0 of each subsystem, the
// transpose taken on b1, eigenvalues from Eigen. Small dimensions only.
Eigen::MatrixXcd embed_dense(const DensityMatrix& rho);
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, std::size_t n1, std::size_t n2);
double negativity_dense_reference(const DensityMatrix& rho);

// Eigenvalues of a Hermitian matrix (lower triangle read), ascending, LAPACK.
// The matrix is overwritten.
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd& a);

// Dimension-limited concurrent LAPACK use: pin the BLAS to one thread.
void set_blas_single_threaded();

}  // namespace tfswap
