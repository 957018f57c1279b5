#include <lapacke.h>

#include <mutex>
#include <string>

#include "tfswap/density.hpp"
#include "tfswap/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace tfswap {

void set_blas_single_threaded() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  if (a.cols() != n) throw DomainError("hermitian_eigenvalues: matrix is not square");
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  set_blas_single_threaded();
  const lapack_int info = LAPACKE_zheevd_2stage(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                                                reinterpret_cast<lapack_complex_double*>(a.data()),
                                                static_cast<lapack_int>(n), w.data());
  if (info != 0) throw NumericalError("zheevd_2stage failed, info = " + std::to_string(info));
  return w;
}

}  // namespace tfswap
