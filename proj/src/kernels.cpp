#include "tfswap/kernels.hpp"

#include <complex>
#include <exception>

#include "tfswap/source.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

using cplx = std::complex<double>;

Eigen::MatrixXcd sample_source(const SpdcSource& src, const FrequencyGrid& gi, const FrequencyGrid& gs, Exec exec) {
  const auto ni = static_cast<Eigen::Index>(gi.count), ns = static_cast<Eigen::Index>(gs.count);
  Eigen::MatrixXcd out(ni, ns);
  const bool par = exec == Exec::parallel;
  // exceptions must not leave an OpenMP region
  std::exception_ptr err;
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index k = 0; k < ns; ++k) {
    try {
      for (Eigen::Index j = 0; j < ni; ++j) out(j, k) = src.amplitude(gi[static_cast<std::size_t>(j)], gs[static_cast<std::size_t>(k)]);
    } catch (...) {
#pragma omp critical(tfswap_kernel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

Eigen::MatrixXcd psi_slice(const PsiPlan& p, std::size_t l) {
  const auto& s = *p.sellmeier;
  const double S = p.sfg_grid[l];
  const auto nq = static_cast<Eigen::Index>(p.a2.size());
  const auto nb1 = static_cast<Eigen::Index>(p.b1.count);
  const double ell_sfg = field_factor(S, refractive_index(s.y, S));
  const double grating = p.sfg.qpm_order * two_pi / p.sfg.poling_period_um;
  const double kS = refractive_index(s.y, S) * S / c_um_per_fs;

  Eigen::MatrixXcd A(nb1, nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const double a2 = p.a2[static_cast<std::size_t>(q)], a1 = S - a2;
    const double n1 = refractive_index(s.y, a1), n2 = refractive_index(s.z, a2);
    const double dk = n1 * a1 / c_um_per_fs + n2 * a2 / c_um_per_fs - kS + grating;
    const cplx g = p.prefactor * ell_sfg * field_factor(a1, n1) * field_factor(a2, n2) *
                   (pm_sinc(p.sfg, dk) * um_to_m) * p.a2_weight[static_cast<std::size_t>(q)];
    for (Eigen::Index j = 0; j < nb1; ++j) A(j, q) = g * p.source1->amplitude(p.b1[static_cast<std::size_t>(j)], a1);
  }
  return A * p.phi2;
}

std::vector<Eigen::MatrixXcd> psi_slices(const PsiPlan& p, Exec exec) {
  const std::size_t n = p.sfg_grid.count;
  std::vector<Eigen::MatrixXcd> out(n);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
  for (std::size_t l = 0; l < n; ++l) {
    try {
      out[l] = psi_slice(p, l);
    } catch (...) {
#pragma omp critical(tfswap_kernel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

Eigen::MatrixXcd assemble_partial_transpose(const std::vector<Eigen::MatrixXcd>& P, Exec exec) {
  if (P.empty()) return {};
  const Eigen::Index k1 = P[0].rows(), k2 = P[0].cols(), D = k1 * k2;
  std::vector<Eigen::MatrixXcd> Pt(P.size());
  for (std::size_t l = 0; l < P.size(); ++l) Pt[l] = P[l].transpose();
  Eigen::MatrixXcd out(D, D);
  // column (a,b), row (a',b'): sum_l P_l(a,b') conj(P_l(a',b))
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Eigen::Index c = 0; c < D; ++c) {
    const Eigen::Index a = c / k2, b = c % k2;
    cplx* col = out.col(c).data();
    for (Eigen::Index r = 0; r < D; ++r) col[r] = 0.0;
    for (std::size_t l = 0; l < P.size(); ++l) {
      const cplx* u = P[l].col(b).data();   // P_l(., b)
      const cplx* v = Pt[l].col(a).data();  // P_l(a, .)
      for (Eigen::Index ap = 0; ap < k1; ++ap) {
        const cplx cu = std::conj(u[ap]);
        cplx* dst = col + ap * k2;
        for (Eigen::Index bp = 0; bp < k2; ++bp) dst[bp] += cu * v[bp];
      }
    }
  }
  return out;
}

}  // namespace tfswap
