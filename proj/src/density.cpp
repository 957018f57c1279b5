#include "tfswap/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "tfswap/errors.hpp"
#include "tfswap/kernels.hpp"

namespace tfswap {

using cplx = std::complex<double>;
using Eigen::Index;

DensityMatrix DensityMatrix::from_factor(Eigen::MatrixXcd factor, std::size_t d1, std::size_t d2, bool vacuum,
                                         bool normalize) {
  DensityMatrix r;
  r.d1_ = d1;
  r.d2_ = d2;
  r.vacuum_ = vacuum;
  if (static_cast<std::size_t>(factor.rows()) != r.dim())
    throw DomainError("DensityMatrix: factor has " + std::to_string(factor.rows()) + " rows, expected " +
                      std::to_string(r.dim()));
  if (!factor.allFinite()) throw NumericalError("DensityMatrix: non-finite entries");
  r.trace_ = factor.squaredNorm();
  if (normalize) {
    if (!(r.trace_ > 0.0)) throw DomainError("DensityMatrix: zero trace cannot be normalised");
    factor /= std::sqrt(r.trace_);
    r.trace_ = factor.squaredNorm();
  }
  r.f_ = std::move(factor);
  return r;
}

DensityMatrix DensityMatrix::from_dense(const Eigen::MatrixXcd& rho, std::size_t d1, std::size_t d2, bool vacuum) {
  const std::size_t dim = d1 * d2 + (vacuum ? 1 : 0);
  if (static_cast<std::size_t>(rho.rows()) != dim || rho.cols() != rho.rows())
    throw DomainError("DensityMatrix: dense matrix does not match the subsystem dimensions");
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12 * scale) throw NumericalError("DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  const auto& w = es.eigenvalues();
  const double top = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  if (w.minCoeff() < -1e-12 * top) throw DomainError("DensityMatrix: not positive semidefinite");
  std::vector<Index> keep;
  for (Index i = 0; i < w.size(); ++i)
    if (w(i) > 1e-15 * top) keep.push_back(i);
  Eigen::MatrixXcd f(rho.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) f.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(w(keep[c]));
  return from_factor(std::move(f), d1, d2, vacuum, false);
}

cplx DensityMatrix::operator()(std::size_t r, std::size_t c) const {
  return f_.row(static_cast<Index>(r)).dot(f_.row(static_cast<Index>(c)));
}

Eigen::VectorXd DensityMatrix::diagonal() const { return f_.rowwise().squaredNorm(); }

Eigen::MatrixXcd DensityMatrix::dense() const {
  if (dim() > 8192) throw ConfigError("DensityMatrix::dense: dimension " + std::to_string(dim()) + " too large");
  return f_ * f_.adjoint();
}

double purity(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw DomainError("purity: density matrix is not normalised");
  const Eigen::MatrixXcd g = rho.factor().adjoint() * rho.factor();
  return g.squaredNorm();
}

namespace {

// Coefficient matrix (n1 x n2) of one factor column; vacuum at (0,0).
Eigen::MatrixXcd coefficients(const Eigen::VectorXcd& v, std::size_t d1, std::size_t d2, bool vacuum) {
  const Index o = vacuum ? 1 : 0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Index>(d1) + o, static_cast<Index>(d2) + o);
  if (vacuum) m(0, 0) = v(0);
  for (std::size_t j = 0; j < d1; ++j)
    for (std::size_t k = 0; k < d2; ++k) m(static_cast<Index>(j) + o, static_cast<Index>(k) + o) = v(o + static_cast<Index>(j * d2 + k));
  return m;
}

// Negative-eigenvalue sum of |v><v|^G from Schmidt coefficients: sum_{i<j} s_i s_j.
void schmidt_negativity(const Eigen::VectorXd& s_raw, NegativityReport& r, double clip) {
  const double norm2 = s_raw.squaredNorm();
  const Eigen::VectorXd s = s_raw / std::sqrt(norm2);
  double prefix = 0.0, cross = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    cross += s(i) * prefix;
    prefix += s(i);
  }
  r.eigen_sum = cross;
  r.trace_norm_form = 0.5 * (s.sum() * s.sum() - 1.0);
  r.min_eigenvalue = s.size() > 1 ? -s(0) * s(1) : 0.0;
  r.negativity = r.eigen_sum;
  if (s.size() < 2 || s(0) * s(1) < clip) r.negativity = 0.0;
  r.pure = true;
}

}  // namespace

PreparedNegativity prepare_negativity(const DensityMatrix& rho, const NegativityOptions& opt) {
  if (!(rho.trace() > 0.0)) throw DomainError("negativity: zero trace");
  PreparedNegativity prep;
  NegativityReport& rep = prep.report;
  const std::size_t d1 = rho.dim_b1(), d2 = rho.dim_b2();
  Eigen::MatrixXcd f = rho.factor();
  bool vacuum = rho.has_vacuum();

  if (vacuum) {
    // a vacuum block without coherences to the biphoton block is PPT on its own
    const Eigen::RowVectorXcd coh = f.row(0) * f.bottomRows(f.rows() - 1).adjoint();
    if (coh.norm() <= 1e-14 * rho.trace()) {
      Eigen::MatrixXcd rest = f.bottomRows(f.rows() - 1);
      const double tr = rest.squaredNorm();
      if (tr <= 1e-300) {  // vacuum only
        prep.done = true;
        return prep;
      }
      prep.weight = tr / rho.trace();
      f = std::move(rest);
      vacuum = false;
    }
  }
  const double tw = f.squaredNorm();

  // orthogonalise the columns; rank decides between the Schmidt and dense paths
  Eigen::MatrixXcd cols;
  {
    const Eigen::MatrixXcd g = f.adjoint() * f;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const auto& w = es.eigenvalues();
    const double top = w.maxCoeff();
    std::vector<Index> keep;
    for (Index i = w.size() - 1; i >= 0; --i)
      if (w(i) > 1e-13 * top) keep.push_back(i);
    cols.resize(f.rows(), static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) cols.col(static_cast<Index>(c)) = f * es.eigenvectors().col(keep[c]);
  }

  if (cols.cols() == 1) {
    const Eigen::MatrixXcd m = coefficients(cols.col(0), d1, d2, vacuum);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    schmidt_negativity(svd.singularValues(), rep, opt.clip);
    rep.support_b1 = static_cast<std::size_t>(m.rows());
    rep.support_b2 = static_cast<std::size_t>(m.cols());
    prep.done = true;
    return prep;
  }

  std::vector<Eigen::MatrixXcd> M(static_cast<std::size_t>(cols.cols()));
  for (Index c = 0; c < cols.cols(); ++c) M[static_cast<std::size_t>(c)] = coefficients(cols.col(c), d1, d2, vacuum);
  const Index n1 = M[0].rows(), n2 = M[0].cols();
  Eigen::MatrixXcd r1 = Eigen::MatrixXcd::Zero(n1, n1), r2 = Eigen::MatrixXcd::Zero(n2, n2);
  for (const auto& m : M) {
    r1.noalias() += m * m.adjoint();
    r2.noalias() += m.transpose() * m.conjugate();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(r1), e2(r2);
  auto support = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es) {
    std::vector<Index> keep;
    for (Index i = es.eigenvalues().size() - 1; i >= 0; --i)
      if (es.eigenvalues()(i) > opt.support_tolerance * tw) keep.push_back(i);
    Eigen::MatrixXcd u(es.eigenvectors().rows(), static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) u.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]);
    return u;
  };
  const Eigen::MatrixXcd u1 = support(e1), u2c = support(e2).conjugate();
  rep.support_b1 = static_cast<std::size_t>(u1.cols());
  rep.support_b2 = static_cast<std::size_t>(u2c.cols());
  if (prep.dense_dim() > opt.max_dense_dim)
    throw ConfigError("negativity: projected partial transpose of dimension " + std::to_string(prep.dense_dim()) +
                      " exceeds max_dense_dim " + std::to_string(opt.max_dense_dim) +
                      " (raise support_tolerance or the limit)");
  prep.P.resize(M.size());
  prep.projected_trace = 0.0;
  for (std::size_t l = 0; l < M.size(); ++l) {
    prep.P[l] = u1.adjoint() * M[l] * u2c;
    prep.projected_trace += prep.P[l].squaredNorm();
  }
  rep.discarded_weight = 1.0 - prep.projected_trace / tw;

  // the dominant component: exact pure negativity vs its projection
  Eigen::BDCSVD<Eigen::MatrixXcd> exact(M[0]), proj(prep.P[0]);
  NegativityReport a, b;
  schmidt_negativity(exact.singularValues(), a, 0.0);
  schmidt_negativity(proj.singularValues(), b, 0.0);
  rep.truncation_estimate = a.eigen_sum > 0.0 ? (b.eigen_sum - a.eigen_sum) / a.eigen_sum : 0.0;
  return prep;
}

NegativityReport finish_negativity(PreparedNegativity&& prep, const NegativityOptions& opt) {
  NegativityReport rep = prep.report;
  if (!prep.done) {
    const double tp = prep.projected_trace;
    Eigen::MatrixXcd pt = assemble_partial_transpose(prep.P, opt.exec);
    prep.P.clear();
    double herm = 0.0, amax = 0.0;
    for (Index c = 0; c < pt.cols(); ++c)
      for (Index r = c; r < pt.rows(); ++r) {
        herm = std::max(herm, std::abs(pt(r, c) - std::conj(pt(c, r))));
        amax = std::max(amax, std::abs(pt(r, c)));
      }
    double trace = 0.0;
    for (Index i = 0; i < pt.rows(); ++i) trace += pt(i, i).real();
    rep.hermiticity_error = herm / std::max(amax, 1e-300);
    rep.trace_error = std::abs(trace - tp) / tp;
    if (rep.hermiticity_error > 1e-12) throw NumericalError("negativity: partial transpose is not Hermitian");
    if (rep.trace_error > 1e-12) throw NumericalError("negativity: partial transpose changed the trace");

    const Eigen::VectorXd mu = hermitian_eigenvalues(pt) / tp;
    double neg = 0.0, abs_sum = 0.0, clipped = 0.0;
    for (Index i = 0; i < mu.size(); ++i) {
      abs_sum += std::abs(mu(i));
      if (mu(i) < 0.0) neg -= mu(i);
      if (mu(i) <= -opt.clip) clipped -= mu(i);
    }
    rep.eigen_sum = neg;
    rep.trace_norm_form = 0.5 * (abs_sum - 1.0);
    rep.min_eigenvalue = mu.size() ? mu(0) : 0.0;
    rep.negativity = clipped;
  }
  if (std::abs(rep.eigen_sum - rep.trace_norm_form) > opt.agreement)
    throw NumericalError("negativity: eigenvalue-sum and trace-norm forms disagree (" + std::to_string(rep.eigen_sum) +
                         " vs " + std::to_string(rep.trace_norm_form) + ")");
  const double w = prep.weight;
  rep.negativity *= w;
  rep.eigen_sum *= w;
  rep.trace_norm_form *= w;
  rep.min_eigenvalue *= w;
  return rep;
}

NegativityReport negativity_report(const DensityMatrix& rho, const NegativityOptions& opt) {
  return finish_negativity(prepare_negativity(rho, opt), opt);
}

double negativity(const DensityMatrix& rho, const NegativityOptions& opt) { return negativity_report(rho, opt).negativity; }

Eigen::MatrixXcd embed_dense(const DensityMatrix& rho) {
  const std::size_t o = rho.has_vacuum() ? 1 : 0;
  const std::size_t n1 = rho.dim_b1() + o, n2 = rho.dim_b2() + o;
  const Eigen::MatrixXcd d = rho.dense();
  std::vector<Index> map(rho.dim());
  if (o) map[0] = 0;
  for (std::size_t j = 0; j < rho.dim_b1(); ++j)
    for (std::size_t k = 0; k < rho.dim_b2(); ++k) map[o + j * rho.dim_b2() + k] = static_cast<Index>((j + o) * n2 + k + o);
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<Index>(n1 * n2), static_cast<Index>(n1 * n2));
  for (std::size_t c = 0; c < rho.dim(); ++c)
    for (std::size_t r = 0; r < rho.dim(); ++r) e(map[r], map[c]) = d(static_cast<Index>(r), static_cast<Index>(c));
  return e;
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, std::size_t n1, std::size_t n2) {
  const auto N1 = static_cast<Index>(n1), N2 = static_cast<Index>(n2);
  if (rho.rows() != N1 * N2 || rho.cols() != N1 * N2) throw DomainError("partial_transpose: dimension mismatch");
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  for (Index a = 0; a < N1; ++a)
    for (Index b = 0; b < N2; ++b)
      for (Index ap = 0; ap < N1; ++ap)
        for (Index bp = 0; bp < N2; ++bp) out(a * N2 + b, ap * N2 + bp) = rho(ap * N2 + b, a * N2 + bp);
  return out;
}

double negativity_dense_reference(const DensityMatrix& rho) {
  const std::size_t o = rho.has_vacuum() ? 1 : 0;
  const Eigen::MatrixXcd pt = partial_transpose(embed_dense(rho), rho.dim_b1() + o, rho.dim_b2() + o);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= -1e-12 * rho.trace()) neg -= es.eigenvalues()(i);
  return neg / rho.trace();
}

}  // namespace tfswap
