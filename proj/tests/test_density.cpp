#include <doctest.h>

#include <cmath>
#include <random>

#include "tfswap/density.hpp"
#include "tfswap/errors.hpp"
#include "tfswap/measurement.hpp"

using namespace tfswap;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = cd(g(rng), g(rng));
  return v;
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd v(a.size() * b.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) v.segment(j * b.size(), b.size()) = a(j) * b;
  return v;
}

DensityMatrix pure(const Eigen::VectorXcd& v, std::size_t d1, std::size_t d2) {
  return DensityMatrix::from_factor(Eigen::MatrixXcd(v), d1, d2, false);
}

}  // namespace

TEST_CASE("Bell states have negativity 1/2") {
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector4cd bells[] = {{r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}};
  for (const auto& b : bells) {
    const auto rho = pure(b, 2, 2);
    const auto rep = negativity_report(rho);
    CHECK(rep.negativity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(rep.eigen_sum - rep.trace_norm_form) < 1e-10);
    CHECK(negativity_dense_reference(rho) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("Bell state mixtures take the mixed-state path") {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd f(4, 2);
  f.col(0) = Eigen::Vector4cd(r, 0, 0, r) * std::sqrt(0.75);
  f.col(1) = Eigen::Vector4cd(0, r, r, 0) * std::sqrt(0.25);
  const auto rho = DensityMatrix::from_factor(f, 2, 2, false);
  const auto rep = negativity_report(rho);
  CHECK_FALSE(rep.pure);
  // 3/4 Phi+ + 1/4 Psi+: partial transpose eigenvalues {1/2, 1/2, 1/4, -1/4}
  CHECK(rep.negativity == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(purity(rho) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(rep.hermiticity_error <= 1e-12);
  CHECK(rep.trace_error <= 1e-12);
}

TEST_CASE("random product states are not entangled") {
  std::mt19937_64 rng(20260416);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index d1 = 2 + t % 4, d2 = 3 + t % 3;
    const auto v = kron(random_vector(rng, d1), random_vector(rng, d2));
    const auto rho = pure(v, d1, d2);
    CHECK(std::abs(negativity(rho)) <= 1e-10);
    CHECK(negativity_dense_reference(rho) <= 1e-10);
  }
  // and mixtures of them
  Eigen::MatrixXcd f(12, 3);
  for (int c = 0; c < 3; ++c) f.col(c) = kron(random_vector(rng, 3), random_vector(rng, 4));
  CHECK(std::abs(negativity(DensityMatrix::from_factor(f, 3, 4, false))) <= 1e-10);
}

TEST_CASE("maximally mixed state") {
  const std::size_t d = 4;
  const auto rho = DensityMatrix::from_factor(Eigen::MatrixXcd::Identity(d * d, d * d), d, d, false);
  CHECK(purity(rho) == doctest::Approx(1.0 / (d * d)).epsilon(1e-14));
  CHECK(std::abs(negativity(rho)) <= 1e-12);
}

TEST_CASE("factored and dense paths agree on random mixed states") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 6; ++t) {
    const std::size_t d1 = 3 + t % 2, d2 = 2 + t % 3;
    const bool vac = t % 2 == 0;
    const Eigen::Index dim = static_cast<Eigen::Index>(d1 * d2 + (vac ? 1 : 0));
    Eigen::MatrixXcd f(dim, 1 + t % 3);
    for (Eigen::Index c = 0; c < f.cols(); ++c) f.col(c) = random_vector(rng, dim);
    const auto rho = DensityMatrix::from_factor(f, d1, d2, vac);
    NegativityOptions opt;
    opt.support_tolerance = 0.0;
    const auto rep = negativity_report(rho, opt);
    CHECK(rep.negativity == doctest::Approx(negativity_dense_reference(rho)).epsilon(1e-10));
    CHECK(rep.negativity >= 0.0);
    const double p = purity(rho);
    CHECK(p > 0.0);
    CHECK(p <= 1.0 + 1e-14);
    const auto dense = rho.dense();
    CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(std::abs(dense.trace() - 1.0) <= 1e-12);
    CHECK((dense * dense).trace().real() == doctest::Approx(p).epsilon(1e-12));
    const auto back = DensityMatrix::from_dense(dense, d1, d2, vac);
    CHECK(purity(back) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("from_dense rejects non-Hermitian input") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4) * 0.25;
  m(0, 1) = cd(0.1, 0.0);
  CHECK_THROWS(DensityMatrix::from_dense(m, 2, 2, false));
}

TEST_CASE("partial transpose is an involution that preserves the trace") {
  std::mt19937_64 rng(3);
  Eigen::MatrixXcd a(6, 6);
  for (Eigen::Index c = 0; c < 6; ++c) a.col(c) = random_vector(rng, 6);
  const auto t = partial_transpose(a, 2, 3);
  CHECK((partial_transpose(t, 2, 3) - a).norm() <= 1e-14);
  CHECK(std::abs(t.trace() - a.trace()) <= 1e-13);
  CHECK(t(0 * 3 + 1, 1 * 3 + 2) == a(1 * 3 + 1, 0 * 3 + 2));
}

TEST_CASE("LAPACK eigenvalues match Eigen") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXcd a(40, 40);
  for (Eigen::Index c = 0; c < 40; ++c) a.col(c) = random_vector(rng, 40);
  Eigen::MatrixXcd h = a + a.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  Eigen::MatrixXcd work = h;
  const auto ev = hermitian_eigenvalues(work);
  CHECK((ev - es.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("toy state closed forms") {
  for (std::size_t n : {2u, 5u, 11u}) {
    for (double eta : {0.0, 0.3, 1.0}) {
      const auto inc = toy_state(n, eta, false);
      CHECK(negativity(inc) == doctest::Approx((n - 1) * eta / 2).epsilon(1e-12));
      CHECK(negativity_dense_reference(inc) == doctest::Approx((n - 1) * eta / 2).epsilon(1e-10));
      CHECK(purity(inc) == doctest::Approx((1 - eta) * (1 - eta) + eta * eta).epsilon(1e-14));
      const auto coh = toy_state(n, eta, true);
      CHECK(purity(coh) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(negativity(coh) >= negativity(inc) - 1e-12);
      CHECK(negativity(coh) == doctest::Approx(negativity_dense_reference(coh)).epsilon(1e-10));
    }
  }
}

TEST_CASE("purity refuses an unnormalised matrix") {
  const auto rho = DensityMatrix::from_factor(Eigen::MatrixXcd::Identity(4, 1) * 2.0, 2, 2, false, false);
  CHECK(rho.trace() == doctest::Approx(4.0));
  CHECK_THROWS_AS(purity(rho), DomainError);
}
