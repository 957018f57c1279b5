#include <doctest.h>

#include <random>

#include <omp.h>

#include "fixtures.hpp"
#include "tfswap/kernels.hpp"
#include "tfswap/swap.hpp"

using namespace tfswap;

namespace {

bool identical(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

struct ThreadCount {
  int saved = omp_get_max_threads();
  explicit ThreadCount(int n) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("source sampling: serial and parallel agree bit for bit") {
  const auto& r = small_run();
  const auto s = make_source(r.design);
  ThreadCount t(4);
  const auto a = sample_source(s, r.source.grids.grid_i, r.source.grids.grid_s, Exec::serial);
  const auto b = sample_source(s, r.source.grids.grid_i, r.source.grids.grid_s, Exec::parallel);
  CHECK(identical(a, b));
}

TEST_CASE("psi slices: serial and parallel agree bit for bit") {
  const auto& r = small_run();
  ThreadCount t(4);
  const auto a = build_psi(r.config, r.design, r.source, 1.0, Exec::serial);
  const auto b = build_psi(r.config, r.design, r.source, 1.0, Exec::parallel);
  for (std::size_t l = 0; l < a.slice_count(); ++l) CHECK(identical(a.slice(l), b.slice(l)));
  CHECK(a.slice_norms() == b.slice_norms());
}

TEST_CASE("partial transpose assembly: serial and parallel agree and match the dense definition") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<Eigen::MatrixXcd> P(3, Eigen::MatrixXcd(4, 5));
  for (auto& m : P)
    for (Eigen::Index j = 0; j < m.size(); ++j) m(j) = {g(rng), g(rng)};
  ThreadCount t(4);
  const auto a = assemble_partial_transpose(P, Exec::serial);
  const auto b = assemble_partial_transpose(P, Exec::parallel);
  CHECK(identical(a, b));

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(20, 20);
  for (const auto& m : P) {
    Eigen::VectorXcd v(20);
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index k = 0; k < 5; ++k) v(j * 5 + k) = m(j, k);
    rho += v * v.adjoint();
  }
  CHECK((partial_transpose(rho, 4, 5) - a).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("negativity does not depend on the execution mode") {
  const auto& r = small_run();
  const auto psi = build_psi(r.config, r.design, r.source, 0.5);
  const auto bins = MeasurementBinning::make(psi.grid_sfg(), 8, 3);
  const auto rho = conditional_density_matrix(psi, bins, 4);
  NegativityOptions s, p;
  s.exec = Exec::serial;
  p.exec = Exec::parallel;
  ThreadCount t(4);
  CHECK(negativity(rho, s) == negativity(rho, p));
}
