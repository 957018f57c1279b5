#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tfswap/errors.hpp"
#include "tfswap/measurement.hpp"

using namespace tfswap;

namespace {

const ThreeFreqJsa& psi() {
  static const ThreeFreqJsa p = [] {
    const auto& r = small_run();
    return build_psi(r.config, r.design, r.source, 0.5);
  }();
  return p;
}

double centroid_sum(const DensityMatrix& rho, const ThreeFreqJsa& p) {
  const auto jsi = conditional_jsi(rho);
  double w = 0, s = 0;
  for (Eigen::Index j = 0; j < jsi.rows(); ++j)
    for (Eigen::Index k = 0; k < jsi.cols(); ++k) {
      w += jsi(j, k);
      s += jsi(j, k) * (p.grid_b1()[j] + p.grid_b2()[k]);
    }
  return s / w;
}

}  // namespace

TEST_CASE("binning layout") {
  const auto b = MeasurementBinning::make(psi().grid_sfg(), 8, 3);
  CHECK(b.centers.size() == 8);
  CHECK(b.first(2) == 6);
  CHECK(b.width == doctest::Approx(3 * psi().grid_sfg().spacing));
  CHECK(b.centers[0] == doctest::Approx(psi().grid_sfg()[1]));
  CHECK_THROWS(MeasurementBinning::make(psi().grid_sfg(), 5, 3));
}

TEST_CASE("herald spectrum sums to Xi^2") {
  const auto b = MeasurementBinning::make(psi().grid_sfg(), 8, 3);
  const auto p = herald_spectrum(psi(), b);
  double sum = 0;
  for (double x : p) {
    CHECK(x > 0.0);
    sum += x;
  }
  CHECK(std::abs(sum - sfg_probability(psi())) <= 1e-12 * sfg_probability(psi()));
}

TEST_CASE("single-node bins give pure conditional states") {
  const auto b = MeasurementBinning::make(psi().grid_sfg(), 24, 1);
  for (std::size_t n : {0u, 7u, 12u, 23u}) {
    const auto rho = conditional_density_matrix(psi(), b, n);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("one bin over the whole grid is the unresolved state") {
  const auto b = MeasurementBinning::make(psi().grid_sfg(), 1, 24);
  const auto a = conditional_density_matrix(psi(), b, 0), u = reduced_density_matrix(psi());
  CHECK(purity(a) == doctest::Approx(purity(u)).epsilon(1e-12));
  CHECK((a.diagonal() - u.diagonal()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("resolving the herald cannot lower the averaged purity or negativity") {
  const auto b = MeasurementBinning::make(psi().grid_sfg(), 8, 3);
  const auto p = herald_spectrum(psi(), b);
  std::vector<double> pur, neg;
  for (std::size_t n = 0; n < 8; ++n) {
    const auto rho = conditional_density_matrix(psi(), b, n);
    pur.push_back(purity(rho));
    neg.push_back(negativity(rho));
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pur.back() > 0.0);
    CHECK(pur.back() <= 1.0 + 1e-12);
    CHECK(neg.back() >= 0.0);
  }
  const auto u = reduced_density_matrix(psi());
  CHECK(weighted_average(pur, p) >= purity(u));
  CHECK(weighted_average(neg, p) >= negativity(u) - 1e-9);
}

TEST_CASE("bystander sum frequency falls as the herald frequency rises") {
  const auto b = MeasurementBinning::make(psi().grid_sfg(), 8, 3);
  double prev = 1e300;
  for (std::size_t n = 0; n < 8; ++n) {
    const double c = centroid_sum(conditional_density_matrix(psi(), b, n), psi());
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("weighted average") {
  CHECK(weighted_average({1.0, 3.0}, {1.0, 3.0}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(weighted_average({1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(weighted_average({1.0}, {0.0}), DomainError);
}

TEST_CASE("toy model negativity formula") {
  for (std::size_t n = 2; n <= 17; ++n)
    for (int e = 1; e <= 10; ++e)
      CHECK(std::abs(toy_state_negativity(n, 0.1 * e, false) - (n - 1) * 0.1 * e / 2) <= 1e-9);
  CHECK_THROWS(toy_state(0, 0.5, false));
  CHECK_THROWS(toy_state(3, 1.5, false));
}
