#include <doctest.h>

#include <cmath>

#include "tfswap/errors.hpp"
#include "tfswap/phasematch.hpp"
#include "tfswap/units.hpp"

using namespace tfswap;

namespace {
const CrystalParams design{500.0, 8.33, 1};
}

TEST_CASE("design point is phase matched within a tenth of the main lobe") {
  const double dk = delta_k(default_ktp(), design, 4.651, 3.090, 1.561);
  CHECK(std::abs(dk) < two_pi / (10.0 * design.length_um));
}

TEST_CASE("removing the grating shifts dk by 2 pi / Lambda") {
  CrystalParams none = design;
  none.poling_period_um = 1e300;
  const double a = delta_k(default_ktp(), design, 4.651, 3.090, 1.561);
  const double b = delta_k(default_ktp(), none, 4.651, 3.090, 1.561);
  CHECK(a - b == doctest::Approx(two_pi / 8.33).epsilon(1e-12));
  CrystalParams third = design;
  third.qpm_order = 3;
  CHECK(delta_k(default_ktp(), third, 4.651, 3.090, 1.561) - b == doctest::Approx(3 * two_pi / 8.33).epsilon(1e-12));
}

TEST_CASE("sinc phase matching: peak, zeros, modulus symmetry") {
  CHECK(std::abs(pm_sinc(design, 0.0)) == doctest::Approx(design.length_um));
  for (int m = 1; m <= 3; ++m) CHECK(std::abs(pm_sinc(design, m * two_pi / design.length_um)) < 1e-10);
  for (double dk : {0.001, 0.004, 0.02}) {
    CHECK(std::abs(pm_sinc(design, dk)) == doctest::Approx(std::abs(pm_sinc(design, -dk))).epsilon(1e-14));
    CHECK(std::abs(pm_sinc(design, dk)) <= design.length_um);
    // phase -L dk / 2
    const auto v = pm_sinc(design, dk);
    const double s = std::sin(0.5 * design.length_um * dk);
    if (s > 0) CHECK(std::arg(v) == doctest::Approx(std::remainder(-0.5 * design.length_um * dk, two_pi)).epsilon(1e-12));
  }
}

TEST_CASE("Gaussian fit recovers its own width") {
  for (double w : {0.7, 2.0, 3.3}) {
    const auto fit = fit_gaussian_width([w](double x) { return std::exp(-x * x / (2 * w * w)); }, 2 * pi, 2001, 1.5);
    CHECK(fit.width == doctest::Approx(w).epsilon(1e-9));
    CHECK(fit.rms_residual < 1e-12);
  }
  CHECK_THROWS_AS(fit_gaussian_width([](double) { return 1.0; }, 0.0, 11, 1.0), DomainError);
}

TEST_CASE("Gaussian surrogate stays close to |sinc| in L1 over the fit window") {
  const auto k = fit_kappa(default_ktp(), 4.651, 3.090, 1.561);
  double num = 0.0, den = 0.0;
  const int n = 4001;
  for (int j = 0; j < n; ++j) {
    const double x = -two_pi + 2 * two_pi * j / (n - 1);
    const double dk = x / design.length_um;
    const double a = std::abs(pm_sinc(design, dk)), g = pm_gaussian(design, dk, k.kappa_x);
    num += std::abs(a - g);
    den += a;
  }
  CHECK(num / den < 0.12);
  CHECK(k.fit.iterations > 0);
  CHECK(std::isfinite(k.sensitivity));
}

TEST_CASE("kappa fit in the dimensionless variable (frozen)") {
  const auto k = fit_kappa(default_ktp(), 4.651, 3.090, 1.561);
  CHECK(k.kappa_x == doctest::Approx(3.0640).epsilon(1e-4));
  CHECK(k.group_index_mismatch == doctest::Approx(0.2563).epsilon(2e-3));
  CHECK(k.kappa == doctest::Approx(k.kappa_x / std::abs(k.group_index_mismatch)).epsilon(1e-14));
}

TEST_CASE("bandwidth relation at the design length") {
  CHECK(rad_per_fs_to_rad_per_ps(phase_matching_bandwidth(12.8831, 500.0)) == doctest::Approx(7.7245).epsilon(1e-4));
  // halving L doubles the bandwidth
  CHECK(phase_matching_bandwidth(3.0, 250.0) == doctest::Approx(2 * phase_matching_bandwidth(3.0, 500.0)));
}

TEST_CASE("separability residual") {
  CHECK(gaussian_separability_residual(2.0, 1.0, 3.0, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(gaussian_separability_residual(2.0, 1.0, 1.5, 1.0, 1.0) < 0.0);
  CHECK_THROWS_AS(gaussian_separability_residual(1, 1, 1, 1, 0), DomainError);
}

TEST_CASE("crystal validation") {
  CrystalParams c = design;
  c.length_um = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = design;
  c.qpm_order = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_NOTHROW(validate(design));
}
