#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tfswap/errors.hpp"
#include "tfswap/swap.hpp"

using namespace tfswap;

namespace {

double xi2_for(SimConfig c, double L_SFG_mm = 0.5) {
  const auto d = make_design(c);
  const auto src = build_source(c, d);
  return sfg_probability(build_psi(c, d, src, L_SFG_mm));
}

double marginal_std(const ThreeFreqJsa& psi) {
  const auto& n = psi.slice_norms();
  double w = 0, m = 0, m2 = 0;
  for (std::size_t l = 0; l < n.size(); ++l) {
    const double x = psi.grid_sfg()[l];
    w += n[l];
    m += n[l] * x;
    m2 += n[l] * x * x;
  }
  m /= w;
  return std::sqrt(m2 / w - m * m);
}

}  // namespace

TEST_CASE("psi slices have the bystander shape and the lazy path matches") {
  const auto& r = small_run();
  const auto psi = build_psi(r.config, r.design, r.source, 0.5);
  CHECK(psi.slice_count() == 24);
  CHECK(psi.quadrature_points() == 100);
  const auto s = psi.slice(5);
  CHECK(static_cast<std::size_t>(s.rows()) == psi.grid_b1().count);
  CHECK(static_cast<std::size_t>(s.cols()) == psi.grid_b2().count);
  CHECK(s.squaredNorm() == doctest::Approx(psi.slice_norms()[5]).epsilon(1e-14));
  CHECK_THROWS_AS(psi.slice(24), DomainError);
  double sum = 0;
  for (double x : psi.slice_norms()) sum += x;
  CHECK(sfg_probability(psi) == doctest::Approx(psi.cell_measure() * sum).epsilon(1e-14));
}

TEST_CASE("zero pump power gives a vanishing three-frequency amplitude") {
  auto c = small_config();
  c.P_avg_W = 0.0;
  CHECK(xi2_for(c) == 0.0);
}

TEST_CASE("SFG probability is quadratic in pump power (quartic in amplitude)") {
  auto c = small_config();
  const double a = xi2_for(c);
  c.P_avg_W *= 2.0;
  CHECK(xi2_for(c) == doctest::Approx(4.0 * a).epsilon(1e-10));
}

TEST_CASE("doubling the quadrature changes Xi^2 by < 0.5%") {
  auto c = small_config();
  c.integrationPoints = 300;
  const double a = xi2_for(c);
  c.integrationPoints = 600;
  CHECK(std::abs(xi2_for(c) - a) / a < 5e-3);
}

TEST_CASE("longer SFG crystal: more probability, narrower herald marginal") {
  const auto& r = small_run();
  double prev_xi2 = 0.0, prev_std = 1e300;
  for (double L : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto psi = build_psi(r.config, r.design, r.source, L);
    const double xi2 = sfg_probability(psi), sd = marginal_std(psi);
    CHECK(xi2 > prev_xi2);
    CHECK(sd < prev_std);
    prev_xi2 = xi2;
    prev_std = sd;
  }
}

TEST_CASE("Xi^2 at the design point (frozen)") {
  // full default grids and quadrature
  CHECK(xi2_for(SimConfig{}) == doctest::Approx(5.12735e-12).epsilon(1e-5));
}

TEST_CASE("rates and multi-pair probability") {
  CHECK(herald_rate(5e-12, 1e9) == doctest::Approx(5e-3));
  CHECK(false_event_rate(5e-12, 1e9) == doctest::Approx(2.5e-14));
  CHECK(multi_pair_probability(0.9, 0.1) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(multi_pair_probability(1.0, 0.1) == 0.0);
  CHECK_THROWS_AS(herald_rate(-1.0, 1e9), DomainError);
  CHECK_THROWS_AS(multi_pair_probability(1.1, 0.1), DomainError);
  CHECK_THROWS_AS(multi_pair_probability(0.9, 1.0), DomainError);
}

TEST_CASE("configuration errors are reported") {
  auto c = small_config();
  c.integrationPoints = 10;
  CHECK_THROWS_AS(xi2_for(c), ConfigError);
  const auto& r = small_run();
  auto g = swap_grids(r.config, r.design, r.source);
  g.b2.start += 0.5;  // far from source 2's signal band
  ThreeFreqOptions o;
  o.quadrature_points = 100;
  const auto s = make_source(r.design);
  CHECK_THROWS(three_freq_jsa(r.design.sellmeier, s, s, sfg_crystal(r.config, 0.5), r.design.constants, g, o));
}
