#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "choquard/error.hpp"
#include "choquard/functionals.hpp"

using namespace choquard;

namespace {
const double kPi32 = std::pow(kPi, 1.5);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

RadialProfile gaussian(const RadialGrid& g, double t = 1.0) {
  return RadialProfile::sample(g, [t](double r) { return std::pow(t, 1.5) * std::exp(-0.5 * t * t * r * r); });
}

// same samples on the grid dilated by 1/t: the discrete image of t^{3/2} u(t r)
RadialProfile grid_dilate(const RadialProfile& u, double t) {
  const RadialGrid g(u.grid().size(), u.grid().r_max() / t);
  return RadialProfile(g, (std::pow(t, 1.5) * u).data());
}

RadialProfile random_profile(const RadialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double a = 0.5 + 2.0 * U(rng), b = 2.0 * U(rng), c = 3.0 * U(rng);
  return RadialProfile::sample(g, [=](double r) { return std::exp(-r / a) * (1.0 + b * std::sin(c * r) * std::sin(c * r)); });
}
}  // namespace

TEST_CASE("energy") {
  const auto g = make_grid(2000, 40.0);
  const auto z = energy(RadialProfile(g), 2.0);
  CHECK(z.kinetic == 0.0);
  CHECK(z.coulomb == 0.0);
  CHECK(z.total == 0.0);

  const auto e = energy(gaussian(g), 2.0);
  const double k = 0.75 * kPi32, d = std::sqrt(2.0) * std::pow(kPi, 2.5) / 4.0;
  CHECK(rel(e.kinetic, k) < 1e-4);
  CHECK(rel(e.coulomb, d) < 1e-4);
  CHECK(rel(e.total, k - d) < 1e-3);
  CHECK(e.total == e.kinetic - e.coulomb);
  CHECK(rel(e.mass, kPi32) < 1e-10);

  CHECK_THROWS_AS(energy(gaussian(g), 5.0 / 3.0), DomainError);
  CHECK_THROWS_AS(energy(gaussian(g), 7.0 / 3.0), DomainError);
  CHECK_THROWS_AS(energy(gaussian(g), 2.5), DomainError);
}

TEST_CASE("energy scaling along the dilation orbit") {
  const double t = 1.5, p = 2.2;
  const auto g = make_grid(2000, 40.0);
  const auto u = gaussian(g);
  const auto e = energy(u, p);
  const double pred = t * t * e.kinetic - std::pow(t, 3.0 * p - 5.0) * e.coulomb;
  // discrete covariance is exact
  CHECK(rel(energy(grid_dilate(u, t), p).total, pred) < 1e-6);
  // resampled on the same grid: second-order error
  double prev = 1.0;
  for (std::size_t n : {2000, 8000, 32000}) {
    const auto gf = make_grid(n, 20.0);
    const auto ef = energy(gaussian(gf), p);
    const double err = rel(energy(gaussian(gf, t), p).total, t * t * ef.kinetic - std::pow(t, 3.0 * p - 5.0) * ef.coulomb);
    CHECK(err < prev / 8.0);
    prev = err;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("kinetic energy is nonnegative and quadratic") {
  std::mt19937_64 rng(1);
  const auto g = make_grid(300, 12.0);
  for (int k = 0; k < 10; ++k) {
    const auto u = random_profile(g, rng);
    CHECK(kinetic_energy(u) >= 0.0);
    CHECK(rel(kinetic_energy(2.0 * u), 4.0 * kinetic_energy(u)) < 1e-14);
  }
}

TEST_CASE("c1") {
  CHECK(c1(2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c1(2.2) == doctest::Approx(0.08192).epsilon(1e-12));
  for (int k = 1; k < 100; ++k) {
    const double p = 5.0 / 3.0 + (2.0 / 3.0) * k / 100.0;
    CHECK(c1(p) > 0.0);
  }
  CHECK_THROWS_AS(c1(5.0 / 3.0), DomainError);
  CHECK_THROWS_AS(c1(7.0 / 3.0), DomainError);
}

TEST_CASE("scale_minimize") {
  const auto m = scale_minimize(1.0, 1.0, 2.0);
  CHECK(m.t_star == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.value == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK_THROWS_AS(scale_minimize(0.0, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(scale_minimize(1.0, 0.0, 2.0), DomainError);

  const auto g = make_grid(4000, 40.0);
  const auto u = gaussian(g);
  const auto sm = scale_minimize(u, 2.0);
  CHECK(sm.value <= energy(u, 2.0).total);
  const auto at_min = gaussian(g, sm.t_star);
  CHECK(rel(energy(at_min, 2.0).total, sm.value) < 1e-4);

  // orbit invariance: t_star transforms as t_star / t
  const auto u2 = grid_dilate(u, 2.0);
  const auto sm2 = scale_minimize(u2, 2.0);
  CHECK(rel(sm2.value, sm.value) < 1e-6);
  CHECK(rel(sm2.t_star, sm.t_star / 2.0) < 1e-6);

  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const auto v = random_profile(g, rng);
    for (double p : {1.8, 2.0, 2.2}) CHECK(scale_minimize(v, p).value <= energy(v, p).total);
  }
}

TEST_CASE("mass_scaling_exponent") {
  CHECK(mass_scaling_exponent(2.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(mass_scaling_exponent(2.1) == doctest::Approx(5.8 / 0.7).epsilon(1e-12));
  for (int k = 1; k < 100; ++k) CHECK(mass_scaling_exponent(5.0 / 3.0 + (2.0 / 3.0) * k / 100.0) > 0.0);
}

TEST_CASE("c2 lower bound and calibrated constants") {
  const double b = sobolev_constant_sharp();
  CHECK(b == doctest::Approx(0.42737).epsilon(1e-4));
  CHECK(c2_lower_bound(2.1, DiagnosticConstants(2.0, b)) > c2_lower_bound(2.1, DiagnosticConstants(1.0, b)));
  CHECK_THROWS_AS(DiagnosticConstants(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(DiagnosticConstants(1.0, -1.0), DomainError);

  for (int k = 0; k <= 20; ++k) {
    const double p = 1.8 + 0.02 * k;
    const double c = c2_lower_bound(p, calibrated_constants(p));
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
  }

  // Sobolev quotient of the Aubin-Talenti profile (tapered far out) approaches the sharp constant
  const auto g = make_grid(40000, 4000.0);
  const auto at = RadialProfile::sample(g, [](double r) { return std::exp(-r * r * 1e-6) / std::sqrt(1.0 + r * r); });
  CHECK(sobolev_quotient(at) == doctest::Approx(b).epsilon(1e-2));
}

TEST_CASE("Gagliardo-type bound on random profiles") {
  std::mt19937_64 rng(17);
  const auto g = make_grid(2000, 40.0);
  for (double p : {2.0, 2.1, 2.2}) {
    const auto consts = calibrated_constants(p);
    for (int k = 0; k < 20; ++k) {
      const auto chk = gagliardo_bound(random_profile(g, rng), p, consts);
      CHECK(chk.holds);
      CHECK(chk.lhs > 0.0);
    }
  }
}
