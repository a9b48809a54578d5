#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "choquard/error.hpp"
#include "choquard/rearrangement.hpp"

using namespace choquard;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

RadialProfile random_nonneg(const RadialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int bumps = 1 + int(4.0 * U(rng));
  std::vector<double> a, c, w;
  for (int k = 0; k < bumps; ++k) {
    a.push_back(0.1 + U(rng));
    c.push_back(20.0 * U(rng));
    w.push_back(0.3 + 4.0 * U(rng));
  }
  return RadialProfile::sample(g, [&](double r) {
    double s = 0.0;
    for (int k = 0; k < bumps; ++k) s += a[k] * std::exp(-((r - c[k]) / w[k]) * ((r - c[k]) / w[k]));
    return s;
  });
}

// support radius of a 0/1 profile: last node with value 1, plus half a cell
double support_edge(const RadialProfile& u) {
  double edge = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 0.5) edge = u.grid().r(i) + 0.5 * u.grid().spacing();
  }
  return edge;
}
}  // namespace

const RadialGrid kGrid(2000, 40.0);

TEST_CASE("monotone profiles are fixed points") {
  const auto g = RadialProfile::sample(kGrid, [](double r) { return std::exp(-r); });
  const auto s = rearrange(g);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(s[i] == g[i]);

  // with ties
  const auto step = RadialProfile::sample(kGrid, [](double r) { return r < 3.0 ? 1.0 : (r < 7.0 ? 0.5 : 0.0); });
  const auto ss = rearrange(step);
  for (std::size_t i = 0; i < step.size(); ++i) REQUIRE(ss[i] == step[i]);

  const auto rep = rearrangement_inequalities(g, 2.0);
  CHECK(rep.kinetic_star == rep.kinetic);
  CHECK(rep.coulomb_star == rep.coulomb);
  CHECK(rep.kinetic_ok);
  CHECK(rep.coulomb_ok);
}

TEST_CASE("shell moves to an equal-volume ball") {
  const RadialGrid fine(40000, 10.0);
  // shell [5, 6]: radius (216 - 125)^{1/3}
  const auto shell = RadialProfile::sample(fine, [](double r) { return r >= 5.0 && r <= 6.0 ? 1.0 : 0.0; });
  const auto s = rearrange(shell);
  CHECK(std::abs(support_edge(s) - std::cbrt(91.0)) <= 2.0 * fine.spacing());
  CHECK(std::cbrt(91.0) == doctest::Approx(4.49794).epsilon(1e-5));
  CHECK(s[0] == 1.0);
  // shell [4, 5]: radius (125 - 64)^{1/3}
  const auto shell2 = RadialProfile::sample(fine, [](double r) { return r >= 4.0 && r <= 5.0 ? 1.0 : 0.0; });
  CHECK(std::abs(support_edge(rearrange(shell2)) - 3.93650) <= 2.0 * fine.spacing());
}

TEST_CASE("negative input is rejected") {
  const auto u = RadialProfile::sample(kGrid, [](double r) { return std::sin(r); });
  CHECK_THROWS_AS(rearrange(u), DomainError);
  CHECK_THROWS_AS(rearrangement_inequalities(u, 2.0), DomainError);
  const auto g = RadialProfile::sample(kGrid, [](double r) { return std::exp(-r); });
  CHECK_THROWS_AS(rearrangement_inequalities(g, 1.5), DomainError);
}

TEST_CASE("oscillating profile") {
  const auto u =
      RadialProfile::sample(kGrid, [](double r) { return std::exp(-r) * std::max(0.0, 1.0 + 0.5 * std::sin(3.0 * r)); });
  const auto rep = rearrangement_inequalities(u, 2.0);
  CHECK(rep.kinetic_ok);
  CHECK(rep.coulomb_ok);
  CHECK(rep.kinetic_star < rep.kinetic);
  CHECK(rep.coulomb_star > rep.coulomb);
}

TEST_CASE("random battery") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const auto u = random_nonneg(kGrid, rng);
    const auto s = rearrange(u);
    CAPTURE(t);
    for (double q : {2.0, 6.0}) {
      CHECK(rel(norm_Lq(s, q, Quadrature::trapezoid), norm_Lq(u, q, Quadrature::trapezoid)) <= 1e-4);
    }
    const double p = 1.7 + 0.6 * U(rng);
    const auto rep = rearrangement_inequalities(u, std::min(p, 2.3));
    if (!rep.kinetic_ok || !rep.coulomb_ok) ++violations;

    // idempotent
    const auto ss = rearrange(s);
    for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(ss[i] == s[i]);
    // nonincreasing
    for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i] <= s[i - 1]);
  }
  CHECK(violations == 0);
}

TEST_CASE("equimeasurability") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double cell = kFourPi * kGrid.spacing() * kGrid.r_max() * kGrid.r_max();
  for (int t = 0; t < 5; ++t) {
    const auto u = random_nonneg(kGrid, rng);
    const auto s = rearrange(u);
    for (int k = 0; k < 10; ++k) {
      const double level = U(rng) * u.max_abs();
      CHECK(std::abs(level_set_measure(u, level) - level_set_measure(s, level)) <= cell);
    }
  }
}

TEST_CASE("order preservation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const auto u = random_nonneg(kGrid, rng);
    auto v = u;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.2 * U(rng) * std::exp(-0.1 * kGrid.r(i));
    const auto su = rearrange(u), sv = rearrange(v);
    for (std::size_t i = 0; i < u.size(); ++i) REQUIRE(su[i] <= sv[i]);
  }
}
