#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "choquard/error.hpp"
#include "choquard/ground_state.hpp"

using namespace choquard;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SolverConfig with(SolveMethod m, InitialGuess g = InitialGuess::gaussian) {
  SolverConfig c;
  c.method = m;
  c.guess = g;
  return c;
}

RadialProfile random_smooth(const RadialGrid& g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double a = scale * (0.5 + U(rng)), b = U(rng), c = 2.0 * U(rng) / scale;
  return RadialProfile::sample(g, [=](double r) { return std::exp(-r / a) * (1.0 + b * std::cos(c * r)); });
}
}  // namespace

TEST_CASE("input validation") {
  try {
    validate_exponent(2.5);
    FAIL("accepted p = 2.5");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()) == "p out of range [2, 7/3)");
  }
  CHECK_THROWS_AS(validate_exponent(1.99), DomainError);
  CHECK_THROWS_AS(validate_exponent(7.0 / 3.0), DomainError);
  CHECK_NOTHROW(validate_exponent(2.0));
  CHECK_THROWS_AS(validate_mass(0.0), DomainError);
  CHECK_THROWS_AS(solve_flow(2.4, 1.0, SolverConfig{}), DomainError);
  CHECK(parse_method("flow") == SolveMethod::flow);
  CHECK_THROWS_AS(parse_method("newton"), DomainError);
}

TEST_CASE("euler_lagrange_gradient is the first variation") {
  const auto g = make_grid(2000, 40.0);
  CHECK(euler_lagrange_gradient(RadialProfile(g), 2.0).max_abs() == 0.0);
  std::mt19937_64 rng(2024);
  const double eps = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const double p = 2.0 + 0.01 * k;
    const auto u = random_smooth(g, rng, 2.0), v = random_smooth(g, rng, 3.0);
    const double fd = (energy(u + eps * v, p).total - energy(u - eps * v, p).total) / (2.0 * eps);
    const double an = inner(v, euler_lagrange_gradient(u, p), Quadrature::trapezoid);
    CHECK(rel(fd, an) < 1e-4);
  }
}

TEST_CASE("multiplier estimate is close to the solved value") {
  for (double p : {2.0, 2.1, 2.2}) {
    const auto gs = solve_fixpoint(p, 1.0, SolverConfig{});
    CHECK(rel(estimate_multiplier(p, 1.0), gs.lambda) < 1e-2);
  }
  CHECK(estimate_multiplier(2.0, 1.0) == doctest::Approx(0.08138).epsilon(1e-3));
}

TEST_CASE("flow solve at p = 2") {
  const auto gs = solve_flow(2.0, 1.0, SolverConfig{});
  CHECK(gs.method == SolveMethod::flow);
  CHECK(gs.eq_residual <= 1e-6);
  CHECK(gs.energy.total < 0.0);
  CHECK(gs.lambda > 0.0);
  CHECK(std::abs(gs.mass - 1.0) <= 1e-8);
  CHECK(is_positive_decreasing(gs.q));
  REQUIRE(gs.energy_trace.size() >= 2);
  for (std::size_t i = 1; i < gs.energy_trace.size(); ++i) {
    CHECK(gs.energy_trace[i] <= gs.energy_trace[i - 1] + 1e-12 * std::abs(gs.energy_trace[i - 1]));
  }
  CHECK(rel(gs.energy_trace.back(), gs.energy.total) < 1e-12);

  const auto residual = euler_lagrange_gradient(gs.q, 2.0) + gs.lambda * gs.q;
  CHECK(residual.max_abs() <= 1e-6 * gs.lambda * gs.q.max_abs());
  CHECK(rel(multiplier_quotient(gs.q, 2.0), gs.lambda) < 1e-8);
}

TEST_CASE("mass scaling at p = 2") {
  const auto a = solve_flow(2.0, 1.0, SolverConfig{});
  const auto b = solve_flow(2.0, 1.3, SolverConfig{});
  CHECK(rel(b.energy.total / a.energy.total, std::pow(1.3, 6.0)) < 1e-4);
}

TEST_CASE("fixed-point solve") {
  const SolverConfig cfg;
  const auto gs = solve_fixpoint(2.0, 1.0, cfg);
  CHECK(gs.method == SolveMethod::fixpoint);
  CHECK(gs.energy_trace.empty());
  CHECK(fixpoint_residual(gs) <= 10.0 * cfg.fixpoint_tol);
  CHECK(is_positive_decreasing(gs.q));
  CHECK(std::abs(gs.mass - 1.0) <= 1e-8);

  SUBCASE("non-convergence is reported") {
    SolverConfig tight;
    tight.max_iterations = 3;
    CHECK_THROWS_AS(solve_fixpoint(2.0, 1.0, tight), NumericalError);
  }
}

TEST_CASE("flow and fixed point agree") {
  for (double p : {2.0, 2.1, 2.2}) {
    const auto f = solve_flow(p, 1.0, SolverConfig{});
    const auto x = solve_fixpoint(p, 1.0, SolverConfig{});
    REQUIRE(f.grid() == x.grid());
    CHECK(max_abs_difference(f.q, x.q) <= 1e-5 * x.q.max_abs());
    CHECK(rel(f.lambda, x.lambda) < 1e-5);
  }
}

TEST_CASE("start independence") {
  const auto a = solve_flow(2.0, 1.0, with(SolveMethod::flow, InitialGuess::gaussian));
  const auto b = solve_flow(2.0, 1.0, with(SolveMethod::flow, InitialGuess::plateau));
  CHECK(max_abs_difference(a.q, b.q) <= 1e-5 * a.q.max_abs());
}

TEST_CASE("Pohozaev identities") {
  SUBCASE("p = 2") {
    const auto r = pohozaev_report(solve_fixpoint(2.0, 1.0, SolverConfig{}));
    CHECK(rel(r.k_actual / r.lambda_unit_mass, 1.0 / 6.0) < 1e-5);
    CHECK(rel(r.d_actual / r.lambda_unit_mass, 1.0 / 3.0) < 1e-5);
    CHECK(r.lambda_rel_error < 1e-5);
    CHECK(r.scaling_rel_error < 1e-5);
  }
  SUBCASE("p = 2.2") {
    const auto r = pohozaev_report(solve_fixpoint(2.2, 1.0, SolverConfig{}));
    CHECK(rel(r.k_actual / r.lambda_unit_mass, 0.285714285714) < 1e-5);
    CHECK(rel(r.d_actual / r.lambda_unit_mass, 0.357142857143) < 1e-5);
    CHECK(r.lambda_rel_error < 1e-5);
  }
  SUBCASE("rescaling from another mass") {
    const auto r1 = pohozaev_report(solve_fixpoint(2.1, 1.0, SolverConfig{}));
    const auto r2 = pohozaev_report(solve_fixpoint(2.1, 0.7, SolverConfig{}));
    CHECK(r2.max_rel_error() < 1e-5);
    CHECK(rel(r2.lambda_unit_mass, r1.lambda_unit_mass) < 1e-5);
  }
  SUBCASE("a corrupted multiplier is detected") {
    auto gs = solve_fixpoint(2.0, 1.0, SolverConfig{});
    gs.lambda *= 2.0;
    CHECK(pohozaev_report(gs).max_rel_error() > 0.1);
  }
}

TEST_CASE("decay fit") {
  const auto gs = solve_fixpoint(2.0, 1.0, SolverConfig{});
  const auto fit = decay_fit(gs);
  CHECK(fit.gamma > 0.0);
  CHECK(fit.r_a > 0.0);
  CHECK(fit.r_b <= gs.grid().r_max());
  CHECK(std::abs(fit.gamma_over_sqrt_lambda - 1.0) < 0.05);
  CHECK(fit.r2 >= 0.999);
  CHECK(fit.power_bound_ok);
  CHECK(fit.c0_v_bound_ok);

  SolverConfig small;
  small.r_max = 8.0;
  small.grid_n = 2000;
  auto cramped = gs;
  cramped.q = resample(gs.q, make_grid(2000, 8.0));
  CHECK_THROWS_AS(decay_fit(cramped), DomainError);
}

TEST_CASE("grid robustness") {
  SolverConfig c1, c2;
  c1.grid_n = 4000;
  c2.grid_n = 8000;
  for (double p : {2.0, 2.1}) {
    const auto a = solve_fixpoint(p, 1.0, c1), b = solve_fixpoint(p, 1.0, c2);
    CHECK(rel(a.lambda, b.lambda) <= 1e-4);
  }
}

TEST_CASE("explicit desk-scale grid") {
  SolverConfig cfg;
  cfg.grid_n = 2000;
  cfg.r_max = 40.0;
  cfg.method = SolveMethod::flow;
  const auto gs = solve(2.0, 1.0, cfg);
  CHECK(gs.grid().size() == 2000);
  CHECK(gs.eq_residual <= 1e-6);
  // Dirichlet truncation at r = 40 dominates here; the auto grid does better
  CHECK(pohozaev_report(gs).max_rel_error() < 2e-4);
  cfg.r_max = 0.0;
  CHECK(pohozaev_report(solve(2.0, 1.0, cfg)).max_rel_error() < 2e-5);
}

TEST_CASE("energy lower bound") {
  const auto gs = solve_fixpoint(2.1, 1.0, SolverConfig{});
  const RadialProfile extra[] = {gs.q};
  const auto consts = calibrated_constants(2.1, extra);
  CHECK(gs.energy.total >= -c2_lower_bound(2.1, consts));
  CHECK(gs.energy.total < 0.0);
}
