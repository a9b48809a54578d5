#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "choquard/continuation.hpp"

using namespace choquard;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SweepConfig light() {
  SweepConfig c;
  c.spectra = false;
  c.n_starts = 0;
  return c;
}

std::string csv(const std::vector<SweepRecord>& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  return os.str();
}
}  // namespace

TEST_CASE("sweep arguments") {
  CHECK_THROWS_AS(validate_sweep(2.0, 2.4, 11), DomainError);
  CHECK_THROWS_AS(validate_sweep(2.0, kSweepMaxP + 1e-9, 11), DomainError);
  CHECK_THROWS_AS(validate_sweep(1.9, 2.1, 11), DomainError);
  CHECK_THROWS_AS(validate_sweep(2.0, 2.1, 1), DomainError);
  CHECK_THROWS_AS(validate_sweep(2.1, 2.0, 5), DomainError);
  CHECK_THROWS_AS(validate_sweep(2.0, 2.1, 0), DomainError);
  CHECK_NOTHROW(validate_sweep(2.0, 2.0, 1));
  CHECK_NOTHROW(validate_sweep(2.0, 2.25, 11));
  CHECK_THROWS_AS(sweep_points({2.0, 2.1, 2.05}, 1.0, light()), DomainError);
}

TEST_CASE("worker count") {
  CHECK(worker_count(4) == 4);
  setenv("CHOQUARD_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("CHOQUARD_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  unsetenv("CHOQUARD_THREADS");
}

TEST_CASE("single anchor record") {
  const auto recs = sweep(2.0, 2.0, 1, 1.0);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].h1_dist == 0.0);
  CHECK(recs[0].passes(SweepTolerances{}));
  CHECK(kernel_tracking(recs).constant);
  const auto st = convergence_study(recs);
  CHECK(st.has_anchor);
  CHECK(st.anchor_distance == 0.0);
  CHECK(st.tail_points == 0);
}

TEST_CASE("warm-started branch") {
  SweepConfig cfg;
  cfg.n_starts = 0;
  const auto recs = sweep(2.0, 2.1, 5, 1.0, cfg);
  REQUIRE(recs.size() == 5);
  CHECK(recs.back().p == 2.1);

  double lam_jump = 0.0, m_jump = 0.0, lam_max = 0.0, m_max = 0.0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    CAPTURE(r.p);
    CHECK(r.lambda > 0.0);
    CHECK(r.m < 0.0);
    CHECK(r.nondegenerate);
    CHECK(r.pohozaev_err <= 1e-5);
    CHECK(r.passes(cfg.tol, true, false));
    if (i > 0) {
      CHECK(r.h1_dist > recs[i - 1].h1_dist);
      const double dl = std::abs(r.lambda - recs[i - 1].lambda), dm = std::abs(r.m - recs[i - 1].m);
      lam_jump += dl;
      m_jump += dm;
      lam_max = std::max(lam_max, dl);
      m_max = std::max(m_max, dm);
    }
    // path independence: the cold solve lands on the same state
    const auto cold = solve(r.p, 1.0, cfg.solver);
    REQUIRE(cold.grid() == r.state.grid());
    CHECK(max_abs_difference(cold.q, r.state.q) <= 1e-5 * cold.q.max_abs());
  }
  CHECK(lam_max <= 5.0 * lam_jump / 4.0);
  CHECK(m_max <= 5.0 * m_jump / 4.0);

  const auto kt = kernel_tracking(recs);
  CHECK(kt.constant);
  REQUIRE(kt.counts.size() == 5);

  SUBCASE("a perturbed record breaks the tracking") {
    auto bad = recs;
    bad[2].kernel_counts[1] = 2;
    CHECK_FALSE(kernel_tracking(bad).constant);
  }
}

TEST_CASE("h1 distance") {
  // Gaussians exp(-r^2 / (2 s^2)): closed-form overlaps
  auto overlap = [](double a, double b) {
    const double s2 = a * a * b * b / (a * a + b * b);
    const double l2 = std::pow(2.0 * kPi * s2, 1.5);
    return l2 + 3.0 * s2 * l2 / (a * a * b * b);
  };
  const double a = 1.0, b = 1.3;
  const double exact = std::sqrt(overlap(a, a) + overlap(b, b) - 2.0 * overlap(a, b));
  auto gauss = [](const RadialGrid& g, double s) {
    return RadialProfile::sample(g, [s](double r) { return std::exp(-r * r / (2.0 * s * s)); });
  };
  const RadialGrid g1(4000, 20.0), g2(3000, 45.0);
  CHECK(rel(h1_distance(gauss(g1, a), gauss(g1, b)), exact) < 1e-4);
  CHECK(rel(h1_distance(gauss(g1, a), gauss(g2, b)), exact) < 1e-4);
  CHECK(rel(h1_distance(gauss(g2, b), gauss(g1, a)), exact) < 1e-4);
  CHECK(h1_distance(gauss(g1, a), gauss(g1, a)) == 0.0);
}

TEST_CASE("convergence to the Hartree state") {
  const auto recs = sweep_points({2.0, 2.025, 2.05, 2.1, 2.2}, 1.0, light());
  const auto st = convergence_study(recs);
  CHECK(st.has_anchor);
  CHECK(st.anchor_distance == 0.0);
  CHECK(st.tail_points == 4);
  CHECK(st.monotone);
  CHECK(st.fitted_order >= 0.8);
  CHECK(st.fitted_order <= 1.2);

  SUBCASE("without the anchor the distances come from a separate p = 2 solve") {
    const auto tail = sweep_points({2.025, 2.05}, 1.0, light());
    CHECK(rel(tail[0].h1_dist, recs[1].h1_dist) < 1e-6);
    CHECK_FALSE(convergence_study(tail).has_anchor);
  }
}

TEST_CASE("uniqueness probe") {
  CHECK_THROWS_AS(start_family(2), DomainError);
  CHECK_THROWS_AS(start_family(6), DomainError);
  CHECK(start_family(5).back() == InitialGuess::two_bump);
  for (double p : {2.0, 2.1}) {
    const auto u = uniqueness_probe(p, 1.0, 5);
    CAPTURE(p);
    CHECK(u.failures.empty());
    CHECK(u.lambdas.size() == 5);
    CHECK(u.unique);
    CHECK(u.spread <= 1e-4);
    CHECK(u.lambda_spread <= 1e-5);
  }

  SUBCASE("failing starts are reported, not fatal") {
    SolverConfig tight;
    tight.max_iterations = 3;
    const auto u = uniqueness_probe(2.0, 1.0, 3, tight);
    CHECK(u.failures.size() == 3);
    CHECK_FALSE(u.unique);
  }
}

TEST_CASE("mass scaling along the branch") {
  for (double p : {2.1, 2.2}) {
    const auto a = solve(p, 1.0, SolverConfig{}), b = solve(p, 1.3, SolverConfig{});
    CHECK(rel(b.energy.total / a.energy.total, std::pow(1.3, mass_scaling_exponent(p))) < 1e-3);
  }
}

TEST_CASE("failing solves abort with the partial list") {
  SweepConfig cfg = light();
  cfg.solver.max_iterations = 3;
  try {
    (void)sweep(2.0, 2.1, 3, 1.0, cfg);
    FAIL("sweep did not fail");
  } catch (const SweepError& e) {
    CHECK(e.failed_p == 2.0);
    CHECK(e.partial.empty());
  }
}

TEST_CASE("sweep csv") {
  const auto recs = sweep(2.0, 2.05, 3, 1.0, light());
  const auto text = csv(recs);
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "p,lambda,m,h1_dist,pohozaev_err,nondegenerate,spread,gamma");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
  CHECK(text.find("2.0249999999999999") != std::string::npos);

  // worker count does not change the output
  SweepConfig threaded = light();
  threaded.threads = 3;
  CHECK(csv(sweep(2.0, 2.05, 3, 1.0, threaded)) == text);
}
