#include "choquard/ground_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "choquard/error.hpp"
#include "choquard/nonlocal.hpp"

namespace choquard {

std::string to_string(SolveMethod m) { return m == SolveMethod::flow ? "flow" : "fixpoint"; }

SolveMethod parse_method(const std::string& s) {
  if (s == "flow") return SolveMethod::flow;
  if (s == "fixpoint") return SolveMethod::fixpoint;
  throw DomainError("unknown solve method '" + s + "' (expected flow or fixpoint)");
}

std::string to_string(InitialGuess g) {
  switch (g) {
    case InitialGuess::gaussian: return "gaussian";
    case InitialGuess::gaussian_narrow: return "gaussian_narrow";
    case InitialGuess::gaussian_wide: return "gaussian_wide";
    case InitialGuess::plateau: return "plateau";
    case InitialGuess::two_bump: return "two_bump";
  }
  return "gaussian";
}

InitialGuess parse_guess(const std::string& s) {
  for (auto g : {InitialGuess::gaussian, InitialGuess::gaussian_narrow, InitialGuess::gaussian_wide,
                 InitialGuess::plateau, InitialGuess::two_bump}) {
    if (to_string(g) == s) return g;
  }
  throw DomainError("unknown initial guess '" + s + "'");
}

void validate_exponent(double p) {
  if (!(p >= 2.0 && p < 7.0 / 3.0)) throw DomainError("p out of range [2, 7/3)");
}

void validate_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
}

namespace {

struct Nonlinear {
  RadialProfile potential;  // V = |x|^{-1} * |u|^p
  RadialProfile force;      // V |u|^{p-2} u
  double kinetic;
  double coulomb;
};

Nonlinear evaluate(const RadialProfile& u, double p) {
  const auto rho = abs_pow(u, p);
  auto v = newton_potential(rho);
  auto force = hadamard(v, signed_pow(u, p - 1.0));
  const double d = integrate(hadamard(rho, v), Quadrature::trapezoid) / (2.0 * p);
  return {std::move(v), std::move(force), kinetic_energy(u), d};
}

void normalize(RadialProfile& u, double mass) {
  const double m2 = mass_squared(u);
  if (!(m2 > 0.0) || !std::isfinite(m2)) throw NumericalError("cannot normalize a zero or non-finite profile");
  u *= mass / std::sqrt(m2);
}

}  // namespace

double estimate_multiplier(double p, double mass) {
  validate_exponent(p);
  validate_mass(mass);
  // Petviashvili iteration for -Delta u + u = V u^{p-1} on a reference grid.
  const RadialGrid grid(1024, 24.0);
  auto u = RadialProfile::sample(grid, [](double r) { return 2.0 * std::exp(-r); });
  const double gamma = (2.0 * p - 1.0) / (2.0 * p - 2.0);
  for (int it = 0; it < 2000; ++it) {
    const auto nl = evaluate(u, p);
    const double num = 2.0 * nl.kinetic + mass_squared(u);
    const double den = integrate(hadamard(u, nl.force), Quadrature::trapezoid);
    if (!(den > 0.0)) throw NumericalError("reference solve lost positivity");
    auto next = apply_resolvent(nl.force, 1.0);
    next *= std::pow(num / den, gamma);
    const double diff = max_abs_difference(next, u);
    u = std::move(next);
    if (diff <= 1e-12 * u.max_abs()) break;
  }
  const double m0 = std::sqrt(mass_squared(u));
  const double alpha = 2.0 / (p - 1.0);
  const double a = std::pow(mass / m0, 1.0 / (alpha - 1.5));
  const double lambda = a * a;
  if (!(lambda > 1e-280) || !std::isfinite(lambda)) {
    throw DomainError("multiplier estimate underflows; p too close to 7/3 for this mass");
  }
  return lambda;
}

RadialGrid solver_grid(double p, double mass, const SolverConfig& cfg) {
  if (cfg.r_max > 0.0) return RadialGrid(cfg.grid_n, cfg.r_max);
  if (!(cfg.extent > 0.0)) throw DomainError("grid extent must be positive");
  return RadialGrid(cfg.grid_n, cfg.extent / std::sqrt(estimate_multiplier(p, mass)));
}

RadialProfile initial_guess(const RadialGrid& grid, InitialGuess kind, double length) {
  const double l = length;
  auto gauss = [](double x) { return std::exp(-0.5 * x * x); };
  switch (kind) {
    case InitialGuess::gaussian:
      return RadialProfile::sample(grid, [&](double r) { return gauss(r / l); });
    case InitialGuess::gaussian_narrow:
      return RadialProfile::sample(grid, [&](double r) { return gauss(r / (0.5 * l)); });
    case InitialGuess::gaussian_wide:
      return RadialProfile::sample(grid, [&](double r) { return gauss(r / (2.0 * l)); });
    case InitialGuess::plateau:
      return RadialProfile::sample(grid, [&](double r) { return 1.0 / (1.0 + std::exp((r - 2.0 * l) / (0.25 * l))); });
    case InitialGuess::two_bump:
      return RadialProfile::sample(grid, [&](double r) {
        const double s = (r - 4.0 * l) / l;
        return std::exp(-(r / l) * (r / l)) + 0.8 * std::exp(-s * s);
      });
  }
  throw DomainError("unknown initial guess");
}

RadialProfile prepare_start(RadialProfile u, double p, double mass) {
  for (double& v : u.values()) v = std::abs(v);
  normalize(u, mass);
  // the continuous orbit minimum can sit where the grid truncates the profile,
  // so steps are capped and must lower the discrete energy
  double e = energy(u, p).total;
  for (int k = 0; k < 40; ++k) {
    double t = std::clamp(scale_minimize(u, p).t_star, 0.25, 4.0);
    if (std::abs(t - 1.0) < 1e-3) break;
    bool moved = false;
    for (int s = 0; s < 12 && !moved; ++s, t = std::sqrt(t)) {
      auto v = dilate(u, t);
      normalize(v, mass);
      const double ev = energy(v, p).total;
      if (ev < e) {
        u = std::move(v);
        e = ev;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return u;
}

RadialProfile euler_lagrange_gradient(const RadialProfile& u, double p) {
  const auto nl = evaluate(u, p);
  return apply_laplacian(u) - nl.force;
}

double multiplier_quotient(const RadialProfile& u, double p) {
  const auto nl = evaluate(u, p);
  return (2.0 * p * nl.coulomb - 2.0 * nl.kinetic) / mass_squared(u);
}

double equation_residual(const RadialProfile& u, double lambda, double p) {
  const auto nl = evaluate(u, p);
  auto r = apply_laplacian(u) - nl.force;
  r += lambda * u;
  return r.max_abs() / (std::abs(lambda) * u.max_abs());
}

double fixpoint_residual(const GroundState& gs) {
  const auto nl = evaluate(gs.q, gs.p);
  const auto image = apply_resolvent(nl.force, gs.lambda);
  return max_abs_difference(gs.q, image) / gs.q.max_abs();
}

GroundState make_state(RadialProfile q, double lambda, double p, SolveMethod method, int iterations) {
  GroundState gs{std::move(q), 0.0, 0.0, 0.0, {}, 0.0, SolveMethod::fixpoint, 0, {}};
  gs.lambda = lambda;
  gs.p = p;
  gs.energy = energy(gs.q, p);
  gs.mass = std::sqrt(gs.energy.mass);
  gs.eq_residual = equation_residual(gs.q, lambda, p);
  gs.method = method;
  gs.iterations = iterations;
  return gs;
}

namespace {

double natural_length(const RadialGrid& grid, const SolverConfig& cfg) { return grid.r_max() / cfg.extent; }

void check_result(const GroundState& gs, const SolverConfig& cfg) {
  if (!gs.q.all_finite() || !std::isfinite(gs.lambda)) throw NumericalError("solve produced a non-finite state");
  if (!(gs.lambda > 0.0)) throw NumericalError("solve produced a nonpositive multiplier");
  if (gs.eq_residual > cfg.residual_tol) {
    throw NumericalError("equation residual " + std::to_string(gs.eq_residual) + " above tolerance");
  }
}

}  // namespace

GroundState solve_fixpoint(const RadialProfile& start, double p, double mass, const SolverConfig& cfg) {
  validate_exponent(p);
  validate_mass(mass);
  auto u = prepare_start(start, p, mass);
  const double n2 = mass * mass;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const auto nl = evaluate(u, p);
    const double lambda = (2.0 * p * nl.coulomb - 2.0 * nl.kinetic) / n2;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw NumericalError("fixed-point multiplier left (0, inf) at iteration " + std::to_string(it));
    }
    auto next = apply_resolvent(nl.force, lambda);
    normalize(next, mass);
    const double diff = max_abs_difference(next, u);
    u = std::move(next);
    if (diff <= cfg.fixpoint_tol * u.max_abs()) {
      const double lam = multiplier_quotient(u, p);
      auto gs = make_state(std::move(u), lam, p, SolveMethod::fixpoint, it);
      check_result(gs, cfg);
      return gs;
    }
  }
  throw NumericalError("fixed-point iteration did not converge in " + std::to_string(cfg.max_iterations) +
                       " iterations (oscillation or stagnation)");
}

GroundState solve_fixpoint(double p, double mass, const SolverConfig& cfg) {
  validate_exponent(p);
  validate_mass(mass);
  const auto grid = solver_grid(p, mass, cfg);
  return solve_fixpoint(initial_guess(grid, cfg.guess, natural_length(grid, cfg)), p, mass, cfg);
}

GroundState solve_flow(const RadialProfile& start, double p, double mass, const SolverConfig& cfg) {
  validate_exponent(p);
  validate_mass(mass);
  auto u = prepare_start(start, p, mass);
  const auto& grid = u.grid();
  // Sobolev preconditioner (-Delta + c)^{-1}; c matches the decay scale of the grid.
  const double shift = std::pow(cfg.extent / grid.r_max(), 2);
  const double n2 = mass * mass;
  auto dot = [](const RadialProfile& a, const RadialProfile& b) { return inner(a, b, Quadrature::trapezoid); };

  std::vector<double> trace;
  auto nl = evaluate(u, p);
  double e_old = nl.kinetic - nl.coulomb;
  trace.push_back(e_old);
  double tau = 1.0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    auto g = apply_laplacian(u) - nl.force;
    const double lambda = -dot(g, u) / n2;
    auto res = g;
    res += lambda * u;
    if (res.max_abs() <= cfg.flow_tol * std::abs(lambda) * u.max_abs()) {
      auto gs = make_state(std::move(u), lambda, p, SolveMethod::flow, it - 1);
      gs.energy_trace = std::move(trace);
      check_result(gs, cfg);
      return gs;
    }
    auto d = apply_resolvent(g, shift);
    const auto pu = apply_resolvent(u, shift);
    d -= (dot(u, d) / dot(u, pu)) * pu;

    bool accepted = false;
    for (int k = 0; k <= cfg.max_halvings; ++k) {
      auto trial = u - tau * d;
      normalize(trial, mass);
      auto nl_trial = evaluate(trial, p);
      const double e_new = nl_trial.kinetic - nl_trial.coulomb;
      // round-off slack: near the minimum energy differences drop below machine precision
      if (std::isfinite(e_new) && e_new <= e_old + 1e-12 * (nl_trial.kinetic + nl_trial.coulomb)) {
        u = std::move(trial);
        nl = std::move(nl_trial);
        e_old = e_new;
        trace.push_back(e_new);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) throw NumericalError("flow: energy increased after backtracking exhausted");
    tau = std::min(1.0, 2.0 * tau);
  }
  throw NumericalError("flow did not converge in " + std::to_string(cfg.max_iterations) + " iterations");
}

GroundState solve_flow(double p, double mass, const SolverConfig& cfg) {
  validate_exponent(p);
  validate_mass(mass);
  const auto grid = solver_grid(p, mass, cfg);
  return solve_flow(initial_guess(grid, cfg.guess, natural_length(grid, cfg)), p, mass, cfg);
}

GroundState solve(double p, double mass, const SolverConfig& cfg) {
  return cfg.method == SolveMethod::flow ? solve_flow(p, mass, cfg) : solve_fixpoint(p, mass, cfg);
}

GroundState solve(const RadialProfile& start, double p, double mass, const SolverConfig& cfg) {
  return cfg.method == SolveMethod::flow ? solve_flow(start, p, mass, cfg) : solve_fixpoint(start, p, mass, cfg);
}

double PohozaevReport::max_rel_error() const {
  return std::max({k_rel_error, d_rel_error, lambda_rel_error, scaling_rel_error});
}

PohozaevReport pohozaev_report(const GroundState& gs) {
  const double p = gs.p;
  const double alpha = 2.0 / (p - 1.0);
  // dilation Q_1(x) = b^alpha Q_N(b x) carrying mass N to mass 1
  const double b = std::pow(1.0 / gs.mass, 1.0 / (alpha - 1.5));
  const double ek = std::pow(b, (5.0 - p) / (p - 1.0));
  PohozaevReport r;
  r.lambda_unit_mass = gs.lambda * b * b;
  r.k_actual = gs.energy.kinetic * ek;
  r.d_actual = gs.energy.coulomb * ek;
  const double lam = r.lambda_unit_mass;
  r.k_predicted = (3.0 * p - 5.0) * lam / (2.0 * (5.0 - p));
  r.d_predicted = lam / (5.0 - p);
  r.k_rel_error = std::abs(r.k_actual - r.k_predicted) / std::abs(r.k_predicted);
  r.d_rel_error = std::abs(r.d_actual - r.d_predicted) / std::abs(r.d_predicted);
  const double e = r.k_actual - r.d_actual;
  r.lambda_from_m = -2.0 * (5.0 - p) / (7.0 - 3.0 * p) * e;
  r.lambda_rel_error = std::abs(r.lambda_from_m - lam) / lam;
  r.scaling_value = scale_minimize(r.k_actual, r.d_actual, p).value;
  r.scaling_rel_error = std::abs(e - r.scaling_value) / std::abs(e);
  return r;
}

DecayFit decay_fit(const GroundState& gs) {
  const auto& grid = gs.grid();
  const auto& q = gs.q;
  const double rmax = grid.r_max();
  DecayFit fit;
  fit.r_a = 0.4 * rmax;
  fit.r_b = 0.8 * rmax;
  const double qa = interpolate(q, fit.r_a);
  const double qb = interpolate(q, fit.r_b);
  if (!(qa > 0.0) || !(qb > 0.0) || !(qb / qa < 1e-2)) {
    throw DomainError("insufficient decay window: r_max too small for the profile");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    if (r >= fit.r_a && r <= fit.r_b) {
      if (!(q[i] > 0.0)) throw NumericalError("nonpositive value inside the decay window");
      idx.push_back(i);
    }
  }
  if (idx.size() < 8) throw DomainError("insufficient decay window: too few nodes");
  Eigen::MatrixXd a(idx.size(), 3);
  Eigen::VectorXd y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double r = grid.r(idx[k]);
    a(k, 0) = 1.0;
    a(k, 1) = -r;
    a(k, 2) = std::log(r);
    y(k) = std::log(q[idx[k]]);
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
  fit.gamma = c(1);
  fit.sigma = c(2);
  const double ss_res = (a * c - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.gamma_over_sqrt_lambda = fit.gamma / std::sqrt(gs.lambda);

  // power-law envelopes: the constant is the sup over [1, r_max/2], the tail must stay below it
  const auto v = newton_potential(abs_pow(q, gs.p));
  const double half = 0.5 * rmax;
  double cq = 0.0, cv = 0.0, tq = 0.0, tv = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    if (r < 1.0) continue;
    const double fq = q[i] * std::pow(r, 4);
    const double fv = v[i] * std::pow(r, 0.75);
    if (r <= half) {
      cq = std::max(cq, fq);
      cv = std::max(cv, fv);
    } else {
      tq = std::max(tq, fq);
      tv = std::max(tv, fv);
    }
  }
  fit.power_constant = cq;
  fit.v_constant = cv;
  fit.power_bound_ok = cq > 0.0 && tq <= cq;
  fit.c0_v_bound_ok = cv > 0.0 && tv <= cv;
  return fit;
}

bool is_positive_decreasing(const RadialProfile& q, double boundary_fraction) {
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(q[i] > 0.0)) return false;
  }
  const auto interior = static_cast<std::size_t>(static_cast<double>(n) * (1.0 - boundary_fraction));
  for (std::size_t i = 0; i + 1 < interior; ++i) {
    if (!(q[i + 1] < q[i])) return false;
  }
  return true;
}

}  // namespace choquard
