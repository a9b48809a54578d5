#pragma once

// Normalized ground states (Q_p, lambda_p) of
//   -Delta Q + lambda Q = (|x|^{-1} * Q^p) Q^{p-1},   ||Q||_2 = N,
// by a projected Sobolev-gradient flow and by a resolvent fixed-point map.

#include <cstddef>
#include <string>
#include <vector>

#include "choquard/functionals.hpp"
#include "choquard/radial.hpp"

namespace choquard {

enum class SolveMethod { flow, fixpoint };

std::string to_string(SolveMethod m);
SolveMethod parse_method(const std::string& s);

/// Documented start shapes; lengths are in units of the natural length r_max / extent.
enum class InitialGuess { gaussian, gaussian_narrow, gaussian_wide, plateau, two_bump };

std::string to_string(InitialGuess g);
InitialGuess parse_guess(const std::string& s);

struct SolverConfig {
  std::size_t grid_n = 8000;
  /// Non-positive selects r_max = extent / sqrt(lambda_estimate).
  double r_max = 0.0;
  double extent = 16.0;
  SolveMethod method = SolveMethod::fixpoint;
  InitialGuess guess = InitialGuess::gaussian;
  /// Fixed point: sup-norm iterate difference relative to ||Q||_inf.
  double fixpoint_tol = 1e-9;
  /// Flow: relative sup-norm of the constrained gradient.
  double flow_tol = 1e-8;
  /// Every returned state has eq_residual below this.
  double residual_tol = 1e-6;
  int max_iterations = 20000;
  int max_halvings = 30;
};

struct GroundState {
  RadialProfile q;
  double lambda = 0.0;
  double p = 0.0;
  double mass = 0.0;  ///< N, with ||q||_2 = N
  EnergyBreakdown energy;
  double eq_residual = 0.0;
  SolveMethod method = SolveMethod::fixpoint;
  int iterations = 0;
  /// Energies of the accepted flow steps (empty for the fixed-point map).
  std::vector<double> energy_trace;

  const RadialGrid& grid() const { return q.grid(); }
};

/// Throws DomainError("p out of range [2, 7/3)") unless 2 <= p < 7/3.
void validate_exponent(double p);
void validate_mass(double mass);

/// Multiplier at mass N from a reference solve at lambda = 1 and exact dilation
/// covariance: Q_N(x) = a^{2/(p-1)} Q_1(a x), lambda_N = a^2.
double estimate_multiplier(double p, double mass);

/// The grid a solve with this configuration uses.
RadialGrid solver_grid(double p, double mass, const SolverConfig& cfg);

RadialProfile initial_guess(const RadialGrid& grid, InitialGuess kind, double length);

/// Scales u to mass N and moves it to the energy minimum of its dilation orbit
/// t^{3/2} u(t x), where the multiplier quotient is automatically positive.
RadialProfile prepare_start(RadialProfile u, double p, double mass);

/// L^2 gradient of E_p without the multiplier: -Delta u - (|x|^{-1} * |u|^p)|u|^{p-2} u.
RadialProfile euler_lagrange_gradient(const RadialProfile& u, double p);

/// lambda = (2p D_p(u) - 2K(u)) / ||u||_2^2.
double multiplier_quotient(const RadialProfile& u, double p);

/// sup|-Delta u + lambda u - V u^{p-1}| / (lambda ||u||_inf).
double equation_residual(const RadialProfile& u, double lambda, double p);

/// sup|Q - (-Delta+lambda)^{-1}(V_Q Q^{p-1})| / ||Q||_inf.
double fixpoint_residual(const GroundState& gs);

GroundState solve_flow(double p, double mass, const SolverConfig& cfg);
GroundState solve_flow(const RadialProfile& start, double p, double mass, const SolverConfig& cfg);
GroundState solve_fixpoint(double p, double mass, const SolverConfig& cfg);
GroundState solve_fixpoint(const RadialProfile& start, double p, double mass, const SolverConfig& cfg);
/// Dispatches on cfg.method.
GroundState solve(double p, double mass, const SolverConfig& cfg);
GroundState solve(const RadialProfile& start, double p, double mass, const SolverConfig& cfg);

/// Recomputes energy, multiplier and residual of a profile at the given lambda.
GroundState make_state(RadialProfile q, double lambda, double p, SolveMethod method, int iterations);

struct PohozaevReport {
  // All values refer to the state dilated to unit mass.
  double k_predicted = 0.0;  ///< (3p-5) lambda / (2(5-p))
  double d_predicted = 0.0;  ///< lambda / (5-p)
  double k_actual = 0.0;
  double d_actual = 0.0;
  double k_rel_error = 0.0;
  double d_rel_error = 0.0;
  double lambda_unit_mass = 0.0;
  double lambda_from_m = 0.0;  ///< -2(5-p)/(7-3p) E_p(Q)
  double lambda_rel_error = 0.0;
  double scaling_value = 0.0;  ///< -C_1(p) (D^2 / K^{3p-5})^{1/(7-3p)}
  double scaling_rel_error = 0.0;

  double max_rel_error() const;
};

PohozaevReport pohozaev_report(const GroundState& gs);

struct DecayFit {
  double gamma = 0.0;  ///< rate in log Q = c - gamma r + sigma log r
  double sigma = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;
  double r2 = 0.0;
  double gamma_over_sqrt_lambda = 0.0;
  double power_constant = 0.0;  ///< max of Q r^4 over [1, r_max/2]
  bool power_bound_ok = false;  ///< Q r^4 stays below it on [r_max/2, r_max]
  double v_constant = 0.0;      ///< max of V r^{3/4} over [1, r_max/2]
  bool c0_v_bound_ok = false;
};

DecayFit decay_fit(const GroundState& gs);

/// Nonincreasing on all but the outer boundary layer (fraction of nodes exempt) and positive.
bool is_positive_decreasing(const RadialProfile& q, double boundary_fraction = 0.05);

}  // namespace choquard
