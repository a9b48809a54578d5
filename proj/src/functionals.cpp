#include "choquard/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "choquard/error.hpp"
#include "choquard/nonlocal.hpp"

namespace choquard {

DiagnosticConstants::DiagnosticConstants(double a, double b) : hls(a), sobolev(b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("HLS and Sobolev constants must be positive");
  }
}

bool in_energy_range(double p) { return p > 5.0 / 3.0 && p < 7.0 / 3.0; }

static void require_energy_range(double p) {
  if (!in_energy_range(p)) throw DomainError("p = " + std::to_string(p) + " outside (5/3, 7/3)");
}

double kinetic_energy(const RadialProfile& u) {
  const auto& g = u.grid();
  const double h = g.spacing();
  double s = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = g.r(i) * u[i];
    s += (w - prev) * (w - prev);
    prev = w;
  }
  s += prev * prev;
  return 0.5 * kFourPi * s / h;
}

double mass_squared(const RadialProfile& u) { return integrate(hadamard(u, u), Quadrature::trapezoid); }

EnergyBreakdown energy(const RadialProfile& u, double p) {
  require_energy_range(p);
  EnergyBreakdown e;
  e.p = p;
  e.kinetic = kinetic_energy(u);
  e.coulomb = coulomb_energy(u, p);
  e.total = e.kinetic - e.coulomb;
  e.mass = mass_squared(u);
  return e;
}

double c1(double p) {
  require_energy_range(p);
  const double a = 7.0 - 3.0 * p;
  const double b = 3.0 * p - 5.0;
  return (a / b) * std::pow(b / 2.0, 2.0 / a);
}

ScalingMinimum scale_minimize(double kinetic, double coulomb, double p) {
  require_energy_range(p);
  if (!(kinetic > 0.0) || !(coulomb > 0.0)) {
    throw DomainError("scaling minimum needs K > 0 and D_p > 0");
  }
  const double a = 7.0 - 3.0 * p;
  const double b = 3.0 * p - 5.0;
  ScalingMinimum m;
  m.t_star = std::pow(b * coulomb / (2.0 * kinetic), 1.0 / a);
  m.value = -c1(p) * std::pow(coulomb * coulomb / std::pow(kinetic, b), 1.0 / a);
  return m;
}

ScalingMinimum scale_minimize(const RadialProfile& u, double p) {
  return scale_minimize(kinetic_energy(u), coulomb_energy(u, p), p);
}

double mass_scaling_exponent(double p) {
  require_energy_range(p);
  return (10.0 - 2.0 * p) / (7.0 - 3.0 * p);
}

double c2_lower_bound(double p, const DiagnosticConstants& consts) {
  require_energy_range(p);
  const double a = 7.0 - 3.0 * p;
  const double b = 3.0 * p - 5.0;
  const double inner = b * consts.hls * std::pow(std::sqrt(2.0) * consts.sobolev, b) / (4.0 * p);
  return (a / b) * std::pow(inner, 2.0 / a);
}

double hls_quotient(const RadialProfile& u, double p) {
  const double lhs = 2.0 * p * coulomb_energy(u, p);
  const double norm = norm_Lq(u, 6.0 * p / 5.0, Quadrature::trapezoid);
  return lhs / std::pow(norm, 2.0 * p);
}

double sobolev_quotient(const RadialProfile& u) {
  return norm_Lq(u, 6.0, Quadrature::trapezoid) / std::sqrt(2.0 * kinetic_energy(u));
}

double sobolev_constant_sharp() {
  // S = 2 / (sqrt(3) |S^3|^{1/3}), |S^3| = 2 pi^2
  return 2.0 / (std::sqrt(3.0) * std::cbrt(2.0 * kPi * kPi));
}

double calibrate_hls_constant(std::span<const RadialProfile> profiles, double p) {
  if (profiles.empty()) throw DomainError("HLS calibration needs at least one profile");
  double best = 0.0;
  for (const auto& u : profiles) best = std::max(best, hls_quotient(u, p));
  return 1.5 * best;
}

DiagnosticConstants calibrated_constants(double p, std::span<const RadialProfile> extra) {
  const RadialGrid grid(4000, 40.0);
  std::vector<RadialProfile> family(extra.begin(), extra.end());
  for (double width : {0.5, 1.0, 2.0, 4.0}) {
    family.push_back(RadialProfile::sample(grid, [width](double r) { return std::exp(-0.5 * r * r / (width * width)); }));
  }
  return {calibrate_hls_constant(family, p), sobolev_constant_sharp()};
}

GagliardoCheck gagliardo_bound(const RadialProfile& u, double p, const DiagnosticConstants& consts) {
  GagliardoCheck c;
  const double b = 3.0 * p - 5.0;
  c.lhs = 2.0 * p * coulomb_energy(u, p);
  const double l2 = std::sqrt(mass_squared(u));
  const double grad = std::sqrt(2.0 * kinetic_energy(u));
  c.rhs = consts.hls * std::pow(consts.sobolev, b) * std::pow(l2, 5.0 - p) * std::pow(grad, b);
  c.holds = c.lhs <= c.rhs;
  return c;
}

}  // namespace choquard
