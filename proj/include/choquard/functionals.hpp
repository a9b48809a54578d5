#pragma once

// Energy functional E_p = K - D_p on the mass sphere, its scaling orbit,
// and the a-priori constants built on top of it.

#include <span>

#include "choquard/radial.hpp"

namespace choquard {

struct EnergyBreakdown {
  double kinetic = 0.0;  ///< K(u) = 1/2 int |grad u|^2
  double coulomb = 0.0;  ///< D_p(u)
  double total = 0.0;    ///< K - D_p
  double mass = 0.0;     ///< ||u||_2^2
  double p = 0.0;
};

/// Constants of the Hardy-Littlewood-Sobolev (A) and Sobolev (B) inequalities.
/// Neither is fixed by the theory used here; they are calibrated inputs.
struct DiagnosticConstants {
  double hls = 0.0;
  double sobolev = 0.0;

  DiagnosticConstants(double a, double b);
};

/// Open interval (5/3, 7/3) on which the constrained problem is well posed.
bool in_energy_range(double p);

/// K(u) from staggered differences of w = r*u with w = 0 at both ends;
/// nonnegative by construction and the exact quadratic form of the sector Laplacian.
double kinetic_energy(const RadialProfile& u);

/// ||u||_2^2 under the node-sum rule used by the discrete energy.
double mass_squared(const RadialProfile& u);

EnergyBreakdown energy(const RadialProfile& u, double p);

/// C_1(p) = (7-3p)/(3p-5) * ((3p-5)/2)^{2/(7-3p)}.
double c1(double p);

struct ScalingMinimum {
  double t_star = 0.0;
  double value = 0.0;
};

/// Closed-form minimum of E_p(t^{3/2} u(t x)) over t > 0 from (K, D_p).
ScalingMinimum scale_minimize(double kinetic, double coulomb, double p);
ScalingMinimum scale_minimize(const RadialProfile& u, double p);

/// Exponent (10-2p)/(7-3p) in m(N,p) = m(1,p) N^{...}.
double mass_scaling_exponent(double p);

/// C_2(p) with -C_2(p) <= m(p).
double c2_lower_bound(double p, const DiagnosticConstants& consts);

/// 2p D_p(u) / ||u||_{6p/5}^{2p}; the HLS constant is an upper bound of this quotient.
double hls_quotient(const RadialProfile& u, double p);
/// ||u||_6 / ||grad u||_2.
double sobolev_quotient(const RadialProfile& u);
/// Best Sobolev constant in R^3, attained by (1+|x|^2)^{-1/2}.
double sobolev_constant_sharp();
/// 1.5 times the largest HLS quotient over the supplied profiles.
double calibrate_hls_constant(std::span<const RadialProfile> profiles, double p);
/// Gaussians of several widths together with the given extra profiles; B is the sharp value.
DiagnosticConstants calibrated_constants(double p, std::span<const RadialProfile> extra = {});

struct GagliardoCheck {
  double lhs = 0.0;  ///< 2p D_p(u)
  double rhs = 0.0;  ///< A B^{3p-5} ||u||_2^{5-p} ||grad u||_2^{3p-5}
  bool holds = false;
};
GagliardoCheck gagliardo_bound(const RadialProfile& u, double p, const DiagnosticConstants& consts);

}  // namespace choquard
