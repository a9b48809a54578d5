#pragma once

// Convolutions with |x|^{-1} and the resolvent (-Delta + lambda)^{-1},
// reduced to radial prefix sums and tridiagonal solves.

#include "choquard/radial.hpp"

namespace choquard {

/// V = |x|^{-1} * f for radial f:
/// V(r) = (4 pi / r) int_0^r s^2 f ds + 4 pi int_r^{r_max} s f ds,
/// both integrals by cumulative node sums (trapezoid rule).
RadialProfile newton_potential(const RadialProfile& f);

/// Radial part of |x|^{-1} * (g(|y|) Y_lm):
/// W_l(r) = 4 pi/(2l+1) [ r^{-(l+1)} int_0^r s^{l+2} g ds + r^l int_r^{r_max} s^{1-l} g ds ].
/// Evaluated with (s/r)^l ratios so that no power of r is formed.
RadialProfile multipole_potential(const RadialProfile& g, int ell);

/// D_p(u) = (1/2p) int |u|^p (|x|^{-1} * |u|^p), 1 < p < 5.
double coulomb_energy(const RadialProfile& u, double p);

/// Solves (-Delta_l + lambda) g = f in w = r*g with Dirichlet ends; lambda > 0.
RadialProfile apply_resolvent(const RadialProfile& f, double lambda, int ell = 0);

/// |u|^p and |u|^{p-2} u, the two nonlinear building blocks.
RadialProfile abs_pow(const RadialProfile& u, double p);
RadialProfile signed_pow(const RadialProfile& u, double exponent);

}  // namespace choquard
