#pragma once

// Radial symmetric-decreasing rearrangement on the node grid and the
// Polya-Szego / Riesz inequalities it satisfies.

#include "choquard/radial.hpp"

namespace choquard {

/// Nonincreasing profile equimeasurable with u under the cell measures 4 pi h r_i^2.
/// Node values are sorted descending (ties in radial order) into a step function of
/// the enclosed measure, which is averaged over each node's own cell. Returns
/// nonincreasing input unchanged, hence idempotent. Throws DomainError on negative values.
RadialProfile rearrange(const RadialProfile& u);

struct RearrangementReport {
  double kinetic = 0.0;  ///< K(u)
  double kinetic_star = 0.0;
  double coulomb = 0.0;  ///< D_p(u)
  double coulomb_star = 0.0;
  double rel_tol = 1e-6;
  bool kinetic_ok = false;  ///< K(u*) <= K(u) + tol
  bool coulomb_ok = false;  ///< D_p(u*) >= D_p(u) - tol
};

/// Throws DomainError on negative u or p outside (5/3, 7/3).
RearrangementReport rearrangement_inequalities(const RadialProfile& u, double p, double rel_tol = 1e-6);

/// Measure of {u > t} under the cell measures.
double level_set_measure(const RadialProfile& u, double t);

}  // namespace choquard
