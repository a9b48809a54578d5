#include "choquard/rearrangement.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "choquard/error.hpp"
#include "choquard/functionals.hpp"
#include "choquard/nonlocal.hpp"

namespace choquard {

namespace {

void require_nonnegative(const RadialProfile& u) {
  for (double v : u.values()) {
    if (v < 0.0) throw DomainError("rearrangement needs a nonnegative profile");
  }
}

}  // namespace

RadialProfile rearrange(const RadialProfile& u) {
  require_nonnegative(u);
  const std::size_t n = u.size();
  bool monotone = true;
  for (std::size_t i = 1; i < n && monotone; ++i) monotone = u[i] <= u[i - 1];
  if (monotone) return u;

  const auto& grid = u.grid();
  const auto cell = make_rule(grid, Quadrature::trapezoid).weights;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });

  // average the sorted step function of enclosed measure over each target cell
  RadialProfile out(grid);
  std::size_t k = 0;
  double left = cell[order[0]];  // measure still unused in sorted step k
  for (std::size_t j = 0; j < n; ++j) {
    double need = cell[j], acc = 0.0;
    while (need > 0.0) {
      const double take = std::min(need, left);
      acc += take * u[order[k]];
      need -= take;
      left -= take;
      if (left <= 0.0) {
        if (k + 1 == n) break;
        left = cell[order[++k]];
      }
    }
    out[j] = acc / cell[j];
  }
  // rounding can leave ulp-sized rises across equal steps
  for (std::size_t j = 1; j < n; ++j) out[j] = std::min(out[j], out[j - 1]);
  return out;
}

RearrangementReport rearrangement_inequalities(const RadialProfile& u, double p, double rel_tol) {
  require_nonnegative(u);
  if (!in_energy_range(p)) throw DomainError("p must lie in (5/3, 7/3)");
  const auto star = rearrange(u);
  RearrangementReport rep;
  rep.rel_tol = rel_tol;
  rep.kinetic = kinetic_energy(u);
  rep.kinetic_star = kinetic_energy(star);
  rep.coulomb = coulomb_energy(u, p);
  rep.coulomb_star = coulomb_energy(star, p);
  rep.kinetic_ok = rep.kinetic_star <= rep.kinetic + rel_tol * std::abs(rep.kinetic);
  rep.coulomb_ok = rep.coulomb_star >= rep.coulomb - rel_tol * std::abs(rep.coulomb);
  return rep;
}

double level_set_measure(const RadialProfile& u, double t) {
  const auto cell = make_rule(u.grid(), Quadrature::trapezoid).weights;
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > t) m += cell[i];
  }
  return m;
}

}  // namespace choquard
