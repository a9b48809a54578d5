#include "choquard/nonlocal.hpp"

#include <cmath>

#include "choquard/error.hpp"

namespace choquard {

RadialProfile newton_potential(const RadialProfile& f) {
  const auto& g = f.grid();
  const std::size_t n = f.size();
  const double h = g.spacing();
  RadialProfile v(g);
  // inner charge, accumulated outward
  double inner_sum = 0.0;
  std::vector<double> inner(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.r(i);
    inner_sum += h * r * r * f[i];
    inner[i] = inner_sum;
  }
  // outer shells, accumulated inward
  double outer_sum = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double r = g.r(i);
    v[i] = kFourPi * (inner[i] / r + outer_sum);
    outer_sum += h * r * f[i];
  }
  return v;
}

RadialProfile multipole_potential(const RadialProfile& gfun, int ell) {
  if (ell < 0) throw DomainError("multipole order must be nonnegative");
  const auto& g = gfun.grid();
  const std::size_t n = gfun.size();
  const double h = g.spacing();
  const double l = static_cast<double>(ell);
  std::vector<double> a(n), b(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.r(i);
    if (i > 0) acc *= std::pow(g.r(i - 1) / r, l + 1.0);
    acc += h * r * gfun[i];
    a[i] = acc;
  }
  acc = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double r_next = g.r(i + 1);
    acc = std::pow(g.r(i) / r_next, l) * (acc + h * r_next * gfun[i + 1]);
    b[i] = acc;
  }
  RadialProfile w(g);
  const double c = kFourPi / (2.0 * l + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = c * (a[i] + b[i]);
    if (!std::isfinite(w[i])) throw NumericalError("multipole potential is not finite");
  }
  return w;
}

RadialProfile abs_pow(const RadialProfile& u, double p) {
  return map(u, [p](double x) { return std::pow(std::abs(x), p); });
}

RadialProfile signed_pow(const RadialProfile& u, double exponent) {
  return map(u, [exponent](double x) {
    const double m = std::pow(std::abs(x), exponent);
    return x < 0.0 ? -m : m;
  });
}

double coulomb_energy(const RadialProfile& u, double p) {
  if (!(p > 1.0 && p < 5.0)) throw DomainError("Coulomb energy needs 1 < p < 5");
  const auto rho = abs_pow(u, p);
  const auto v = newton_potential(rho);
  return integrate(hadamard(rho, v), Quadrature::trapezoid) / (2.0 * p);
}

RadialProfile apply_resolvent(const RadialProfile& f, double lambda, int ell) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("resolvent needs lambda > 0");
  }
  const auto t = sector_laplacian(f.grid(), ell);
  return from_w(f.grid(), t.solve(to_w(f), lambda));
}

}  // namespace choquard
