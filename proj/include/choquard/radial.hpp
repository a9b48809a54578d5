#pragma once

// Radial discretization of R^3: uniform node grid, sampled profiles,
// quadrature rules, finite differences and the sector Laplacian.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace choquard {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFourPi = 4.0 * kPi;

/// Uniform radial mesh r_i = i*h, i = 1..n, with r_max = n*h. The origin is
/// not a node; the homogeneous Dirichlet ghost node sits at r_max + h.
class RadialGrid {
public:
  static constexpr std::size_t kMinNodes = 16;

  RadialGrid(std::size_t n, double r_max);

  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double r_max() const { return r_max_; }
  /// Radius of node i (0-based), i.e. (i+1)*h.
  double r(std::size_t i) const { return static_cast<double>(i + 1) * h_; }
  std::vector<double> nodes() const;

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

private:
  std::size_t n_;
  double r_max_;
  double h_;
};

/// Throws DomainError for n < 16 or non-positive / non-finite r_max.
RadialGrid make_grid(std::size_t n, double r_max);

/// Samples f(r_i) of a radial field on a grid.
class RadialProfile {
public:
  explicit RadialProfile(const RadialGrid& grid);
  RadialProfile(const RadialGrid& grid, std::vector<double> values);

  /// Samples a callable at every node.
  static RadialProfile sample(const RadialGrid& grid, const std::function<double(double)>& f);

  const RadialGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool all_finite() const;
  double max_abs() const;

  RadialProfile& operator+=(const RadialProfile& other);
  RadialProfile& operator-=(const RadialProfile& other);
  RadialProfile& operator*=(double c);

private:
  RadialGrid grid_;
  std::vector<double> values_;
};

RadialProfile operator+(RadialProfile a, const RadialProfile& b);
RadialProfile operator-(RadialProfile a, const RadialProfile& b);
RadialProfile operator*(double c, RadialProfile a);
/// Nodewise product.
RadialProfile hadamard(const RadialProfile& a, const RadialProfile& b);
/// Nodewise map.
RadialProfile map(const RadialProfile& a, const std::function<double(double)>& f);
double max_abs_difference(const RadialProfile& a, const RadialProfile& b);

enum class Quadrature {
  /// Node sum with weight h: trapezoid on [0, r_max + h] with zero end values.
  /// This is the rule the discrete energy and the sector operators are built on.
  trapezoid,
  /// Composite Simpson over [0, r_max] (3/8 closure for odd n).
  simpson,
};

/// Quadrature weights w_i with the 4*pi*r^2 volume factor folded in.
struct QuadratureRule {
  Quadrature kind;
  std::vector<double> weights;
};

QuadratureRule make_rule(const RadialGrid& grid, Quadrature kind = Quadrature::simpson);

/// 4*pi * int_0^{r_max} r^2 f(r) dr.
double integrate(const RadialProfile& f, Quadrature kind = Quadrature::simpson);
double integrate(const RadialProfile& f, const QuadratureRule& rule);
/// int f*g over R^3.
double inner(const RadialProfile& f, const RadialProfile& g, Quadrature kind = Quadrature::simpson);

/// L^q norm, q >= 1; q = infinity gives the nodal maximum.
double norm_Lq(const RadialProfile& f, double q, Quadrature kind = Quadrature::simpson);
/// ||f||_2 + ||f'||_2.
double norm_H1(const RadialProfile& f, Quadrature kind = Quadrature::simpson);

/// f'(r) by second-order centered differences, second-order one-sided at the ends.
RadialProfile derivative(const RadialProfile& f);

/// f'(r) from w = r*f with the odd extension w(0) = 0 and the Dirichlet ghost
/// w(r_max + h) = 0; consistent with the sector Laplacian's boundary closure.
RadialProfile derivative_dirichlet(const RadialProfile& f);

/// Symmetric tridiagonal matrix (diag, off) acting on w = r*f.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  std::size_t size() const { return diag.size(); }
  std::vector<double> apply(std::span<const double> x) const;
  /// Solves (this + shift*I) x = b by the Thomas algorithm.
  std::vector<double> solve(std::span<const double> b, double shift = 0.0) const;
};

/// -w'' + l(l+1) w / r^2 in w = r*f, three-point stencil, w = 0 at r = 0 and r_max + h.
Tridiagonal sector_laplacian(const RadialGrid& grid, int ell);

/// -Delta_l f evaluated through the w = r*f substitution.
RadialProfile apply_laplacian(const RadialProfile& f, int ell = 0);

/// w_i = r_i * f_i and back.
std::vector<double> to_w(const RadialProfile& f);
RadialProfile from_w(const RadialGrid& grid, std::span<const double> w);

/// Four-point cubic interpolation of an even radial profile, extended by zero
/// beyond r_max + h. Used for grid transfer and profile dilation.
double interpolate(const RadialProfile& f, double r);
RadialProfile resample(const RadialProfile& f, const RadialGrid& target);
/// The mass-preserving dilation t^{3/2} f(t r) sampled on the same grid.
RadialProfile dilate(const RadialProfile& f, double t);

/// CSV with header "r,value", 17 significant digits.
void write_profile_csv(std::ostream& os, const RadialProfile& f);
void write_profile_csv(const std::string& path, const RadialProfile& f);
RadialProfile read_profile_csv(std::istream& is);
RadialProfile read_profile_csv(const std::string& path);

}  // namespace choquard
