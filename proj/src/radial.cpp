#include "choquard/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "choquard/error.hpp"
#include "format.hpp"

namespace choquard {

RadialGrid::RadialGrid(std::size_t n, double r_max) : n_(n), r_max_(r_max), h_(r_max / static_cast<double>(n)) {
  if (n < kMinNodes) {
    throw DomainError("radial grid needs at least 16 nodes, got " + std::to_string(n));
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw DomainError("radial grid needs a positive finite r_max");
  }
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = r(i);
  return out;
}

RadialGrid make_grid(std::size_t n, double r_max) { return RadialGrid(n, r_max); }

// ---------------------------------------------------------------------------

RadialProfile::RadialProfile(const RadialGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

RadialProfile::RadialProfile(const RadialGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("profile length " + std::to_string(values_.size()) + " does not match grid size " +
                      std::to_string(grid_.size()));
  }
  if (!all_finite()) throw DomainError("profile values must be finite");
}

RadialProfile RadialProfile::sample(const RadialGrid& grid, const std::function<double(double)>& f) {
  RadialProfile out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.r(i));
  if (!out.all_finite()) throw DomainError("sampled profile is not finite");
  return out;
}

bool RadialProfile::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

static void require_same_grid(const RadialProfile& a, const RadialProfile& b) {
  if (!(a.grid() == b.grid())) throw DomainError("profiles live on different grids");
}

RadialProfile& RadialProfile::operator+=(const RadialProfile& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RadialProfile& RadialProfile::operator-=(const RadialProfile& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RadialProfile& RadialProfile::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

RadialProfile operator+(RadialProfile a, const RadialProfile& b) { return a += b; }
RadialProfile operator-(RadialProfile a, const RadialProfile& b) { return a -= b; }
RadialProfile operator*(double c, RadialProfile a) { return a *= c; }

RadialProfile hadamard(const RadialProfile& a, const RadialProfile& b) {
  require_same_grid(a, b);
  RadialProfile out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RadialProfile map(const RadialProfile& a, const std::function<double(double)>& f) {
  RadialProfile out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

double max_abs_difference(const RadialProfile& a, const RadialProfile& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------

QuadratureRule make_rule(const RadialGrid& grid, Quadrature kind) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  std::vector<double> line(n, 0.0);  // 1-D weights on nodes 1..n (origin carries r^2 = 0)
  if (kind == Quadrature::trapezoid) {
    std::fill(line.begin(), line.end(), h);
  } else {
    // Simpson on intervals [0, m*h] with m even, 3/8 rule on the remaining three if n is odd.
    const std::size_t m = (n % 2 == 0) ? n : n - 3;
    for (std::size_t k = 1; k <= m; ++k) {
      double w = (k == m) ? 1.0 : ((k % 2 == 1) ? 4.0 : 2.0);
      line[k - 1] += w * h / 3.0;
    }
    if (m != n) {
      const double c = 3.0 * h / 8.0;
      line[m - 1] += c;
      line[m] += 3.0 * c;
      line[m + 1] += 3.0 * c;
      line[m + 2] += c;
    }
  }
  QuadratureRule rule{kind, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i);
    rule.weights[i] = kFourPi * r * r * line[i];
  }
  return rule;
}

double integrate(const RadialProfile& f, const QuadratureRule& rule) {
  if (rule.weights.size() != f.size()) throw DomainError("quadrature rule does not match profile");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += rule.weights[i] * f[i];
  return s;
}

double integrate(const RadialProfile& f, Quadrature kind) { return integrate(f, make_rule(f.grid(), kind)); }

double inner(const RadialProfile& f, const RadialProfile& g, Quadrature kind) {
  return integrate(hadamard(f, g), kind);
}

double norm_Lq(const RadialProfile& f, double q, Quadrature kind) {
  if (std::isinf(q) && q > 0) return f.max_abs();
  if (!(q >= 1.0)) throw DomainError("L^q norm needs q >= 1");
  const auto mod = map(f, [q](double v) { return std::pow(std::abs(v), q); });
  const double s = integrate(mod, kind);
  return s <= 0.0 ? 0.0 : std::pow(s, 1.0 / q);
}

double norm_H1(const RadialProfile& f, Quadrature kind) {
  return norm_Lq(f, 2.0, kind) + norm_Lq(derivative(f), 2.0, kind);
}

RadialProfile derivative(const RadialProfile& f) {
  const std::size_t n = f.size();
  const double h = f.grid().spacing();
  RadialProfile d(f.grid());
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

RadialProfile derivative_dirichlet(const RadialProfile& f) {
  const auto& g = f.grid();
  const std::size_t n = f.size();
  const double h = g.spacing();
  const auto w = to_w(f);
  RadialProfile d(g);
  for (std::size_t i = 0; i < n; ++i) {
    const double wm = (i == 0) ? 0.0 : w[i - 1];
    const double wp = (i + 1 == n) ? 0.0 : w[i + 1];
    const double r = g.r(i);
    const double dw = (wp - wm) / (2.0 * h);
    d[i] = (dw - w[i] / r) / r;
  }
  return d;
}

// ---------------------------------------------------------------------------

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = diag.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> Tridiagonal::solve(std::span<const double> b, double shift) const {
  const std::size_t n = diag.size();
  std::vector<double> c(n), x(b.begin(), b.end());
  double denom = diag[0] + shift;
  if (denom == 0.0) throw NumericalError("singular tridiagonal system");
  c[0] = (n > 1) ? off[0] / denom : 0.0;
  x[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] + shift - off[i - 1] * c[i - 1];
    if (denom == 0.0) throw NumericalError("singular tridiagonal system");
    c[i] = (i + 1 < n) ? off[i] / denom : 0.0;
    x[i] = (x[i] - off[i - 1] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

Tridiagonal sector_laplacian(const RadialGrid& grid, int ell) {
  if (ell < 0) throw DomainError("sector index must be nonnegative");
  const std::size_t n = grid.size();
  const double h2 = grid.spacing() * grid.spacing();
  const double centrifugal = static_cast<double>(ell) * static_cast<double>(ell + 1);
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -1.0 / h2);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i);
    t.diag[i] = 2.0 / h2 + centrifugal / (r * r);
  }
  return t;
}

std::vector<double> to_w(const RadialProfile& f) {
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = f.grid().r(i) * f[i];
  return w;
}

RadialProfile from_w(const RadialGrid& grid, std::span<const double> w) {
  RadialProfile f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = w[i] / grid.r(i);
  return f;
}

RadialProfile apply_laplacian(const RadialProfile& f, int ell) {
  const auto t = sector_laplacian(f.grid(), ell);
  return from_w(f.grid(), t.apply(to_w(f)));
}

// ---------------------------------------------------------------------------

namespace {

// Sample at integer position k (node k sits at r = k*h); k = 0 is the origin,
// negative k reflects evenly, k > n is the zero extension.
double extended_sample(const RadialProfile& f, long k) {
  const long n = static_cast<long>(f.size());
  if (k < 0) k = -k;
  if (k == 0) {
    // even fit a + b r^2 + c r^4 through the first three nodes
    return (15.0 * f[0] - 6.0 * f[1] + f[2]) / 10.0;
  }
  if (k > n) return 0.0;
  return f[static_cast<std::size_t>(k - 1)];
}

}  // namespace

double interpolate(const RadialProfile& f, double r) {
  const double h = f.grid().spacing();
  const double x = std::abs(r) / h;
  const double n = static_cast<double>(f.size());
  if (x >= n + 1.0) return 0.0;
  const long k = static_cast<long>(std::floor(x));
  const double t = x - static_cast<double>(k);
  const double y0 = extended_sample(f, k - 1);
  const double y1 = extended_sample(f, k);
  const double y2 = extended_sample(f, k + 1);
  const double y3 = extended_sample(f, k + 2);
  // cubic Lagrange through nodes -1, 0, 1, 2
  const double l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3;
}

RadialProfile resample(const RadialProfile& f, const RadialGrid& target) {
  if (target == f.grid()) return f;
  return RadialProfile::sample(target, [&f](double r) { return interpolate(f, r); });
}

RadialProfile dilate(const RadialProfile& f, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("dilation factor must be positive");
  const double amp = std::pow(t, 1.5);
  return RadialProfile::sample(f.grid(), [&](double r) { return amp * interpolate(f, t * r); });
}

// ---------------------------------------------------------------------------

void write_profile_csv(std::ostream& os, const RadialProfile& f) {
  os << "r,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_double(f.grid().r(i)) << ',' << format_double(f[i]) << '\n';
  }
}

void write_profile_csv(const std::string& path, const RadialProfile& f) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_profile_csv(os, f);
}

RadialProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty profile CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,value") throw FormatError("profile CSV must start with header 'r,value'");
  std::vector<double> rs, vs;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("malformed CSV row: " + line);
    try {
      rs.push_back(std::stod(line.substr(0, comma)));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw FormatError("malformed CSV row: " + line);
    }
  }
  if (rs.size() < RadialGrid::kMinNodes) throw FormatError("profile CSV has too few rows");
  const double h = rs.front();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double expect = static_cast<double>(i + 1) * h;
    if (std::abs(rs[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
      throw FormatError("profile CSV nodes are not the uniform grid r_i = i*h");
    }
  }
  const double r_max = rs.back();
  RadialGrid grid(rs.size(), r_max);
  RadialProfile f(grid, std::move(vs));
  if (!f.all_finite()) throw FormatError("profile CSV contains non-finite values");
  return f;
}

RadialProfile read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  return read_profile_csv(is);
}

}  // namespace choquard
