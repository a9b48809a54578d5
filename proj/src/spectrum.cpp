#include "choquard/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "choquard/error.hpp"
#include "choquard/nonlocal.hpp"

namespace choquard {

std::string to_string(OperatorKind k) { return k == OperatorKind::lplus ? "Lplus" : "Lminus"; }

void validate_sector(int ell) {
  if (ell < 0 || ell > kMaxSector) throw DomainError("sector out of verified scope");
}

GroundState spectral_state(const GroundState& gs, std::size_t n) {
  if (gs.grid().size() == n) return gs;
  SolverConfig cfg;
  cfg.grid_n = n;
  cfg.r_max = gs.grid().r_max();
  const RadialGrid grid(n, cfg.r_max);
  return solve_fixpoint(resample(gs.q, grid), gs.p, gs.mass, cfg);
}

namespace {

struct Potentials {
  RadialProfile local;  // coefficient of the multiplication part
  RadialProfile qp1;    // Q^{p-1}
};

Potentials potentials(const GroundState& gs, OperatorKind kind) {
  const double p = gs.p;
  const auto v = newton_potential(abs_pow(gs.q, p));
  auto qp2 = map(gs.q, [p](double x) { return std::pow(std::abs(x), p - 2.0); });
  auto local = hadamard(v, qp2);
  if (kind == OperatorKind::lplus) local *= (p - 1.0);
  return {std::move(local), map(gs.q, [p](double x) { return std::pow(std::abs(x), p - 1.0); })};
}

Eigen::MatrixXd tridiagonal_dense(const Tridiagonal& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = t.diag[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off[i];
  }
  return m;
}

Eigen::VectorXd w_vector(const RadialProfile& f) {
  const auto w = to_w(f);
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

RadialProfile profile_from_w(const RadialGrid& grid, const Eigen::VectorXd& w) {
  return from_w(grid, std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
}

double sup_interior(const RadialProfile& f, double boundary_fraction) {
  const auto m = static_cast<std::size_t>(static_cast<double>(f.size()) * (1.0 - boundary_fraction));
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s = std::max(s, std::abs(f[i]));
  return s;
}

}  // namespace

SectorOperator assemble(const GroundState& gs, int ell, OperatorKind kind) {
  validate_sector(ell);
  const auto& grid = gs.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double h = grid.spacing();
  const auto pot = potentials(gs, kind);

  Eigen::MatrixXd m = tridiagonal_dense(sector_laplacian(grid, ell));
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) += gs.lambda - pot.local[i];

  if (kind == OperatorKind::lplus) {
    // p * 4 pi h/(2l+1) * a_i a_j r_<^l / r_>^{l+1}, a = r Q^{p-1}
    const double c = gs.p * kFourPi * h / (2.0 * ell + 1.0);
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = grid.r(i) * pot.qp1[i];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ri = grid.r(i);
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double ratio = double(j + 1) / double(i + 1);
        double k = 1.0 / ri;
        for (int e = 0; e < ell; ++e) k *= ratio;
        const double v = c * a(i) * a(j) * k;
        m(i, j) -= v;
        if (j != i) m(j, i) -= v;
      }
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return {ell, kind, sym, gs.lambda, gs.p, gs.q};
}

RadialProfile apply_operator(const GroundState& gs, const RadialProfile& xi, int ell, OperatorKind kind) {
  validate_sector(ell);
  const auto pot = potentials(gs, kind);
  auto out = apply_laplacian(xi, ell);
  out += gs.lambda * xi;
  out -= hadamard(pot.local, xi);
  if (kind == OperatorKind::lplus) {
    out -= gs.p * hadamard(pot.qp1, multipole_potential(hadamard(pot.qp1, xi), ell));
  }
  return out;
}

double cosine(const RadialProfile& a, const RadialProfile& b) {
  const double ab = inner(a, b, Quadrature::trapezoid);
  const double aa = inner(a, a, Quadrature::trapezoid);
  const double bb = inner(b, b, Quadrature::trapezoid);
  return std::abs(ab) / std::sqrt(aa * bb);
}

SpectrumReport low_spectrum(const SectorOperator& op, int k, double kernel_threshold) {
  const auto n = op.matrix.rows();
  if (k < 1 || k > n) throw DomainError("requested eigenvalue count out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve did not converge");

  const auto& grid = op.grid();
  const double scale = 1.0 / std::sqrt(kFourPi * grid.spacing());
  SpectrumReport rep;
  rep.ell = op.ell;
  rep.kind = op.kind;
  rep.p = op.p;
  rep.lambda = op.lambda;
  rep.kernel_threshold = kernel_threshold;
  rep.gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    const double mu = es.eigenvalues()(j);
    rep.eigenvalues.push_back(mu);
    Eigen::VectorXd w = es.eigenvectors().col(j);
    Eigen::Index imax = 0;
    w.cwiseAbs().maxCoeff(&imax);
    if (w(imax) < 0.0) w = -w;
    rep.eigenvectors.push_back(profile_from_w(grid, scale * w));
    if (std::abs(mu) <= kernel_threshold) {
      ++rep.kernel_count;
    } else {
      rep.gap = std::min(rep.gap, std::abs(mu));
    }
  }
  if (op.ell == 1 && op.kind == OperatorKind::lplus) {
    rep.cosine_to_qprime = cosine(rep.eigenvectors.front(), derivative(op.q));
  }
  return rep;
}

double lowest_eigenvalue(const SectorOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve did not converge");
  return es.eigenvalues()(0);
}

NondegeneracyReport nondegeneracy_report(const GroundState& gs, const SpectralConfig& cfg) {
  const auto s = spectral_state(gs, cfg.grid_n);
  NondegeneracyReport rep;
  rep.grid_n = cfg.grid_n;
  std::array<SectorOperator, 3> ops{assemble(s, 0, OperatorKind::lplus), assemble(s, 1, OperatorKind::lplus),
                                    assemble(s, 2, OperatorKind::lplus)};
  const auto lm = assemble(s, 0, OperatorKind::lminus);

  double thr = cfg.kernel_rel * s.lambda;
  if (cfg.refine_threshold) {
    const double mu_n = lowest_eigenvalue(ops[1]);
    const double mu_2n = lowest_eigenvalue(assemble(spectral_state(gs, 2 * cfg.grid_n), 1, OperatorKind::lplus));
    rep.refinement_shift = std::abs(mu_n - mu_2n);
    thr = std::max(thr, 10.0 * rep.refinement_shift);
  }
  rep.kernel_threshold = thr;
  for (int l = 0; l <= kMaxSector; ++l) rep.lplus[l] = low_spectrum(ops[l], cfg.k, thr);
  rep.lminus = low_spectrum(lm, cfg.k, thr);

  for (double mu : rep.lplus[0].eigenvalues) {
    if (mu < -thr) ++rep.morse_index;
  }
  // L- Q through the assembled matrix
  const Eigen::VectorXd lq = lm.matrix * w_vector(s.q);
  const auto lq_profile = profile_from_w(s.grid(), lq);
  rep.lminus_residual = lq_profile.max_abs() / (s.lambda * s.q.max_abs());

  const auto& ground = rep.lminus.eigenvectors.front();
  const auto m = static_cast<std::size_t>(static_cast<double>(ground.size()) * (1.0 - cfg.boundary_fraction));
  bool positive = std::abs(rep.lminus.eigenvalues.front()) <= thr;
  for (std::size_t i = 0; i < m && positive; ++i) positive = ground[i] > 0.0;
  rep.lminus_positive_kernel = positive;

  rep.verdict = rep.lplus[0].kernel_count == 0 && rep.lplus[1].kernel_count == 1 && rep.lplus[2].kernel_count == 0;
  return rep;
}

std::pair<double, double> coercivity_quotient_parts(const SectorOperator& op, const Eigen::VectorXd& w) {
  const double wt = kFourPi * op.grid().spacing();
  Eigen::MatrixXd b = tridiagonal_dense(sector_laplacian(op.grid(), op.ell));
  b.diagonal().array() += op.lambda;
  return {wt * w.dot(op.matrix * w), wt * w.dot(b * w)};
}

CoercivityReport coercivity_report(const GroundState& gs, const SpectralConfig& cfg) {
  const auto s = spectral_state(gs, cfg.grid_n);
  CoercivityReport rep;
  rep.constant = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= kMaxSector; ++l) {
    auto op = assemble(s, l, OperatorKind::lplus);
    const auto n = op.matrix.rows();
    Eigen::MatrixXd b = tridiagonal_dense(sector_laplacian(s.grid(), l));
    b.diagonal().array() += s.lambda;

    // l = 0: negative direction; l = 1: translation mode
    Eigen::MatrixXd z(n, l <= 1 ? 1 : 0);
    if (l <= 1) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
      if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve did not converge");
      z.col(0) = es.eigenvectors().col(0);
    }
    Eigen::MatrixXd basis;
    if (z.cols() > 0) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
      const Eigen::MatrixXd full = qr.householderQ();
      basis = full.rightCols(n - z.cols());
    } else {
      basis = Eigen::MatrixXd::Identity(n, n);
    }
    const Eigen::MatrixXd a_red = basis.transpose() * op.matrix * basis;
    const Eigen::MatrixXd b_red = basis.transpose() * b * basis;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(0.5 * (a_red + a_red.transpose()),
                                                                   0.5 * (b_red + b_red.transpose()),
                                                                   Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw NumericalError("generalized eigensolve did not converge");
    const double c = ges.eigenvalues()(0);
    rep.sector_constants[l] = c;
    rep.constant = std::min(rep.constant, c);
    rep.deflation[l] = z;
    rep.operators.push_back(std::move(op));
    if (!(c > 0.0)) {
      throw NumericalError("deflated sector l=" + std::to_string(l) + " is not positive (c = " + std::to_string(c) + ")");
    }
  }
  return rep;
}

double coercivity_constant(const GroundState& gs, const SpectralConfig& cfg) {
  return coercivity_report(gs, cfg).constant;
}

double scaling_generator_residual(const GroundState& gs, double boundary_fraction) {
  const auto& grid = gs.grid();
  const double alpha = 2.0 / (gs.p - 1.0);
  // R = alpha Q + r Q' = (alpha - 1) Q + w', w = r Q with ghost zeros
  const auto w = to_w(gs.q);
  const std::size_t n = w.size();
  const double h = grid.spacing();
  RadialProfile r(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const double wl = i == 0 ? 0.0 : w[i - 1];
    const double wr = i + 1 == n ? 0.0 : w[i + 1];
    r[i] = (alpha - 1.0) * gs.q[i] + (wr - wl) / (2.0 * h);
  }
  auto res = apply_operator(gs, r, 0, OperatorKind::lplus);
  res += 2.0 * gs.lambda * gs.q;
  return sup_interior(res, boundary_fraction) / (2.0 * gs.lambda * gs.q.max_abs());
}

IftReport ift_operators_check(const GroundState& gs, const SpectralConfig& cfg, unsigned seed) {
  IftReport rep;
  rep.scaling_residual = scaling_generator_residual(gs, cfg.boundary_fraction);

  const auto s = spectral_state(gs, cfg.ift_grid_n);
  const auto& grid = s.grid();
  const double lam = s.lambda;
  rep.grid_n = grid.size();
  const auto pot = potentials(s, OperatorKind::lplus);

  // K xi = -(-Delta+lambda)^{-1} ((p-1) V Q^{p-2} xi + p W_0[Q^{p-1} xi] Q^{p-1})
  auto apply_k = [&](const RadialProfile& xi) {
    auto f = hadamard(pot.local, xi);
    f += s.p * hadamard(pot.qp1, newton_potential(hadamard(pot.qp1, xi)));
    auto out = apply_resolvent(f, lam);
    out *= -1.0;
    return out;
  };

  // (a) Id + K = (-Delta+lambda)^{-1} L+
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double len = grid.r_max() / 16.0;
  for (int t = 0; t < 20; ++t) {
    const double a1 = U(rng), a2 = U(rng) - 0.5, w1 = len * (0.3 + U(rng)), w2 = len * (0.3 + 2.0 * U(rng)),
                 c2 = len * 3.0 * U(rng);
    const auto xi = RadialProfile::sample(grid, [&](double r) {
      return a1 * std::exp(-(r / w1) * (r / w1)) + a2 * std::exp(-((r - c2) / w2) * ((r - c2) / w2));
    });
    const auto lhs = xi + apply_k(xi);
    const auto rhs = apply_resolvent(apply_operator(s, xi, 0, OperatorKind::lplus), lam);
    rep.factorization_residual = std::max(rep.factorization_residual, max_abs_difference(lhs, rhs) / lhs.max_abs());
  }

  // (b) W = (-Delta+lambda)^{-2} V Q^{p-1}
  const auto vq = hadamard(newton_potential(abs_pow(s.q, s.p)), pot.qp1);
  const auto wfun = apply_resolvent(apply_resolvent(vq, lam), lam);
  auto back = apply_laplacian(wfun);
  back += lam * wfun;
  rep.w2_residual = max_abs_difference(back, s.q) / s.q.max_abs();

  // (c) dense Id + K in w-coordinates, column by column
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    RadialProfile e(grid);
    e[static_cast<std::size_t>(j)] = 1.0 / grid.r(static_cast<std::size_t>(j));
    a.col(j) += w_vector(apply_k(e));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw NumericalError("Id + K is numerically singular");
  const Eigen::VectorXd x = lu.solve(w_vector(wfun));
  rep.pairing = kFourPi * grid.spacing() * w_vector(s.q).dot(x);
  const double alpha = 2.0 / (s.p - 1.0);
  rep.pairing_expected = -(alpha - 1.5) * mass_squared(s.q) / (2.0 * lam);
  rep.pairing_rel_error = std::abs(rep.pairing - rep.pairing_expected) / std::abs(rep.pairing_expected);
  return rep;
}

}  // namespace choquard
