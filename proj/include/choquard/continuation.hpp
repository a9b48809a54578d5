#pragma once

// Continuation of the ground-state branch p -> (Q_p, lambda_p) upward from the
// Hartree point p = 2, with per-point diagnostics.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "choquard/error.hpp"
#include "choquard/ground_state.hpp"
#include "choquard/spectrum.hpp"

namespace choquard {

/// Sweeps stop this far below the mass-critical exponent 7/3.
inline constexpr double kSweepMargin = 0.01;
inline constexpr double kSweepMaxP = 7.0 / 3.0 - kSweepMargin;

struct SweepTolerances {
  double pohozaev = 1e-5;
  double kernel_mode = 1e-3;  ///< |mu_1(l=1)| / lambda
  double cosine = 0.999;
  double decay_r2 = 0.999;
  double unique_rel = 1e-4;   ///< multistart spread / ||Q||_inf
  double lminus = 1e-6;
};

struct SweepConfig {
  SolverConfig solver;
  SpectralConfig spectral;
  SweepTolerances tol;
  bool spectra = true;
  /// Cold starts per point for the uniqueness probe; 0 skips it.
  int n_starts = 5;
  /// Worker count for per-point diagnostics; 0 reads CHOQUARD_THREADS, else the core count.
  std::size_t threads = 0;
};

struct SweepRecord {
  explicit SweepRecord(GroundState gs);

  double p = 0.0;
  double lambda = 0.0;
  double m = 0.0;  ///< E_p(Q_p)
  double h1_dist = 0.0;  ///< ||Q_p - Q_2||_{H^1}
  double pohozaev_err = 0.0;
  bool nondegenerate = false;
  double spread = 0.0;  ///< multistart sup spread relative to ||Q||_inf
  bool unique = false;
  double gamma = 0.0;  ///< fitted exponential decay rate
  double decay_r2 = 0.0;
  bool power_bound_ok = false;
  bool v_bound_ok = false;
  /// L+ kernel counts in sectors 0, 1, 2 (-1 when spectra are skipped).
  std::array<int, 3> kernel_counts{-1, -1, -1};
  double kernel_mode = 0.0;  ///< lowest l = 1 eigenvalue / lambda
  double cosine = 0.0;       ///< l = 1 kernel mode vs Q'
  int morse_index = -1;
  double lminus_residual = 0.0;
  bool lminus_positive_kernel = false;
  GroundState state;

  /// Every check of the record within the given tolerances.
  bool passes(const SweepTolerances& tol, bool spectra = true, bool multistart = true) const;
};

/// A solve failed mid-sweep; carries the records completed before it.
class SweepError : public NumericalError {
public:
  SweepError(const std::string& what, std::vector<SweepRecord> partial, double failed_p);
  std::vector<SweepRecord> partial;
  double failed_p;
};

/// Worker count from CHOQUARD_THREADS, falling back to the core count (at least 1).
std::size_t worker_count(std::size_t requested = 0);

/// Throws DomainError unless 2 <= p_from <= p_to <= kSweepMaxP with steps >= 2,
/// or steps == 1 with p_from == p_to.
void validate_sweep(double p_from, double p_to, int steps);

/// Evenly spaced exponents, warm-started in order.
std::vector<SweepRecord> sweep(double p_from, double p_to, int steps, double mass, const SweepConfig& cfg = {});

/// Same on an explicit increasing list of exponents.
std::vector<SweepRecord> sweep_points(const std::vector<double>& ps, double mass, const SweepConfig& cfg = {});

/// H^1 distance of profiles on different grids: each norm on its own grid, the cross
/// terms on the finer grid.
double h1_distance(const RadialProfile& a, const RadialProfile& b);

struct ConvergenceStudy {
  std::vector<double> p;
  std::vector<double> distances;
  bool has_anchor = false;
  double anchor_distance = 0.0;
  /// Strictly decreasing as p decreases to 2 over the tail points.
  bool monotone = false;
  /// Least-squares slope of log distance against log(p - 2) on the tail.
  double fitted_order = 0.0;
  std::size_t tail_points = 0;
};

/// Tail = the `tail` points closest to p = 2 (excluding the anchor).
ConvergenceStudy convergence_study(const std::vector<SweepRecord>& records, std::size_t tail = 4);

struct UniquenessReport {
  double p = 0.0;
  std::vector<InitialGuess> starts;
  std::vector<double> lambdas;
  std::vector<std::string> failures;  ///< one entry per start that did not converge
  double spread = 0.0;                ///< max pairwise sup distance / ||Q||_inf
  double lambda_spread = 0.0;         ///< max pairwise |lambda_i - lambda_j| / lambda
  bool unique = false;
};

/// Start family in order: Gaussian widths 1, 0.5, 2, plateau, two-bump. 3 <= n_starts <= 5.
std::vector<InitialGuess> start_family(int n_starts);

UniquenessReport uniqueness_probe(double p, double mass, int n_starts, const SolverConfig& cfg = {},
                                  double unique_rel = 1e-4);

struct KernelTracking {
  std::vector<double> p;
  std::vector<std::array<int, 3>> counts;
  bool constant = false;  ///< (0, 1, 0) at every record
};

KernelTracking kernel_tracking(const std::vector<SweepRecord>& records);

/// Largest p whose record passes every check, if any.
std::optional<double> largest_passing_p(const std::vector<SweepRecord>& records, const SweepConfig& cfg);

/// Header `p,lambda,m,h1_dist,pohozaev_err,nondegenerate,spread,gamma`, 17 significant digits.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records);

}  // namespace choquard
