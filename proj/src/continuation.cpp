#include "choquard/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "format.hpp"

namespace choquard {

SweepError::SweepError(const std::string& what, std::vector<SweepRecord> partial_records, double p)
    : NumericalError(what), partial(std::move(partial_records)), failed_p(p) {}

SweepRecord::SweepRecord(GroundState gs) : p(gs.p), lambda(gs.lambda), m(gs.energy.total), state(std::move(gs)) {}

bool SweepRecord::passes(const SweepTolerances& tol, bool spectra, bool multistart) const {
  bool ok = lambda > 0.0 && m < 0.0 && pohozaev_err <= tol.pohozaev && decay_r2 >= tol.decay_r2 && power_bound_ok &&
            v_bound_ok;
  if (spectra) {
    ok = ok && nondegenerate && std::abs(kernel_mode) <= tol.kernel_mode && cosine >= tol.cosine &&
         lminus_residual <= tol.lminus && lminus_positive_kernel;
  }
  if (multistart) ok = ok && unique;
  return ok;
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHOQUARD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs job(i) for i in [0, n) on up to `workers` threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, std::size_t workers, F&& job) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void diagnose(SweepRecord& rec, const GroundState& anchor, double mass, const SweepConfig& cfg) {
  const auto& gs = rec.state;
  rec.h1_dist = h1_distance(gs.q, anchor.q);
  rec.pohozaev_err = pohozaev_report(gs).max_rel_error();
  try {
    const auto fit = decay_fit(gs);
    rec.gamma = fit.gamma;
    rec.decay_r2 = fit.r2;
    rec.power_bound_ok = fit.power_bound_ok;
    rec.v_bound_ok = fit.c0_v_bound_ok;
  } catch (const DomainError&) {
    rec.gamma = std::nan("");
  }
  if (cfg.spectra) {
    const auto nd = nondegeneracy_report(gs, cfg.spectral);
    rec.nondegenerate = nd.verdict;
    for (int l = 0; l < 3; ++l) rec.kernel_counts[l] = nd.lplus[l].kernel_count;
    rec.kernel_mode = nd.lplus[1].eigenvalues.front() / gs.lambda;
    rec.cosine = nd.lplus[1].cosine_to_qprime.value_or(0.0);
    rec.morse_index = nd.morse_index;
    rec.lminus_residual = nd.lminus_residual;
    rec.lminus_positive_kernel = nd.lminus_positive_kernel;
  }
  if (cfg.n_starts > 0) {
    const auto u = uniqueness_probe(rec.p, mass, cfg.n_starts, cfg.solver, cfg.tol.unique_rel);
    rec.spread = u.spread;
    rec.unique = u.unique;
  }
}

}  // namespace

void validate_sweep(double p_from, double p_to, int steps) {
  validate_exponent(p_from);
  if (!(p_to <= kSweepMaxP)) {
    throw DomainError("p_to must stay below 7/3 - " + format_double(kSweepMargin) + " = " + format_double(kSweepMaxP));
  }
  if (steps == 1) {
    if (p_from != p_to) throw DomainError("a single step needs p_from == p_to");
    return;
  }
  if (steps < 2) throw DomainError("steps must be at least 2");
  if (!(p_from < p_to)) throw DomainError("p_from must be below p_to");
}

std::vector<SweepRecord> sweep(double p_from, double p_to, int steps, double mass, const SweepConfig& cfg) {
  validate_sweep(p_from, p_to, steps);
  std::vector<double> ps;
  for (int i = 0; i < steps; ++i) {
    ps.push_back(steps == 1 ? p_from : p_from + (p_to - p_from) * double(i) / double(steps - 1));
  }
  ps.back() = p_to;
  return sweep_points(ps, mass, cfg);
}

std::vector<SweepRecord> sweep_points(const std::vector<double>& ps, double mass, const SweepConfig& cfg) {
  if (ps.empty()) throw DomainError("no sweep points");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    validate_exponent(ps[i]);
    if (ps[i] > kSweepMaxP) throw DomainError("sweep point beyond 7/3 - margin");
    if (i > 0 && !(ps[i] > ps[i - 1])) throw DomainError("sweep points must increase");
  }
  validate_mass(mass);

  // warm-started branch, sequential by construction
  std::vector<SweepRecord> records;
  std::optional<GroundState> anchor;
  if (ps.front() != 2.0) anchor = solve(2.0, mass, cfg.solver);
  for (double p : ps) {
    try {
      auto gs = records.empty() ? solve(p, mass, cfg.solver)
                                : solve(resample(records.back().state.q, solver_grid(p, mass, cfg.solver)), p,
                                        mass, cfg.solver);
      records.emplace_back(std::move(gs));
    } catch (const Error& e) {
      // diagnose what was solved so the partial list is complete
      if (!records.empty()) {
        const GroundState& a = anchor ? *anchor : records.front().state;
        parallel_for(records.size(), worker_count(cfg.threads),
                     [&](std::size_t i) { diagnose(records[i], a, mass, cfg); });
      }
      throw SweepError("solve failed at p = " + format_double(p) + ": " + e.what(), std::move(records), p);
    }
  }
  const GroundState a = anchor ? *anchor : records.front().state;
  parallel_for(records.size(), worker_count(cfg.threads), [&](std::size_t i) { diagnose(records[i], a, mass, cfg); });
  return records;
}

double h1_distance(const RadialProfile& a, const RadialProfile& b) {
  if (a.grid() == b.grid()) {
    const auto d = a - b;
    return std::sqrt(2.0 * kinetic_energy(d) + mass_squared(d));
  }
  // own-grid norms; cross terms on the finer grid, where the coarser profile is interpolated
  const bool a_fine = a.grid().spacing() <= b.grid().spacing();
  const RadialProfile& f = a_fine ? a : b;
  const auto c = resample(a_fine ? b : a, f.grid());
  const double cross_grad = 0.5 * (kinetic_energy(f + c) - kinetic_energy(f - c));
  const double cross = inner(f, c, Quadrature::trapezoid);
  const double d2 = 2.0 * kinetic_energy(a) + mass_squared(a) + 2.0 * kinetic_energy(b) + mass_squared(b) -
                    2.0 * (cross_grad + cross);
  return std::sqrt(std::max(d2, 0.0));
}

ConvergenceStudy convergence_study(const std::vector<SweepRecord>& records, std::size_t tail) {
  ConvergenceStudy st;
  std::vector<const SweepRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->p < y->p; });
  std::vector<const SweepRecord*> above;
  for (auto* r : sorted) {
    st.p.push_back(r->p);
    st.distances.push_back(r->h1_dist);
    if (r->p == 2.0) {
      st.has_anchor = true;
      st.anchor_distance = r->h1_dist;
    } else {
      above.push_back(r);
    }
  }
  if (above.size() > tail) above.resize(tail);
  st.tail_points = above.size();
  st.monotone = !above.empty();
  for (std::size_t i = 1; i < above.size(); ++i) st.monotone = st.monotone && above[i]->h1_dist > above[i - 1]->h1_dist;
  if (above.size() < 2) {
    st.fitted_order = std::nan("");
    return st;
  }
  double sx = 0.0, sy = 0.0;
  for (auto* r : above) {
    sx += std::log(r->p - 2.0);
    sy += std::log(r->h1_dist);
  }
  const double k = static_cast<double>(above.size());
  double sxx = 0.0, sxy = 0.0;
  for (auto* r : above) {
    const double dx = std::log(r->p - 2.0) - sx / k, dy = std::log(r->h1_dist) - sy / k;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  st.fitted_order = sxy / sxx;
  return st;
}

std::vector<InitialGuess> start_family(int n_starts) {
  if (n_starts < 3 || n_starts > 5) throw DomainError("uniqueness probe takes 3 to 5 starts");
  const std::vector<InitialGuess> all{InitialGuess::gaussian, InitialGuess::gaussian_narrow,
                                      InitialGuess::gaussian_wide, InitialGuess::plateau, InitialGuess::two_bump};
  return {all.begin(), all.begin() + n_starts};
}

UniquenessReport uniqueness_probe(double p, double mass, int n_starts, const SolverConfig& cfg, double unique_rel) {
  UniquenessReport rep;
  rep.p = p;
  rep.starts = start_family(n_starts);
  std::vector<GroundState> states;
  for (auto g : rep.starts) {
    SolverConfig c = cfg;
    c.guess = g;
    try {
      states.push_back(solve(p, mass, c));
      rep.lambdas.push_back(states.back().lambda);
    } catch (const NumericalError& e) {
      rep.failures.push_back(to_string(g) + ": " + e.what());
    }
  }
  if (states.size() < 2) {
    rep.spread = rep.lambda_spread = std::nan("");
    return rep;
  }
  double qmax = 0.0;
  for (const auto& s : states) qmax = std::max(qmax, s.q.max_abs());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      rep.spread = std::max(rep.spread, max_abs_difference(states[i].q, states[j].q) / qmax);
      rep.lambda_spread =
          std::max(rep.lambda_spread, std::abs(states[i].lambda - states[j].lambda) / states[j].lambda);
    }
  }
  rep.unique = rep.spread <= unique_rel;
  return rep;
}

KernelTracking kernel_tracking(const std::vector<SweepRecord>& records) {
  KernelTracking kt;
  kt.constant = true;
  for (const auto& r : records) {
    kt.p.push_back(r.p);
    kt.counts.push_back(r.kernel_counts);
    kt.constant = kt.constant && r.kernel_counts == std::array<int, 3>{0, 1, 0};
  }
  return kt;
}

std::optional<double> largest_passing_p(const std::vector<SweepRecord>& records, const SweepConfig& cfg) {
  std::optional<double> best;
  for (const auto& r : records) {
    if (r.passes(cfg.tol, cfg.spectra, cfg.n_starts > 0) && (!best || r.p > *best)) best = r.p;
  }
  return best;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "p,lambda,m,h1_dist,pohozaev_err,nondegenerate,spread,gamma\n";
  for (const auto& r : records) {
    os << format_double(r.p) << ',' << format_double(r.lambda) << ',' << format_double(r.m) << ','
       << format_double(r.h1_dist) << ',' << format_double(r.pohozaev_err) << ',' << (r.nondegenerate ? 1 : 0) << ','
       << format_double(r.spread) << ',' << format_double(r.gamma) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_sweep_csv(os, records);
  if (!os) throw FormatError("write failed: " + path);
}

}  // namespace choquard
