// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff every line passes.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "choquard/cli.hpp"
#include "choquard/continuation.hpp"
#include "choquard/functionals.hpp"
#include "choquard/ground_state.hpp"
#include "choquard/rearrangement.hpp"
#include "choquard/spectrum.hpp"

using namespace choquard;
namespace fs = std::filesystem;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << title << ": " << detail << std::endl;
}

// A criterion that throws is reported as a failure with the message.
void criterion(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(id, title, pass, detail);
  } catch (const std::exception& e) {
    report(id, title, false, std::string("error: ") + e.what());
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

const GroundState& state(double p) {
  static std::map<double, GroundState> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, solve(p, 1.0, SolverConfig{})).first;
  return it->second;
}

RadialProfile random_smooth(const RadialGrid& g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double a = scale * (0.5 + U(rng)), b = U(rng), c = 2.0 * U(rng) / scale;
  return RadialProfile::sample(g, [=](double r) { return std::exp(-r / a) * (1.0 + b * std::cos(c * r)); });
}

RadialProfile random_bumps(const RadialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int bumps = 1 + int(4.0 * U(rng));
  std::vector<double> a, c, w;
  for (int k = 0; k < bumps; ++k) {
    a.push_back(0.1 + U(rng));
    c.push_back(20.0 * U(rng));
    w.push_back(0.3 + 4.0 * U(rng));
  }
  return RadialProfile::sample(g, [=](double r) {
    double s = 0.0;
    for (int k = 0; k < bumps; ++k) s += a[k] * std::exp(-((r - c[k]) / w[k]) * ((r - c[k]) / w[k]));
    return s;
  });
}

}  // namespace

int main() {
  const std::vector<double> pset{2.0, 2.05, 2.1, 2.2};

  criterion(1, "Pohozaev identities K/lambda, D/lambda", [&] {
    double worst = 0.0;
    for (double p : pset) {
      const auto r = pohozaev_report(state(p));
      worst = std::max({worst, r.k_rel_error, r.d_rel_error});
    }
    return std::pair{worst <= 1e-5, "max rel err " + sci(worst) + " (tol 1e-5) over p in {2, 2.05, 2.1, 2.2}"};
  });

  criterion(2, "multiplier law", [&] {
    double worst = 0.0;
    for (double p : pset) worst = std::max(worst, pohozaev_report(state(p)).lambda_rel_error);
    return std::pair{worst <= 1e-5, "max |lambda + 2(5-p)/(7-3p) E| / lambda " + sci(worst) + " (tol 1e-5)"};
  });

  criterion(3, "mass-scaling law", [&] {
    double worst = 0.0;
    for (double p : {2.0, 2.1}) {
      const double m1 = state(p).energy.total;
      const double m13 = solve(p, 1.3, SolverConfig{}).energy.total;
      worst = std::max(worst, rel(m13 / m1, std::pow(1.3, mass_scaling_exponent(p))));
    }
    return std::pair{worst <= 1e-4, "max rel err of m(1.3)/m(1) " + sci(worst) + " (tol 1e-4) at p in {2, 2.1}"};
  });

  criterion(4, "scaling characterization", [&] {
    double worst = 0.0;
    for (double p : pset) worst = std::max(worst, pohozaev_report(state(p)).scaling_rel_error);
    return std::pair{worst <= 1e-5, "max rel err " + sci(worst) + " (tol 1e-5)"};
  });

  criterion(5, "flow vs fixed-point cross-validation", [&] {
    double worst = 0.0;
    for (double p : {2.0, 2.1, 2.2}) {
      SolverConfig fc, pc;
      fc.method = SolveMethod::flow;
      pc.method = SolveMethod::fixpoint;
      const auto a = solve(p, 1.0, fc), b = solve(p, 1.0, pc);
      worst = std::max(worst, max_abs_difference(a.q, b.q) / b.q.max_abs());
    }
    return std::pair{worst <= 1e-5, "max sup-norm rel distance " + sci(worst) + " (tol 1e-5) at p in {2, 2.1, 2.2}"};
  });

  // One branch sweep feeds the nondegeneracy, L- and decay criteria.
  std::vector<SweepRecord> branch;
  std::string sweep_error;
  try {
    branch = sweep(2.0, 2.25, 11, 1.0, SweepConfig{});
  } catch (const std::exception& e) {
    sweep_error = e.what();
  }
  auto need_branch = [&] {
    if (branch.empty()) throw std::runtime_error("sweep 2.0..2.25 failed: " + sweep_error);
  };

  criterion(6, "nondegeneracy along the branch", [&] {
    need_branch();
    const auto tr = kernel_tracking(branch);
    double mode = 0.0, cos_min = 1.0;
    for (const auto& r : branch) {
      mode = std::max(mode, std::abs(r.kernel_mode));
      cos_min = std::min(cos_min, r.cosine);
    }
    const bool ok = tr.constant && mode <= 1e-3 && cos_min >= 0.999;
    return std::pair{ok, "kernel counts (0,1,0) at all " + std::to_string(branch.size()) +
                             " points of [2, 2.25]: " + (tr.constant ? "yes" : "no") + ", max |mu_1|/lambda " +
                             sci(mode) + " (tol 1e-3), min cosine to Q' " + sci(cos_min) + " (min 0.999)"};
  });

  criterion(7, "L- kernel", [&] {
    need_branch();
    double worst = 0.0;
    bool positive = true;
    for (const auto& r : branch) {
      worst = std::max(worst, r.lminus_residual);
      positive = positive && r.lminus_positive_kernel;
    }
    return std::pair{worst <= 1e-6 && positive, "max |L- Q| rel " + sci(worst) +
                                                    " (tol 1e-6), lowest L- mode in kernel band with positive "
                                                    "eigenvector at every point: " +
                                                    (positive ? "yes" : "no")};
  });

  criterion(8, "p = 2 anchor identities", [&] {
    const auto r = ift_operators_check(state(2.0));
    const bool ok = r.scaling_residual <= 1e-3 && r.w2_residual <= 1e-6 && r.pairing_rel_error <= 1e-4;
    return std::pair{ok, "L+(2Q + rQ') + 2 lambda Q rel " + sci(r.scaling_residual) + " (tol 1e-3), W2 equation " +
                             sci(r.w2_residual) + " (tol 1e-6), pairing " + sci(r.pairing) + " vs -|Q|^2/(4 lambda) " +
                             sci(r.pairing_expected) + " rel " + sci(r.pairing_rel_error) + " (tol 1e-4)"};
  });

  criterion(9, "compactness as p -> 2", [&] {
    need_branch();
    std::vector<SweepRecord> pick;
    for (const auto& r : branch) {
      for (double p : {2.0, 2.025, 2.05, 2.1, 2.2}) {
        if (std::abs(r.p - p) < 1e-9) pick.push_back(r);
      }
    }
    if (pick.size() != 5) throw std::runtime_error("sweep grid misses the study points");
    const auto st = convergence_study(pick, 4);
    const bool ok = st.monotone && st.fitted_order >= 0.8 && st.fitted_order <= 1.2;
    return std::pair{ok, std::string("H1 distance strictly decreasing over {2.2, 2.1, 2.05, 2.025}: ") +
                             (st.monotone ? "yes" : "no") + ", fitted order " + sci(st.fitted_order) +
                             " (range [0.8, 1.2])"};
  });

  criterion(10, "uniqueness probe", [&] {
    double worst = 0.0;
    bool ok = true;
    for (double p : {2.0, 2.1}) {
      const auto u = uniqueness_probe(p, 1.0, 5);
      worst = std::max(worst, u.spread);
      ok = ok && u.unique && u.failures.empty();
    }
    return std::pair{ok && worst <= 1e-4,
                     "5 starts at p in {2, 2.1}, max spread/|Q|_inf " + sci(worst) + " (tol 1e-4)"};
  });

  criterion(11, "decay", [&] {
    need_branch();
    double r2 = 1.0;
    bool power = true, vb = true;
    for (const auto& r : branch) {
      r2 = std::min(r2, r.decay_r2);
      power = power && r.power_bound_ok;
      vb = vb && r.v_bound_ok;
    }
    return std::pair{r2 >= 0.999 && power && vb, "min exponential-fit r^2 " + sci(r2) + " (min 0.999), Q <= C r^-4: " +
                                                     (power ? "yes" : "no") + ", V r^(3/4) bounded: " +
                                                     (vb ? "yes" : "no")};
  });

  criterion(12, "rearrangement battery", [&] {
    const auto g = make_grid(4000, 40.0);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int violations = 0;
    double norm_err = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto u = random_bumps(g, rng);
      const auto s = rearrange(u);
      for (double q : {2.0, 6.0}) {
        norm_err = std::max(norm_err, rel(norm_Lq(s, q, Quadrature::trapezoid), norm_Lq(u, q, Quadrature::trapezoid)));
      }
      const auto rep = rearrangement_inequalities(u, std::min(1.7 + 0.6 * U(rng), 2.3));
      if (!rep.kinetic_ok || !rep.coulomb_ok) ++violations;
    }
    return std::pair{violations == 0 && norm_err <= 1e-4, "100 profiles, max norm rel err " + sci(norm_err) +
                                                              " (tol 1e-4), violations " + std::to_string(violations)};
  });

  criterion(13, "gradient check", [&] {
    const auto g = make_grid(2000, 40.0);
    std::mt19937_64 rng(2024);
    const double eps = 1e-5;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double p = 2.0 + 0.01 * k;
      const auto u = random_smooth(g, rng, 2.0), v = random_smooth(g, rng, 3.0);
      const double fd = (energy(u + eps * v, p).total - energy(u - eps * v, p).total) / (2.0 * eps);
      worst = std::max(worst, rel(fd, inner(v, euler_lagrange_gradient(u, p), Quadrature::trapezoid)));
    }
    return std::pair{worst <= 1e-4, "20 random pairs, max rel err " + sci(worst) + " (tol 1e-4)"};
  });

  criterion(14, "determinism", [&] {
    const fs::path dir = fs::temp_directory_path() / ("choquard_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto run = [&](std::vector<std::string> args) {
      std::ostringstream out, err;
      if (run_cli(args, out, err) != kExitOk) throw std::runtime_error("command failed: " + err.str());
      return out.str();
    };
    const auto d = [&](const char* name) { return (dir / name).string(); };
    const auto o1 = run({"solve", "--p", "2.1", "--out", d("a.json")});
    const auto o2 = run({"solve", "--p", "2.1", "--out", d("b.json")});
    const auto s1 = run({"sweep", "--p-from", "2.0", "--p-to", "2.1", "--steps", "3", "--out", d("a.csv")});
    const auto s2 = run({"sweep", "--p-from", "2.0", "--p-to", "2.1", "--steps", "3", "--out", d("b.csv")});
    const bool json_same = slurp(d("a.json")) == slurp(d("b.json"));
    const bool csv_same = slurp(d("a.csv")) == slurp(d("b.csv"));
    const bool stdout_same = o1.substr(0, o1.find(" -> ")) == o2.substr(0, o2.find(" -> ")) &&
                             s1.substr(s1.find('\n')) == s2.substr(s2.find('\n'));
    fs::remove_all(dir);
    return std::pair{json_same && csv_same && stdout_same,
                     std::string("solve JSON identical: ") + (json_same ? "yes" : "no") +
                         ", sweep CSV identical: " + (csv_same ? "yes" : "no") +
                         ", summaries identical: " + (stdout_same ? "yes" : "no")};
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
