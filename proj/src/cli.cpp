#include "choquard/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "choquard/continuation.hpp"
#include "choquard/error.hpp"
#include "choquard/io.hpp"
#include "choquard/rearrangement.hpp"
#include "choquard/verify.hpp"
#include "format.hpp"

namespace choquard {

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags shared by the solving commands; applied over defaults and --config.
struct SolverFlags {
  std::size_t grid_n = 0;
  double r_max = 0.0;
  std::string method;
  std::string guess;
  double fixpoint_tol = 0.0;
  double flow_tol = 0.0;
  int max_iterations = 0;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    opts = {app->add_option("--grid-n", grid_n, "solve grid nodes (default 8000)"),
            app->add_option("--r-max", r_max, "grid radius; omit for the automatic extent"),
            app->add_option("--method", method, "flow | fixpoint")->check(CLI::IsMember({"flow", "fixpoint"})),
            app->add_option("--guess", guess, "gaussian | gaussian_narrow | gaussian_wide | plateau | two_bump"),
            app->add_option("--fixpoint-tol", fixpoint_tol, "fixed-point iterate tolerance"),
            app->add_option("--flow-tol", flow_tol, "flow gradient tolerance"),
            app->add_option("--max-iterations", max_iterations, "iteration cap")};
  }

  void apply(SolverConfig& c) const {
    if (opts[0]->count()) c.grid_n = grid_n;
    if (opts[1]->count()) c.r_max = r_max;
    if (opts[2]->count()) c.method = parse_method(method);
    if (opts[3]->count()) c.guess = parse_guess(guess);
    if (opts[4]->count()) c.fixpoint_tol = fixpoint_tol;
    if (opts[5]->count()) c.flow_tol = flow_tol;
    if (opts[6]->count()) c.max_iterations = max_iterations;
  }
};

LabConfig load_config(const std::string& path) {
  LabConfig cfg;
  if (!path.empty()) apply_config(cfg, read_json(path));
  return cfg;
}

void sync_sweep(LabConfig& cfg) {
  cfg.sweep.solver = cfg.solver;
  cfg.sweep.spectral = cfg.spectral;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized ground states of the Choquard equation on radial grids"};
  app.name("choquard");
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string config_path;
  bool timestamp = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config (defaults < config < flags)")->check(CLI::ExistingFile);
    sub->add_flag("--timestamp", timestamp, "add a UTC timestamp to JSON outputs");
  };

  // solve / fixpoint-solve
  double p = 2.0, mass = 1.0;
  std::string out_path = "gs.json";
  SolverFlags sflags;
  auto* solve_cmd = app.add_subcommand("solve", "compute a normalized ground state");
  auto* fix_cmd = app.add_subcommand("fixpoint-solve", "solve with the fixed-point map");
  for (auto* sub : {solve_cmd, fix_cmd}) {
    sub->add_option("--p", p, "exponent in [2, 7/3)")->required();
    sub->add_option("--mass", mass, "L2 mass N");
    sub->add_option("--out", out_path, "output state JSON");
    common(sub);
  }
  sflags.attach(solve_cmd);
  SolverFlags fflags;
  fflags.attach(fix_cmd);

  // spectrum
  std::string in_path;
  std::vector<int> ells{0, 1, 2};
  int k = 6;
  std::size_t spectral_n = 0;
  std::string out_dir = "spectrum";
  auto* spec_cmd = app.add_subcommand("spectrum", "linearized spectra and the nondegeneracy verdict");
  spec_cmd->add_option("--in", in_path, "ground state JSON")->required();
  spec_cmd->add_option("--ell", ells, "sectors, e.g. 0,1,2")->delimiter(',');
  auto* k_opt = spec_cmd->add_option("--k", k, "eigenvalues per sector");
  auto* sn_opt = spec_cmd->add_option("--grid-n", spectral_n, "spectral grid nodes (default 800)");
  spec_cmd->add_option("--out", out_dir, "output directory");
  common(spec_cmd);

  // sweep
  double p_from = 2.0, p_to = 2.25;
  int steps = 11, starts = 5;
  bool no_spectra = false;
  std::size_t threads = 0;
  std::string csv_path = "sweep.csv";
  SolverFlags wflags;
  auto* sweep_cmd = app.add_subcommand("sweep", "continuation in p with per-point diagnostics");
  sweep_cmd->add_option("--p-from", p_from, "first exponent");
  sweep_cmd->add_option("--p-to", p_to, "last exponent (at most 7/3 - 0.01)");
  sweep_cmd->add_option("--steps", steps, "number of points");
  sweep_cmd->add_option("--mass", mass, "L2 mass N");
  auto* starts_opt = sweep_cmd->add_option("--starts", starts, "multistart count per point (0 skips)");
  auto* nospec_opt = sweep_cmd->add_flag("--no-spectra", no_spectra, "skip the spectral diagnostics");
  auto* threads_opt = sweep_cmd->add_option("--threads", threads, "diagnostic workers (default CHOQUARD_THREADS)");
  sweep_cmd->add_option("--out", csv_path, "output CSV");
  wflags.attach(sweep_cmd);
  common(sweep_cmd);

  // verify
  std::vector<std::string> checks;
  std::string report_path;
  auto* verify_cmd = app.add_subcommand("verify", "identity battery on a stored state");
  verify_cmd->add_option("--in", in_path, "ground state JSON")->required();
  verify_cmd->add_option("--checks", checks, "residual,mass,pohozaev,decay,ift,rearrangement")->delimiter(',');
  verify_cmd->add_option("--out", report_path, "JSON report");
  common(verify_cmd);

  // rearrange
  std::string profile_out;
  double rp = 2.0;
  auto* rear_cmd = app.add_subcommand("rearrange", "symmetric-decreasing rearrangement of a profile");
  rear_cmd->add_option("--in", in_path, "profile CSV (r,value) or ground state JSON")->required();
  rear_cmd->add_option("--out", profile_out, "rearranged profile CSV");
  rear_cmd->add_option("--p", rp, "exponent for the Coulomb inequality");
  common(rear_cmd);

  try {
    std::vector<const char*> argv{"choquard"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    LabConfig cfg = load_config(config_path);

    if (solve_cmd->parsed() || fix_cmd->parsed()) {
      (solve_cmd->parsed() ? sflags : fflags).apply(cfg.solver);
      if (fix_cmd->parsed()) cfg.solver.method = SolveMethod::fixpoint;
      const auto gs = solve(p, mass, cfg.solver);
      auto j = to_json(gs);
      if (timestamp) j["timestamp"] = utc_now();
      write_json(out_path, j);
      out << "solved p=" << format_double(gs.p) << " mass=" << format_double(gs.mass)
          << " lambda=" << format_double(gs.lambda) << " energy=" << format_double(gs.energy.total)
          << " method=" << to_string(gs.method) << " iterations=" << gs.iterations
          << " residual=" << format_double(gs.eq_residual) << " -> " << out_path << '\n';
      return kExitOk;
    }

    if (spec_cmd->parsed()) {
      for (int l : ells) validate_sector(l);
      if (k_opt->count()) cfg.spectral.k = k;
      if (sn_opt->count()) cfg.spectral.grid_n = spectral_n;
      const auto gs = read_ground_state(in_path);
      const auto nd = nondegeneracy_report(gs, cfg.spectral);
      std::filesystem::create_directories(out_dir);
      for (int l : ells) {
        auto j = to_json(nd.lplus[l]);
        if (timestamp) j["timestamp"] = utc_now();
        write_json((std::filesystem::path(out_dir) / ("Lplus_l" + std::to_string(l) + ".json")).string(), j);
        out << "Lplus l=" << l << " kernel_count=" << nd.lplus[l].kernel_count
            << " lowest/lambda=" << format_double(nd.lplus[l].eigenvalues.front() / gs.lambda) << '\n';
      }
      write_json((std::filesystem::path(out_dir) / "Lminus_l0.json").string(), to_json(nd.lminus));
      auto summary = to_json(nd);
      if (timestamp) summary["timestamp"] = utc_now();
      write_json((std::filesystem::path(out_dir) / "nondegeneracy.json").string(), summary);
      out << "NONDEGENERATE: " << (nd.verdict ? "true" : "false") << '\n';
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      wflags.apply(cfg.solver);
      sync_sweep(cfg);
      if (starts_opt->count()) cfg.sweep.n_starts = starts;
      if (nospec_opt->count()) cfg.sweep.spectra = !no_spectra;
      if (threads_opt->count()) cfg.sweep.threads = threads;
      validate_sweep(p_from, p_to, steps);
      try {
        const auto recs = sweep(p_from, p_to, steps, mass, cfg.sweep);
        write_sweep_csv(csv_path, recs);
        const auto best = largest_passing_p(recs, cfg.sweep);
        out << "rows=" << recs.size() << " -> " << csv_path << '\n';
        out << "largest p passing all checks: " << (best ? format_double(*best) : std::string("none")) << '\n';
        if (timestamp) out << "timestamp: " << utc_now() << '\n';
        return kExitOk;
      } catch (const SweepError& e) {
        write_sweep_csv(csv_path, e.partial);
        err << "error: " << e.what() << " (partial rows: " << e.partial.size() << ")\n";
        return kExitNumerical;
      }
    }

    if (verify_cmd->parsed()) {
      const auto gs = read_ground_state(in_path);
      const auto results = run_checks(gs, checks, cfg);
      out << format_checks(results);
      const bool ok = all_pass(results);
      out << "VERIFY: " << (ok ? "pass" : "fail") << '\n';
      if (!report_path.empty()) {
        auto j = to_json(results);
        if (timestamp) j["timestamp"] = utc_now();
        write_json(report_path, j);
      }
      return ok ? kExitOk : kExitVerification;
    }

    if (rear_cmd->parsed()) {
      const bool json_in = std::filesystem::path(in_path).extension() == ".json";
      const auto u = json_in ? read_ground_state(in_path).q : read_profile_csv(in_path);
      const auto r = rearrangement_inequalities(u, rp);
      if (!profile_out.empty()) write_profile_csv(profile_out, rearrange(u));
      out << "K(u)=" << format_double(r.kinetic) << " K(u*)=" << format_double(r.kinetic_star)
          << " kinetic_ok=" << (r.kinetic_ok ? "true" : "false") << '\n';
      out << "D(u)=" << format_double(r.coulomb) << " D(u*)=" << format_double(r.coulomb_star)
          << " coulomb_ok=" << (r.coulomb_ok ? "true" : "false") << '\n';
      return kExitOk;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace choquard
