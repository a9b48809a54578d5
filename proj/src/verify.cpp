#include "choquard/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choquard/error.hpp"
#include "choquard/rearrangement.hpp"
#include "format.hpp"

namespace choquard {

namespace {

CheckResult upper(std::string group, std::string name, double value, double tol, std::string note = {}) {
  return {std::move(group), std::move(name), value, tol, false, value <= tol, std::move(note)};
}

CheckResult lower(std::string group, std::string name, double value, double tol, std::string note = {}) {
  return {std::move(group), std::move(name), value, tol, true, value >= tol, std::move(note)};
}

CheckResult flag(std::string group, std::string name, bool ok, std::string note = {}) {
  return {std::move(group), std::move(name), ok ? 1.0 : 0.0, 1.0, true, ok, std::move(note)};
}

}  // namespace

const std::vector<std::string>& check_groups() {
  static const std::vector<std::string> groups{"residual", "mass", "pohozaev", "decay", "ift", "rearrangement"};
  return groups;
}

std::vector<CheckResult> run_checks(const GroundState& gs, const std::vector<std::string>& groups,
                                    const LabConfig& cfg) {
  for (const auto& g : groups) {
    if (std::find(check_groups().begin(), check_groups().end(), g) == check_groups().end()) {
      throw DomainError("unknown check '" + g + "'");
    }
  }
  auto selected = [&](const std::string& g) {
    return groups.empty() || std::find(groups.begin(), groups.end(), g) != groups.end();
  };
  const auto& t = cfg.verify;
  std::vector<CheckResult> out;

  if (selected("residual")) {
    out.push_back(upper("residual", "equation_residual", equation_residual(gs.q, gs.lambda, gs.p), t.residual));
  }
  if (selected("mass")) {
    const double n = std::sqrt(mass_squared(gs.q));
    out.push_back(upper("mass", "mass_constraint", std::abs(n - gs.mass) / gs.mass, t.mass));
  }
  if (selected("pohozaev")) {
    const auto r = pohozaev_report(gs);
    out.push_back(upper("pohozaev", "kinetic_over_lambda", r.k_rel_error, t.pohozaev));
    out.push_back(upper("pohozaev", "coulomb_over_lambda", r.d_rel_error, t.pohozaev));
    out.push_back(upper("pohozaev", "multiplier_law", r.lambda_rel_error, t.pohozaev));
    out.push_back(upper("pohozaev", "scaling_characterization", r.scaling_rel_error, t.pohozaev));
  }
  if (selected("decay")) {
    try {
      const auto f = decay_fit(gs);
      out.push_back(lower("decay", "exponential_fit_r2", f.r2, t.decay_r2,
                          "gamma/sqrt(lambda) = " + format_double(f.gamma_over_sqrt_lambda)));
      out.push_back(flag("decay", "power_bound_r4", f.power_bound_ok));
      out.push_back(flag("decay", "potential_bound_r34", f.c0_v_bound_ok));
    } catch (const DomainError& e) {
      out.push_back(flag("decay", "exponential_fit_r2", false, e.what()));
    }
  }
  if (selected("ift")) {
    out.push_back(upper("ift", "dilation_identity", scaling_generator_residual(gs, cfg.spectral.boundary_fraction),
                        t.scaling));
    if (gs.p == 2.0) {
      const auto r = ift_operators_check(gs, cfg.spectral);
      out.push_back(upper("ift", "factorization", r.factorization_residual, t.ift_factorization));
      out.push_back(upper("ift", "w2_equation", r.w2_residual, t.ift_w2));
      out.push_back(upper("ift", "pairing", r.pairing_rel_error, t.ift_pairing,
                          format_double(r.pairing) + " vs " + format_double(r.pairing_expected)));
    }
  }
  if (selected("rearrangement")) {
    // a ground state is its own rearrangement; the inequalities then hold with equality
    auto q = gs.q;
    for (double& v : q.values()) v = std::max(v, 0.0);
    const auto star = rearrange(q);
    const double moved = max_abs_difference(star, q) / q.max_abs();
    out.push_back(upper("rearrangement", "fixed_point", moved, t.rearrangement));
    const auto r = rearrangement_inequalities(q, gs.p, t.rearrangement);
    out.push_back(flag("rearrangement", "kinetic_decreases", r.kinetic_ok));
    out.push_back(flag("rearrangement", "coulomb_increases", r.coulomb_ok));
  }
  return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json to_json(const std::vector<CheckResult>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["group"] = c.group;
    j["name"] = c.name;
    j["value"] = std::isfinite(c.value) ? Json(c.value) : Json(nullptr);
    j["tolerance"] = c.tolerance;
    j["bound"] = c.lower_bound ? "lower" : "upper";
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  Json out;
  out["pass"] = all_pass(checks);
  out["checks"] = std::move(arr);
  return out;
}

std::string format_checks(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.group << '.' << c.name << "  value=" << format_double(c.value)
       << (c.lower_bound ? "  min=" : "  max=") << format_double(c.tolerance);
    if (!c.note.empty()) os << "  (" << c.note << ')';
    os << '\n';
  }
  return os.str();
}

}  // namespace choquard
