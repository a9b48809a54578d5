#pragma once

// JSON persistence for states, spectra and run configuration.

#include <string>

#include "choquard/continuation.hpp"
#include "choquard/ground_state.hpp"
#include "choquard/spectrum.hpp"
#include "json.hpp"

namespace choquard {

using Json = nlohmann::ordered_json;

/// {p, mass, lambda, energy:{kinetic, coulomb, total, mass_squared}, grid:{n, h, r_max},
///  method, iterations, eq_residual, energy_trace:[...], q:[...]}
Json to_json(const GroundState& gs);
/// Throws FormatError on missing or inconsistent fields.
GroundState ground_state_from_json(const Json& j);

Json to_json(const SpectrumReport& rep);
Json to_json(const NondegeneracyReport& rep);

/// Two-space indentation and a trailing newline; doubles round-trip exactly.
std::string dump(const Json& j);

void write_json(const std::string& path, const Json& j);
/// Throws FormatError if the file is missing or does not parse.
Json read_json(const std::string& path);

void write_ground_state(const std::string& path, const GroundState& gs);
GroundState read_ground_state(const std::string& path);

/// Tolerances of the verify battery.
struct VerifyTolerances {
  double residual = 1e-6;
  double mass = 1e-8;
  double pohozaev = 1e-5;
  double decay_r2 = 0.999;
  double ift_factorization = 1e-6;
  double ift_w2 = 1e-6;
  double ift_pairing = 1e-4;
  double scaling = 1e-3;
  double rearrangement = 1e-6;
};

/// Every knob of the command-line tool.
struct LabConfig {
  SolverConfig solver;
  SpectralConfig spectral;
  SweepConfig sweep;  ///< its solver/spectral members are overwritten from the two above
  VerifyTolerances verify;
};

/// Overlays the keys present in j onto cfg; unknown keys throw FormatError.
/// Layout: {"solver": {...}, "spectral": {...}, "sweep": {...}, "verify": {...}}.
void apply_config(LabConfig& cfg, const Json& j);
Json to_json(const LabConfig& cfg);

}  // namespace choquard
