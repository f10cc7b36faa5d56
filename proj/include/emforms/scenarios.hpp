#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emforms/dynamics.hpp"
#include "emforms/em_forms.hpp"
#include "emforms/photon_flow.hpp"

namespace emforms {

// Catalog of analytic fields, media, sources and initial conditions, loaded
// from versioned JSON documents. One canonical format; unknown keys are
// rejected so stale configs fail loudly.

struct PolyTerm {
  double coeff = 0.0;
  std::array<int, 4> exp{};  // exponents of (q0, q1, q2, q3)

  bool operator==(const PolyTerm&) const = default;
};

enum class FieldKind { Uniform, PlaneWave, Coulomb, MonopoleB, FromPotentials, Custom };

struct FieldSpec {
  FieldKind kind = FieldKind::Uniform;
  // uniform
  Vec3 E, B;
  // plane_wave: E = amplitude P cos(k.q - k0 q0), k0 = |k|/sqrt(eta)
  double amplitude = 1.0;
  Vec3 k{0, 0, 1};
  Vec3 polarization{1, 0, 0};
  // coulomb / monopole_B
  double charge = 1.0;
  Vec3 axis{0, 0, 1};  // monopole string parameter
  // from_potentials
  std::string potential_name = "random_poly4";
  // custom: per-component polynomial tables in (q0, q1, q2, q3)
  std::array<std::vector<PolyTerm>, 3> custom_E, custom_B;
};

struct IndexProfileSpec {
  enum class Kind { Uniform, Grin, Ramp } kind = Kind::Uniform;
  double eta = 1.0;                       // uniform
  double n0 = 1.0, alpha = 0.0;           // grin: eta = n0^2 (1 - alpha^2 q1^2)
  double eta1 = 1.0, eta2 = 1.0;          // ramp along q3 ...
  double z0 = 0.0, width = 1.0;           // ... centered at z0, logistic width
};

struct MediumSpec {
  double eps_r = 1.0;
  double mu_r = 1.0;
  std::optional<IndexProfileSpec> profile;  // spatially varying eta for rays/grid
};

struct SourceSpec {
  double rho = 0.0;
  Vec3 j;
};

struct ParticleSpec {
  ExtendedState state;
  ParticleCharges charges;
};

struct GridInitSpec {
  GridSpec grid;
  Vec3 k_bg;
  enum class DensityInit { Uniform, Gaussian } density = DensityInit::Uniform;
  double density_value = 1.0;    // uniform level / gaussian amplitude
  Vec3 blob_center;
  double blob_sigma = 0.1;
};

struct Constants {
  double c = 1.0;
  double hbar = 1.0;
  double h_planck = 1.0;
  double e_unit = 1.0;
};

struct ScenarioSpec {
  int schema_version = 1;
  std::string name;
  Constants constants;
  MediumSpec medium;
  FieldSpec field;
  std::optional<SourceSpec> source;
  std::vector<ParticleSpec> particles;
  std::optional<GridInitSpec> grid;
  std::uint64_t seed = 0;
};

struct BuiltScenario {
  EMField field;
  Medium medium;
  IndexField index;      // uniform eta unless a profile was given
  SourceSampler source;  // zero sampler when the spec has none
  std::vector<ParticleSpec> particles;
  std::optional<PhotonGridState> grid;
  Constants constants;
  std::uint64_t seed = 0;
};

// Resolves the spec into callable samplers and initial states; deterministic
// given (spec, seed). Throws ValidationError with a dotted field path.
BuiltScenario build(const ScenarioSpec& spec);

// Parses the JSON text format (schema_version 1). Unknown keys anywhere are
// ValidationErrors; malformed JSON is a ParseError with line/column.
ScenarioSpec parse(const std::string& text);

// Inverse of parse: emits the canonical JSON document (round-trips exactly).
std::string serialize(const ScenarioSpec& spec);

// File convenience wrappers.
ScenarioSpec load_scenario(const std::string& path);

}  // namespace emforms
