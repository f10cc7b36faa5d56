#pragma once
#include <functional>
#include <optional>
#include <utility>

#include "emforms/em_forms.hpp"
#include "emforms/geometry.hpp"

namespace emforms {

// Common kernel of omega_f and omega_f*, the wave ansatz built on a phase
// function, and the eikonal/dispersion relations that tie them together.

// Defined up to scale; normalized so V0 = 1 whenever returned (a null field
// with E != 0 forces V0 != 0, since V0 E = -V x B pins it).
struct CharacteristicVector {
  double V0 = 1.0;
  Vec3 V;

  FourVector as_four_vector() const { return {V0, V}; }
};

using PhaseSampler = std::function<double(const SpacetimeEvent&)>;
using PolarizationSampler = std::function<Vec3(const SpacetimeEvent&)>;

// Phase + polarization; k0 = -d0(phi), k = grad(phi) are derived quantities.
struct WaveData {
  PhaseSampler phi;
  PolarizationSampler P;
};

struct WaveVectors {
  double k0 = 0.0;
  Vec3 k;
};

// Central-difference k0 = -d0 phi, k = grad phi at x.
WaveVectors wave_vectors(const PhaseSampler& phi, const SpacetimeEvent& x,
                         const StencilConfig& cfg);

// Returns the annihilating vector of both field forms when one exists:
//   nullopt unless |E.B| <= tol |E||B| and |B^2 - eta E^2| <= tol max(B^2, eta E^2),
//   else V0 = 1, V = E x B / (eta E^2)   (from V/V0 = Y/(c w))
// Throws DegenerateField when E = B = 0 (everything annihilates, nothing to pick).
std::optional<CharacteristicVector> characteristic_vector(const EMFieldSample& f,
                                                          const Medium& m, double tol = 1e-9);

// E = k0 P, B = k x P with the wave vectors taken by central differences.
EMFieldSample wave_field(const WaveData& w, const SpacetimeEvent& x, const StencilConfig& cfg);

// (grad phi)^2 - eta (d0 phi)^2 at x; zero for an exact eikonal phase.
double eikonal_residual(const PhaseSampler& phi, const Medium& m, const SpacetimeEvent& x,
                        const StencilConfig& cfg);

// Residuals (V0 k0 - V.k, k^2 - eta k0^2) with V the characteristic vector of
// the field the wave ansatz produces at x. Throws NoCharacteristic when that
// field is not null there (within null_tol, which absorbs stencil error).
std::pair<double, double> dispersion_check(const WaveData& w, const Medium& m,
                                           const SpacetimeEvent& x, const StencilConfig& cfg,
                                           double null_tol = 1e-6);

}  // namespace emforms
