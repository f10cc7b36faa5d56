#pragma once
#include <functional>
#include <optional>
#include <utility>

#include "emforms/geometry.hpp"

namespace emforms {

// Field 2-forms over space-time, their dual pairing through the medium, and
// residual evaluation for both Maxwell groups and the Poynting balance.
// Units are Gaussian-style with an explicit c; code units default to c = 1.

struct EMFieldSample {
  Vec3 E;
  Vec3 B;
};

// A0 = -V; the 1-form is theta = A . dq + A0 dq0.
struct PotentialSample {
  Vec3 A;
  double V = 0.0;
};

struct Medium {
  double eps_r = 1.0;
  double mu_r = 1.0;
  double eta = 1.0;  // eps_r * mu_r, sqrt(eta) is the refractive index

  Medium() = default;
  Medium(double eps, double mu) : eps_r(eps), mu_r(mu), eta(eps * mu) {}
};

struct SourceSample {
  double rho = 0.0;
  Vec3 j;
};

using FieldSampler = std::function<EMFieldSample(const SpacetimeEvent&)>;
using PotentialSampler = std::function<PotentialSample(const SpacetimeEvent&)>;
using SourceSampler = std::function<SourceSample(const SpacetimeEvent&)>;

// A field is a sampler of (E, B) plus an optional potential sampler. When both
// are present they must be consistent (E = -d0 A - grad V, B = curl A) to
// stencil accuracy; that is a caller contract, checked by tests not at runtime.
struct EMField {
  FieldSampler sample;
  std::optional<PotentialSampler> potential;
};

// Coefficient matrix of the field 2-form:
//   row 0 = (0, E1, E2, E3), spatial block m12 = -B3, m13 = B2, m23 = -B1.
TwoFormMatrix omega_f(const EMFieldSample& f);

// Coefficient matrix of the dual 2-form in the medium:
//   row 0 = (0, B1, B2, B3), spatial block m12 = eta E3, m13 = -eta E2,
//   m23 = eta E1. At eta = 1 this equals omega_f(E -> B, B -> -E).
TwoFormMatrix omega_f_star(const EMFieldSample& f, const Medium& m);

// Builds the 2-form directly from potentials by central differences:
//   m_{mu nu} = -(d_mu A_nu - d_nu A_mu), with A0 = -V.
// Throws MissingPotential when the field carries no potential sampler.
TwoFormMatrix omega_f_from_potentials(const EMField& field, const SpacetimeEvent& x,
                                      const StencilConfig& cfg);

// Current 3-form J = rho dV - (1/c) j . dq0 ^ dS.
ThreeForm current_3form(const SourceSample& s, double c);

// First-group residual, sign-fixed so the slots read directly as equations:
//   s = div B,   t = curl E + d0 B      (zero exactly when the first group holds).
// This is -d(omega_f); the raw exterior derivative puts the opposite sign in
// this 3-form layout.
ThreeForm maxwell_residual_first(const EMField& field, const SpacetimeEvent& x,
                                 const StencilConfig& cfg);

// Second-group residual d(omega_f*) - mu_r J. Slots carry
//   s = mu_r (eps_r div E - rho),
//   t = (mu_r/c)(j + eps_r d_t E) - curl B,
// both zero exactly when the sourced group holds.
ThreeForm maxwell_residual_second(const EMField& field, const Medium& m,
                                  const SourceSampler& src, const SpacetimeEvent& x,
                                  const StencilConfig& cfg, double c);

// d_t w + div Y + E . j with w = (eps_r E^2 + B^2/mu_r)/2 and Y = c E x B / mu_r,
// all derivatives by central differences.
double poynting_balance(const EMField& field, const Medium& m, const SourceSampler& src,
                        const SpacetimeEvent& x, const StencilConfig& cfg, double c);

// (signed E.B recovered through the Pfaffian of omega_f, eta E^2 - B^2 from the
// wedge pairing). |first| equals sqrt(det omega_f); the determinant alone only
// fixes the square.
std::pair<double, double> field_invariants(const EMFieldSample& f, const Medium& m);

}  // namespace emforms
