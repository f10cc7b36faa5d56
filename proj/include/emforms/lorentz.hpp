#pragma once
#include <array>
#include <utility>

#include "emforms/em_forms.hpp"
#include "emforms/geometry.hpp"

namespace emforms {

// Proper orthochronous Lorentz transformations acting on coordinates
// (passive convention): q~_mu = sum_nu lambda_{mu nu} q_nu. Form coefficient
// matrices transform by congruence with lambda^{-1}.

struct LorentzMatrix {
  std::array<std::array<double, 4>, 4> lambda{};

  double operator()(int mu, int nu) const { return lambda[mu][nu]; }

  static LorentzMatrix identity();
  LorentzMatrix operator*(const LorentzMatrix& o) const;  // matrix product

  // Exact inverse through the metric: lambda^{-1} = g lambda^T g with
  // g = diag[-1,1,1,1] (equivalently diag[1,-1,-1,-1]; the two signs cancel).
  LorentzMatrix inverse() const;

  // max |lambda^T g lambda - g|, the defining-property residual.
  double orthogonality_residual() const;
  double det() const;
};

// Pure boost with velocity beta (units of c). Sign convention, worked example:
// beta = (0.6, 0, 0) gives gamma = 1.25, lambda_00 = 1.25, lambda_01 = -0.75,
// so a particle at rest in the old frame moves with velocity -beta in the new
// one (coordinates transform, the event stays put).
// Throws SuperluminalBoost when |beta| >= 1.
LorentzMatrix boost(const Vec3& beta);

// Spatial rotation by `angle` about the unit vector `axis` (Rodrigues form),
// embedded as a block-diagonal Lorentz matrix.
LorentzMatrix rotation(const Vec3& axis, double angle);

// Coefficient matrix of the same 2-form in the tilde coordinates:
// (lambda^{-1})^T w lambda^{-1}, re-antisymmetrized to kill roundoff.
TwoFormMatrix transform_2form(const LorentzMatrix& lam, const TwoFormMatrix& w);

// Reads (E, B) back out of a matrix in the omega_f layout of Eq-style row 0 =
// E, spatial block = -eps_{ijk} B_k.
EMFieldSample fields_from_omega_f(const TwoFormMatrix& w);

// Invariance check of the dual form in vacuum (eta = 1): transforms
// omega_f*(E,B) directly by congruence, and separately rebuilds omega_f* from
// the transformed fields read out of transform_2form(omega_f). Returns the max
// entrywise discrepancy; zero (to roundoff) is the Appendix-style invariance.
double dual_invariance_residual(const LorentzMatrix& lam, const EMFieldSample& f);

// Same two-way comparison with the dual built at an arbitrary eta; used to
// exhibit that the invariance is special to eta = 1.
double dual_invariance_residual_eta(const LorentzMatrix& lam, const EMFieldSample& f, double eta);

// (| |E.B| change |, | (E^2-B^2) change |) across the transformation at
// eta = 1, evaluated through det_2form and wedge_22 on the matrices.
std::pair<double, double> scalar_invariants_check(const LorentzMatrix& lam,
                                                  const EMFieldSample& f);

}  // namespace emforms
