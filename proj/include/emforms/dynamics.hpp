#pragma once
#include <functional>
#include <vector>

#include "emforms/em_forms.hpp"
#include "emforms/geometry.hpp"

namespace emforms {

// Trajectories in the extended phase-space R^8 = (q0..q3, p0..p3), integrated
// in the universal time parameter u. p0 = -E/c, so physical states have
// p0 < 0; the lab frame is recovered by reparameterizing with t = q0/c.

struct ExtendedState {
  SpacetimeEvent q;
  FourVector p;  // p.v0 = p0 = -E/c
};

// Tangent of ExtendedState with respect to u.
struct ExtendedDeriv {
  double q0p = 0.0;
  Vec3 qp;
  double p0p = 0.0;
  Vec3 pp;
};

struct ParticleCharges {
  double q_e = 0.0;
  double q_m = 0.0;
};

struct TrajectorySample {
  double u;
  ExtendedState state;
  double hamiltonian;  // H^e recorded along the flow, NaN if no monitor given
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // u strictly increasing
  double c = 1.0;
};

enum class IntegrationMethod { RK4, RK45Adaptive };

struct IntegratorConfig {
  double du = 1e-3;
  int steps = 1000;
  IntegrationMethod method = IntegrationMethod::RK4;
  double tolerance = 1e-10;  // per-step error control for RK45
};

using ExtendedRhs = std::function<ExtendedDeriv(const ExtendedState&)>;
using HamiltonianFn = std::function<double(const ExtendedState&)>;

// H^e_0 = -c sqrt(p0^2 - p^2); its conserved value is -m0 c^2.
// Throws SpacelikeMomentum when p0^2 < p^2.
double hamiltonian_free(const ExtendedState& s, double c);

// H^e_sp = -c sqrt(p0^2 - p^2/eta); 0 on the photon shell.
// Throws BelowShell when p0^2 < p^2/eta.
double photon_extended_hamiltonian(const ExtendedState& s, double eta, double c);

// Equations of motion for a particle carrying (q_e, q_m) in the sampled field:
//   q0' = -c p0 / R,   q' = c p / R,        R = sqrt(p0^2 - p^2)
//   p'  = (q_e/c)(q' x B + q0' E) + (q_m/c)(-q' x E + q0' B)
//   p0' = -(q_e/c) E . q' - (q_m/c) B . q'
// q_m = 0 reduces to the pure electric Lorentz force; q_e = 0 is its dual.
ExtendedDeriv dyon_rhs(const ExtendedState& s, const EMFieldSample& f,
                       const ParticleCharges& ch, double c);

// Convenience: binds a field sampler so the rhs is a function of state alone.
ExtendedRhs make_dyon_rhs(const EMField& field, const ParticleCharges& ch, double c);

// Fixed-step RK4 or adaptive RK45 (Dormand-Prince) with samples emitted at
// u_k = k * du, k = 0..steps. The Hamiltonian monitor, when given, is recorded
// at every emitted sample. RK45 throws StepFailure if its controller
// underflows the substep.
Trajectory integrate(const ExtendedState& s0, const ExtendedRhs& rhs,
                     const IntegratorConfig& cfg, double c,
                     const HamiltonianFn& monitor = nullptr);

struct LabSample {
  double t;
  Vec3 q;
  Vec3 v;       // p c^2 / E = -c p / p0
  Vec3 p;
  double energy;  // E = -c p0
};

struct LabFrameResult {
  std::vector<LabSample> rows;
  // max |v - c dq/dq0| over interior samples, dq/dq0 by centered differences;
  // consistency check of the two velocity formulas along the actual flow.
  double max_velocity_mismatch = 0.0;
};

// Reparameterizes by lab time t = q0/c. Throws NonMonotonicTime unless q0
// strictly increases along the samples.
LabFrameResult lab_frame(const Trajectory& t);

}  // namespace emforms
