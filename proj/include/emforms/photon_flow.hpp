#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "emforms/vec3.hpp"

namespace emforms {

// The infinite-dimensional Hamiltonian pair (n, phi) discretized on a
// rectangular grid, plus the single-photon ray tracer that shares the same
// index field eta(q).
//
// The physical phase is Phi(x) = k_bg . x + phi(x): a stored grid part phi
// plus a linear carrier k_bg. On periodic boxes a plane wave has non-periodic
// phase, so the carrier keeps the stored part periodic (phi = 0 for an exact
// plane phase) and every gradient below adds k_bg back in.

enum class Boundary : std::int32_t { Periodic = 0, Outflow = 1 };

struct GridSpec {
  int dims = 1;                       // 1..3; unused axes have n = 1
  std::array<int, 3> n{1, 1, 1};      // cells per axis
  std::array<double, 3> dx{1, 1, 1};  // spacings
  std::array<double, 3> origin{};     // domain corner; centers at origin + (i+1/2) dx
  std::array<Boundary, 3> bc{Boundary::Periodic, Boundary::Periodic, Boundary::Periodic};

  std::size_t cell_count() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  }
  Vec3 center(int i, int j, int k) const {
    return {origin[0] + (i + 0.5) * dx[0], origin[1] + (j + 0.5) * dx[1],
            origin[2] + (k + 0.5) * dx[2]};
  }
  double cell_volume() const { return dx[0] * dx[1] * dx[2]; }
};

struct PhotonGridState {
  GridSpec grid;
  std::vector<double> n;    // photon density, >= 0
  std::vector<double> phi;  // stored phase part
  Vec3 k_bg;                // linear phase carrier

  // Validates shapes and n >= 0; throws ValidationError.
  void validate() const;
};

struct IndexField {
  std::function<double(const Vec3&)> eta;      // > 0
  std::function<Vec3(const Vec3&)> grad_eta;   // analytic gradient
};

IndexField uniform_index(double eta);

// CFL bound dt_max = 0.5 dx_min sqrt(eta_min)/c with eta_min over cell
// centers; both steppers throw CFLViolation when dt exceeds it.
double cfl_limit(const PhotonGridState& s, const IndexField& idx, double c);

// H[n, phi] = integral of (c/sqrt(eta)) n |grad Phi| (midpoint quadrature over
// cell centers, gradient by central differences).
double functional_hamiltonian(const PhotonGridState& s, const IndexField& idx, double c);

// One forward-Euler step of d(phi)/dt = -(c/sqrt(eta)) |grad Phi| using the
// monotone Rouy-Tourin upwind gradient; first order, viscosity-solution
// behavior at kinks.
void step_phase(PhotonGridState& s, const IndexField& idx, double dt, double c);

// One conservative finite-volume step of d(n)/dt + div(n v) = 0 with
// v = (c/sqrt(eta)) grad Phi / max(|grad Phi|, eps_reg) evaluated at faces and
// first-order upwind cell fluxes. Periodic boundaries conserve the total
// exactly (telescoping); outflow boundaries let mass leave, none enter.
void step_density(PhotonGridState& s, const IndexField& idx, double dt, double c,
                  double eps_reg = 1e-12);

// w = n hbar omega and Y = n (c^2/eta) hbar grad Phi on the grid.
struct EnergyFields {
  std::vector<double> w;
  std::vector<Vec3> Y;
};
EnergyFields energy_quantities(const PhotonGridState& s, const IndexField& idx, double omega,
                               double hbar, double c);

struct MonitorRow {
  int step;
  double t;
  double total_density;  // sum n * cell volume
  double hamiltonian;    // H[n, phi]
  double w_balance;      // hbar omega d/dt(total density): Poynting-type balance
};

struct EvolveConfig {
  int steps = 100;
  double dt = 0.0;          // must satisfy the CFL bound
  bool strang = true;       // phase half-step / density / phase half-step
  int monitor_every = 1;
  double omega = 1.0;       // for the w balance column
  double hbar = 1.0;
  double eps_reg = 1e-12;
};

// Alternates the two steppers (Strang split by default) and collects the
// monitor series.
std::vector<MonitorRow> evolve(PhotonGridState& s, const IndexField& idx, double c,
                               const EvolveConfig& cfg);

// --- single-photon rays ---------------------------------------------------

struct RayState {
  Vec3 q;
  Vec3 p;  // hbar k; |p| > 0
};

// h_sp = c |p| / sqrt(eta(q)).
double ray_hamiltonian(const RayState& r, const IndexField& idx, double c);

// dq/dt = (c/sqrt(eta)) p/|p|,  dp/dt = h_sp grad(ln sqrt(eta)) = h_sp grad(eta)/(2 eta).
// Throws ZeroMomentum when |p| = 0.
std::pair<Vec3, Vec3> ray_rhs(const RayState& r, const IndexField& idx, double c);

struct RayPathSample {
  double t;
  RayState state;
  double h_sp;
};

// Fixed-step RK4 over t in [0, t_span] with `steps` steps; h_sp recorded.
std::vector<RayPathSample> trace_ray(const RayState& r0, const IndexField& idx, double t_span,
                                     int steps, double c);

// --- serialization ---------------------------------------------------------

// Flat binary layout (little-endian), documented bit-exactly in the README:
//   bytes 0..7   magic "PHGRID01"
//   int32        dims
//   int32 x 3    cells per axis
//   float64 x 3  spacings
//   float64 x 3  origin
//   int32 x 3    boundary flags (0 periodic, 1 outflow)
//   float64 x 3  k_bg
//   float64 x N  n, linear index i + nx*(j + ny*k)
//   float64 x N  phi, same order
void write_grid(std::ostream& os, const PhotonGridState& s);
PhotonGridState read_grid(std::istream& is);

// CSV monitor series: header "step,t,total_n,H,w_balance", one row per entry.
void write_monitor_csv(std::ostream& os, const std::vector<MonitorRow>& rows);

}  // namespace emforms
