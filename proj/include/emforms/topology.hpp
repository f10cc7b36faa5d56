#pragma once
#include <utility>

#include "emforms/vec3.hpp"

namespace emforms {

// Monopole geometry on the punctured sphere: string potentials, transition
// phases, flux integrality, and the quantization checkers built on them.

struct MonopoleConfig {
  double a = 1.0;  // monopole strength; total flux is 4 pi a
  Vec3 axis{0.0, 0.0, 1.0};  // string runs along -axis; |axis| = 1
};

struct SphereMesh {
  int n_theta = 64;
  int n_phi = 128;
};

// G_n(r) = (a/r) (n x e_r) / (1 + n . e_r), defined away from the origin and
// the ray r/|r| = -n. Throws OriginSingularity / OnString near the excluded
// sets (denominator tolerance 1e-9).
Vec3 monopole_potential(const MonopoleConfig& cfg, const Vec3& r);

// Central-difference curl of G_n minus the exact a e_r / r^2; O(h^2) small
// wherever G_n is regular, independent of the string axis.
Vec3 curl_check(const MonopoleConfig& cfg, const Vec3& r, double h);

// Quadrature of a sin(theta) dtheta dphi over S^2 on an n_theta x n_phi mesh:
// midpoint in phi, 2-point Gauss-Legendre per theta cell (nodes stay interior,
// so the poles are never evaluated). Converges to 4 pi a at order 4.
double flux_integral(double a, const SphereMesh& mesh);

// Line integral of (alpha_k - alpha_{-k}) = 2a dphi around the latitude circle
// at theta; equals 4 pi a for every theta in (0, pi).
double loop_integral(double a, double theta, int n_points);

// Line integral of alpha_n alone around the latitude theta, n the +z axis:
// alpha_k = a (1 - cos theta) dphi, so the loop gives 2 pi a (1 - cos theta).
double loop_integral_single(double a, double theta, int n_points);

// Transition phase between the -z-string and -x-string charts:
//   Phi_ki = a [phi + arctan(sin phi tan theta) + arctan(cot phi cos theta)].
// Its differential equals the pullback of (G_k - G_i) . dr to the unit sphere.
// Throws DomainSingularity at the tan(theta) / cot(phi) poles.
double transition_phase_ki(double a, double theta, double phi);

// Pullback components (d/dtheta, d/dphi) of G . dr on the unit sphere for the
// monopole with the given string axis; used by the gradient cross-check.
std::pair<double, double> sphere_pullback(const MonopoleConfig& cfg, double theta, double phi);

// Nearest integer n to q_e q_m / (h c) and the distance to it (round-half-even).
std::pair<long long, double> dirac_check(double q_e, double q_m, double h_planck, double c);

// Nearest integer to q_e' / e and the residual; the electric-charge variant.
std::pair<long long, double> electric_quantization_check(double q_e_prime, double e_unit);

}  // namespace emforms
