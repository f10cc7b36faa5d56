#include "emforms/topology.hpp"

#include <cmath>

#include "emforms/errors.hpp"

namespace emforms {

namespace {
constexpr double kSingularTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

Vec3 monopole_potential(const MonopoleConfig& cfg, const Vec3& r) {
  const double rn = norm(r);
  if (rn < kSingularTol) throw OriginSingularity();
  const Vec3 er = r / rn;
  const double denom = 1.0 + dot(cfg.axis, er);
  if (denom < kSingularTol) throw OnString();
  return (cfg.a / rn) * cross(cfg.axis, er) / denom;
}

Vec3 curl_check(const MonopoleConfig& cfg, const Vec3& r, double h) {
  auto G = [&](const Vec3& x) { return monopole_potential(cfg, x); };
  Vec3 curl;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    Vec3 pj = r, mj = r, pk = r, mk = r;
    pj[j] += h;
    mj[j] -= h;
    pk[k] += h;
    mk[k] -= h;
    // (curl G)_i = d_j G_k - d_k G_j
    curl[i] = (G(pj)[k] - G(mj)[k]) / (2.0 * h) - (G(pk)[j] - G(mk)[j]) / (2.0 * h);
  }
  const double rn = norm(r);
  const Vec3 exact = (cfg.a / (rn * rn * rn)) * r;
  return curl - exact;
}

double flux_integral(double a, const SphereMesh& mesh) {
  // Integrand a sin(theta); phi integral is exact for any rule, theta uses
  // 2-point Gauss-Legendre per cell so no node touches the poles.
  const double dtheta = kPi / mesh.n_theta;
  const double node_offset = 0.5 / std::sqrt(3.0);
  double theta_sum = 0.0;
  for (int i = 0; i < mesh.n_theta; ++i) {
    const double mid = (i + 0.5) * dtheta;
    const double t1 = mid - node_offset * dtheta;
    const double t2 = mid + node_offset * dtheta;
    theta_sum += 0.5 * dtheta * (std::sin(t1) + std::sin(t2));
  }
  const double dphi = 2.0 * kPi / mesh.n_phi;
  return a * theta_sum * (dphi * mesh.n_phi);
}

namespace {

// Pullback of G_n . dr to the unit sphere r(theta, phi); returns the (theta,
// phi) components of the 1-form alpha_n.
std::pair<double, double> pullback_impl(const MonopoleConfig& cfg, double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const Vec3 er{st * cp, st * sp, ct};
  const Vec3 dtheta{ct * cp, ct * sp, -st};
  const Vec3 dphi{-st * sp, st * cp, 0.0};
  const Vec3 G = monopole_potential(cfg, er);
  return {dot(G, dtheta), dot(G, dphi)};
}

}  // namespace

std::pair<double, double> sphere_pullback(const MonopoleConfig& cfg, double theta, double phi) {
  return pullback_impl(cfg, theta, phi);
}

double loop_integral(double a, double theta, int n_points) {
  const MonopoleConfig up{a, {0.0, 0.0, 1.0}};
  const MonopoleConfig down{a, {0.0, 0.0, -1.0}};
  const double dphi = 2.0 * kPi / n_points;
  double sum = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double phi = (i + 0.5) * dphi;
    sum += (pullback_impl(up, theta, phi).second - pullback_impl(down, theta, phi).second) * dphi;
  }
  return sum;
}

double loop_integral_single(double a, double theta, int n_points) {
  const MonopoleConfig up{a, {0.0, 0.0, 1.0}};
  const double dphi = 2.0 * kPi / n_points;
  double sum = 0.0;
  for (int i = 0; i < n_points; ++i)
    sum += pullback_impl(up, theta, (i + 0.5) * dphi).second * dphi;
  return sum;
}

double transition_phase_ki(double a, double theta, double phi) {
  const double ct = std::cos(theta), sp = std::sin(phi);
  if (std::abs(ct) < kSingularTol) throw DomainSingularity("tan(theta) pole at theta = pi/2");
  if (std::abs(sp) < kSingularTol) throw DomainSingularity("cot(phi) pole at phi = 0 or pi");
  const double tt = std::tan(theta);
  const double cotp = std::cos(phi) / sp;
  return a * (phi + std::atan(sp * tt) + std::atan(cotp * ct));
}

namespace {

std::pair<long long, double> nearest_integer(double x) {
  const double n = std::nearbyint(x);  // round-half-even in the default mode
  return {static_cast<long long>(n), std::abs(x - n)};
}

}  // namespace

std::pair<long long, double> dirac_check(double q_e, double q_m, double h_planck, double c) {
  return nearest_integer(q_e * q_m / (h_planck * c));
}

std::pair<long long, double> electric_quantization_check(double q_e_prime, double e_unit) {
  return nearest_integer(q_e_prime / e_unit);
}

}  // namespace emforms
