#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "emforms/vec3.hpp"

namespace emforms {

// Exterior-algebra primitives on space-time R^4, coordinates (q0, q1, q2, q3)
// with q0 = c*t. All indices are subscripted and all components are physical;
// no metric raising/lowering is used anywhere.
//
// A 2-form is stored as its full antisymmetric coefficient matrix m, meaning
//   omega = sum_{mu<nu} m[mu][nu] dq_mu ^ dq_nu,   m[nu][mu] = -m[mu][nu].
//
// A 3-form is stored against the basis {dV, dq0 ^ dS_i} with
//   dS_1 = dq2^dq3, dS_2 = -dq1^dq3, dS_3 = dq1^dq2, dV = dq1^dq2^dq3.

struct SpacetimeEvent {
  double q0 = 0.0;  // c * t
  Vec3 q;           // spatial position

  double operator[](int mu) const { return mu == 0 ? q0 : q[mu - 1]; }
  double& operator[](int mu) { return mu == 0 ? q0 : q[mu - 1]; }
};

struct FourVector {
  double v0 = 0.0;
  Vec3 v;

  double operator[](int mu) const { return mu == 0 ? v0 : v[mu - 1]; }
  double& operator[](int mu) { return mu == 0 ? v0 : v[mu - 1]; }
};

struct OneForm {
  std::array<double, 4> a{};  // a[mu] multiplies dq_mu
};

class TwoFormMatrix {
 public:
  TwoFormMatrix() = default;

  // Sets the mu<nu entry and mirrors the sign into nu,mu.
  void set(int mu, int nu, double value) {
    m_[mu][nu] = value;
    m_[nu][mu] = -value;
  }
  double operator()(int mu, int nu) const { return m_[mu][nu]; }

  TwoFormMatrix operator+(const TwoFormMatrix& o) const {
    TwoFormMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m_[i][j] = m_[i][j] + o.m_[i][j];
    return r;
  }
  TwoFormMatrix operator-(const TwoFormMatrix& o) const {
    TwoFormMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m_[i][j] = m_[i][j] - o.m_[i][j];
    return r;
  }
  TwoFormMatrix operator*(double s) const {
    TwoFormMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m_[i][j] = m_[i][j] * s;
    return r;
  }

  // Antisymmetric part of an arbitrary matrix; the constructors of field
  // forms never need it, coordinate transforms use it to kill roundoff
  // asymmetry.
  static TwoFormMatrix antisymmetrize(const std::array<std::array<double, 4>, 4>& raw) {
    TwoFormMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) r.set(i, j, 0.5 * (raw[i][j] - raw[j][i]));
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(m_[i][j]));
    return m;
  }

 private:
  std::array<std::array<double, 4>, 4> m_{};  // zero-initialized
};

struct ThreeForm {
  double s = 0.0;  // coefficient of dV = dq1^dq2^dq3
  Vec3 t;          // t[i] multiplies dq0 ^ dS_i

  ThreeForm operator-(const ThreeForm& o) const { return {s - o.s, t - o.t}; }
  ThreeForm operator-() const { return {-s, -t}; }
  ThreeForm operator*(double k) const { return {s * k, t * k}; }
  double max_abs() const {
    return std::max({std::abs(s), std::abs(t.x), std::abs(t.y), std::abs(t.z)});
  }
};

// Central-difference step for all stencil-based operations. h is in length
// units and must be small against the field variation scale (caller's call).
struct StencilConfig {
  double h = 1e-4;
};

using TwoFormSampler = std::function<TwoFormMatrix(const SpacetimeEvent&)>;
using ThreeFormSampler = std::function<ThreeForm(const SpacetimeEvent&)>;

// Contraction on the first slot: a_nu = sum_mu V_mu omega_{mu nu}, so that
// i_V (dq_mu ^ dq_nu) = V_mu dq_nu - V_nu dq_mu.
OneForm interior_product(const FourVector& v, const TwoFormMatrix& w);

// Coefficient of dq0^dq1^dq2^dq3 in a ^ b:
//   (1/4) sum eps_{alpha beta mu nu} a_{alpha beta} b_{mu nu},  eps_0123 = 1.
double wedge_22(const TwoFormMatrix& a, const TwoFormMatrix& b);

// Plain determinant of the 4x4 coefficient matrix.
double det_2form(const TwoFormMatrix& w);

// Pfaffian of the coefficient matrix, m01*m23 - m02*m13 + m03*m12.
// det_2form == pfaffian^2 for any antisymmetric input.
double pfaffian_2form(const TwoFormMatrix& w);

// Central-difference exterior derivative of a 2-form sampler, O(h^2).
// Component (dF)_{a m n} = d_a F_{mn} - d_m F_{an} + d_n F_{am} repacked as
//   s  = (dF)_{123},  t = ((dF)_{023}, -(dF)_{013}, (dF)_{012}).
// Uses 8 sampler evaluations (x +- h e_mu). Throws NonFinite on bad samples.
ThreeForm exterior_derivative_2form(const TwoFormSampler& f, const SpacetimeEvent& x,
                                    const StencilConfig& cfg);

// Central-difference coefficient of dq0 ^ dV in dJ:  d_0 J.s - div J.t.
// For the current 3-form (s = rho, t = -j/c) this is (1/c) d_t rho + (1/c) div j.
double exterior_derivative_3form(const ThreeFormSampler& j, const SpacetimeEvent& x,
                                 const StencilConfig& cfg);

}  // namespace emforms
