#include "emforms/em_forms.hpp"

#include <cmath>

#include "emforms/errors.hpp"

namespace emforms {

TwoFormMatrix omega_f(const EMFieldSample& f) {
  TwoFormMatrix w;
  w.set(0, 1, f.E.x);
  w.set(0, 2, f.E.y);
  w.set(0, 3, f.E.z);
  w.set(1, 2, -f.B.z);
  w.set(1, 3, f.B.y);
  w.set(2, 3, -f.B.x);
  return w;
}

TwoFormMatrix omega_f_star(const EMFieldSample& f, const Medium& m) {
  TwoFormMatrix w;
  w.set(0, 1, f.B.x);
  w.set(0, 2, f.B.y);
  w.set(0, 3, f.B.z);
  w.set(1, 2, m.eta * f.E.z);
  w.set(1, 3, -m.eta * f.E.y);
  w.set(2, 3, m.eta * f.E.x);
  return w;
}

namespace {

// Components of the potential 1-form: theta_0 = A0 = -V, theta_i = A_i.
double theta_comp(const PotentialSample& p, int mu) {
  switch (mu) {
    case 0: return -p.V;
    case 1: return p.A.x;
    case 2: return p.A.y;
    default: return p.A.z;
  }
}

}  // namespace

TwoFormMatrix omega_f_from_potentials(const EMField& field, const SpacetimeEvent& x,
                                      const StencilConfig& cfg) {
  if (!field.potential) throw MissingPotential();
  const PotentialSampler& pot = *field.potential;
  const double h = cfg.h;

  // d theta has coefficients (d_mu theta_nu - d_nu theta_mu); the field 2-form
  // is the negative of that, matching omega_f for consistent potentials.
  double dtheta[4][4] = {};
  PotentialSample plus[4], minus[4];
  for (int mu = 0; mu < 4; ++mu) {
    SpacetimeEvent xp = x, xm = x;
    if (mu == 0) {
      xp.q0 += h;
      xm.q0 -= h;
    } else {
      xp.q[mu - 1] += h;
      xm.q[mu - 1] -= h;
    }
    plus[mu] = pot(xp);
    minus[mu] = pot(xm);
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      dtheta[mu][nu] = (theta_comp(plus[mu], nu) - theta_comp(minus[mu], nu)) / (2.0 * h);

  std::array<std::array<double, 4>, 4> raw{};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      raw[mu][nu] = -(dtheta[mu][nu] - dtheta[nu][mu]);
      if (!std::isfinite(raw[mu][nu])) throw NonFinite("omega_f_from_potentials");
    }
  return TwoFormMatrix::antisymmetrize(raw);
}

ThreeForm current_3form(const SourceSample& s, double c) {
  return ThreeForm{s.rho, (-1.0 / c) * s.j};
}

ThreeForm maxwell_residual_first(const EMField& field, const SpacetimeEvent& x,
                                 const StencilConfig& cfg) {
  TwoFormSampler ws = [&field](const SpacetimeEvent& y) { return omega_f(field.sample(y)); };
  // d(omega_f) carries s = -div B, t = -(curl E + d0 B) in this layout.
  return -exterior_derivative_2form(ws, x, cfg);
}

ThreeForm maxwell_residual_second(const EMField& field, const Medium& m,
                                  const SourceSampler& src, const SpacetimeEvent& x,
                                  const StencilConfig& cfg, double c) {
  TwoFormSampler ws = [&field, &m](const SpacetimeEvent& y) {
    return omega_f_star(field.sample(y), m);
  };
  ThreeForm d = exterior_derivative_2form(ws, x, cfg);
  ThreeForm J = current_3form(src(x), c);
  return d - J * m.mu_r;
}

double poynting_balance(const EMField& field, const Medium& m, const SourceSampler& src,
                        const SpacetimeEvent& x, const StencilConfig& cfg, double c) {
  const double h = cfg.h;
  auto density = [&](const SpacetimeEvent& y) {
    EMFieldSample f = field.sample(y);
    return 0.5 * (m.eps_r * dot(f.E, f.E) + dot(f.B, f.B) / m.mu_r);
  };
  auto flux = [&](const SpacetimeEvent& y) {
    EMFieldSample f = field.sample(y);
    return (c / m.mu_r) * cross(f.E, f.B);
  };

  SpacetimeEvent tp = x, tm = x;
  tp.q0 += h;
  tm.q0 -= h;
  // q0 = c t, so d_t = c d_{q0}.
  double dw_dt = c * (density(tp) - density(tm)) / (2.0 * h);

  double divY = 0.0;
  for (int i = 0; i < 3; ++i) {
    SpacetimeEvent xp = x, xm = x;
    xp.q[i] += h;
    xm.q[i] -= h;
    divY += (flux(xp)[i] - flux(xm)[i]) / (2.0 * h);
  }

  EMFieldSample f = field.sample(x);
  double r = dw_dt + divY + dot(f.E, src(x).j);
  if (!std::isfinite(r)) throw NonFinite("poynting_balance");
  return r;
}

std::pair<double, double> field_invariants(const EMFieldSample& f, const Medium& m) {
  // Pf(omega_f) = -E.B, so the signed first invariant is -Pf.
  double eb = -pfaffian_2form(omega_f(f));
  double w = wedge_22(omega_f_star(f, m), omega_f(f));  // eta E^2 - B^2
  return {eb, w};
}

}  // namespace emforms
