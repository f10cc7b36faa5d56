#include "emforms/dynamics.hpp"

#include <cmath>
#include <limits>

#include "emforms/errors.hpp"

namespace emforms {

double hamiltonian_free(const ExtendedState& s, double c) {
  const double p0 = s.p.v0, p2 = norm2(s.p.v);
  const double disc = p0 * p0 - p2;
  if (disc < 0.0) throw SpacelikeMomentum(p0, p2);
  return -c * std::sqrt(disc);
}

double photon_extended_hamiltonian(const ExtendedState& s, double eta, double c) {
  const double p0 = s.p.v0, p2 = norm2(s.p.v);
  const double disc = p0 * p0 - p2 / eta;
  if (disc < 0.0) throw BelowShell();
  return -c * std::sqrt(disc);
}

ExtendedDeriv dyon_rhs(const ExtendedState& s, const EMFieldSample& f,
                       const ParticleCharges& ch, double c) {
  const double p0 = s.p.v0, p2 = norm2(s.p.v);
  const double disc = p0 * p0 - p2;
  if (disc <= 0.0) throw SpacelikeMomentum(p0, p2);
  const double R = std::sqrt(disc);

  ExtendedDeriv d;
  d.q0p = -c * p0 / R;
  d.qp = (c / R) * s.p.v;
  d.pp = (ch.q_e / c) * (cross(d.qp, f.B) + d.q0p * f.E) +
         (ch.q_m / c) * (d.q0p * f.B - cross(d.qp, f.E));
  d.p0p = -(ch.q_e / c) * dot(f.E, d.qp) - (ch.q_m / c) * dot(f.B, d.qp);
  return d;
}

ExtendedRhs make_dyon_rhs(const EMField& field, const ParticleCharges& ch, double c) {
  return [field, ch, c](const ExtendedState& s) {
    return dyon_rhs(s, field.sample(s.q), ch, c);
  };
}

namespace {

ExtendedState advance(const ExtendedState& s, const ExtendedDeriv& d, double a) {
  ExtendedState r = s;
  r.q.q0 += a * d.q0p;
  r.q.q += a * d.qp;
  r.p.v0 += a * d.p0p;
  r.p.v += a * d.pp;
  return r;
}

ExtendedDeriv combine(std::initializer_list<std::pair<double, const ExtendedDeriv*>> terms) {
  ExtendedDeriv out;
  for (const auto& [w, k] : terms) {
    out.q0p += w * k->q0p;
    out.qp += w * k->qp;
    out.p0p += w * k->p0p;
    out.pp += w * k->pp;
  }
  return out;
}

ExtendedState rk4_step(const ExtendedState& s, const ExtendedRhs& rhs, double du) {
  const ExtendedDeriv k1 = rhs(s);
  const ExtendedDeriv k2 = rhs(advance(s, k1, du / 2));
  const ExtendedDeriv k3 = rhs(advance(s, k2, du / 2));
  const ExtendedDeriv k4 = rhs(advance(s, k3, du));
  const ExtendedDeriv sum = combine({{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
  return advance(s, sum, du / 6.0);
}

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// 4th-order weights for the embedded error estimate.
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct DP45Result {
  ExtendedState next;
  double error;  // scaled max-norm of the embedded difference
};

DP45Result dp45_step(const ExtendedState& s, const ExtendedRhs& rhs, double du, double tol) {
  const ExtendedDeriv k1 = rhs(s);
  const ExtendedDeriv k2 = rhs(advance(s, k1, A21 * du));
  const ExtendedDeriv k3 = rhs(advance(s, combine({{A31, &k1}, {A32, &k2}}), du));
  const ExtendedDeriv k4 = rhs(advance(s, combine({{A41, &k1}, {A42, &k2}, {A43, &k3}}), du));
  const ExtendedDeriv k5 =
      rhs(advance(s, combine({{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}), du));
  const ExtendedDeriv k6 = rhs(
      advance(s, combine({{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}), du));
  const ExtendedDeriv b =
      combine({{B1, &k1}, {B3, &k3}, {B4, &k4}, {B5, &k5}, {B6, &k6}});
  const ExtendedState next = advance(s, b, du);
  const ExtendedDeriv k7 = rhs(next);
  const ExtendedDeriv e = combine(
      {{E1, &k1}, {E3, &k3}, {E4, &k4}, {E5, &k5}, {E6, &k6}, {E7, &k7}});

  auto scaled = [&](double err, double y0, double y1) {
    const double sc = tol * (1.0 + std::max(std::abs(y0), std::abs(y1)));
    return std::abs(err * du) / sc;
  };
  double emax = scaled(e.q0p, s.q.q0, next.q.q0);
  emax = std::max(emax, scaled(e.p0p, s.p.v0, next.p.v0));
  for (int i = 0; i < 3; ++i) {
    emax = std::max(emax, scaled(e.qp[i], s.q.q[i], next.q.q[i]));
    emax = std::max(emax, scaled(e.pp[i], s.p.v[i], next.p.v[i]));
  }
  return {next, emax};
}

// Integrates from u over [0, span] adaptively, returning the state at u+span.
ExtendedState dp45_interval(ExtendedState s, const ExtendedRhs& rhs, double span, double tol) {
  double remaining = span;
  double du = span;  // optimistic start; controller shrinks as needed
  const double du_floor = span * 1e-14;
  while (remaining > 0.0) {
    du = std::min(du, remaining);
    const DP45Result r = dp45_step(s, rhs, du, tol);
    if (r.error <= 1.0) {
      s = r.next;
      remaining -= du;
      const double grow = r.error == 0.0 ? 5.0 : 0.9 * std::pow(r.error, -0.2);
      du *= std::min(5.0, std::max(0.2, grow));
    } else {
      du *= std::max(0.2, 0.9 * std::pow(r.error, -0.2));
      if (du < du_floor) throw StepFailure(du);
    }
  }
  return s;
}

}  // namespace

Trajectory integrate(const ExtendedState& s0, const ExtendedRhs& rhs,
                     const IntegratorConfig& cfg, double c, const HamiltonianFn& monitor) {
  Trajectory out;
  out.c = c;
  out.samples.reserve(static_cast<size_t>(cfg.steps) + 1);

  auto record = [&](double u, const ExtendedState& s) {
    const double h = monitor ? monitor(s) : std::numeric_limits<double>::quiet_NaN();
    out.samples.push_back({u, s, h});
  };

  ExtendedState s = s0;
  record(0.0, s);
  for (int k = 1; k <= cfg.steps; ++k) {
    if (cfg.method == IntegrationMethod::RK4)
      s = rk4_step(s, rhs, cfg.du);
    else
      s = dp45_interval(s, rhs, cfg.du, cfg.tolerance);
    record(k * cfg.du, s);
  }
  return out;
}

LabFrameResult lab_frame(const Trajectory& tr) {
  const double c = tr.c;
  LabFrameResult out;
  out.rows.reserve(tr.samples.size());
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const ExtendedState& s = tr.samples[i].state;
    if (i > 0 && !(s.q.q0 > tr.samples[i - 1].state.q.q0)) throw NonMonotonicTime();
    LabSample row;
    row.t = s.q.q0 / c;
    row.q = s.q.q;
    row.v = (-c / s.p.v0) * s.p.v;
    row.p = s.p.v;
    row.energy = -c * s.p.v0;
    out.rows.push_back(row);
  }
  // Second velocity formula c dq/dq0 from the samples themselves.
  for (size_t i = 1; i + 1 < tr.samples.size(); ++i) {
    const ExtendedState& a = tr.samples[i - 1].state;
    const ExtendedState& b = tr.samples[i + 1].state;
    const Vec3 v_fd = (c / (b.q.q0 - a.q.q0)) * (b.q.q - a.q.q);
    const Vec3 diff = v_fd - out.rows[i].v;
    out.max_velocity_mismatch = std::max(
        out.max_velocity_mismatch,
        std::max({std::abs(diff.x), std::abs(diff.y), std::abs(diff.z)}));
  }
  return out;
}

}  // namespace emforms
