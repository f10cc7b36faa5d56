#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emforms/characteristic.hpp"
#include "emforms/dynamics.hpp"
#include "emforms/em_forms.hpp"
#include "emforms/errors.hpp"
#include "emforms/geometry.hpp"
#include "emforms/lorentz.hpp"
#include "emforms/photon_flow.hpp"
#include "emforms/report.hpp"
#include "emforms/scenarios.hpp"
#include "emforms/topology.hpp"

namespace {

using namespace emforms;
using Clock = std::chrono::steady_clock;

struct Flags {
  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  double h = 1e-3;
  double du = 1e-3;
  double tol = 0.0;  // 0 = per-assertion defaults
  int steps = 1000;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

// Fixed probe events: off the coordinate axes (clear of the Coulomb origin and
// the monopole string) and away from plane-wave field zeros.
const std::vector<SpacetimeEvent> kProbes = {
    {0.2, {0.3, -0.2, 0.4}},
    {0.5, {-0.4, 0.25, 0.3}},
    {0.8, {0.2, 0.5, -0.35}},
    {0.3, {-0.3, -0.4, 0.5}},
};

double tol_or(const Flags& f, double dflt) { return f.tol > 0.0 ? f.tol : dflt; }

double rel(double measured, double expected) {
  return std::abs(measured - expected) / std::max(1.0, std::abs(expected));
}

void attach_common(CLI::App* cmd, Flags& f, bool scenario_required) {
  CLI::Option* sc = cmd->add_option("--scenario", f.scenario_path, "scenario JSON file");
  if (scenario_required) sc->required();
  cmd->add_option("--h", f.h, "stencil step for finite differences");
  cmd->add_option("--du", f.du, "integration step");
  cmd->add_option("--steps", f.steps, "integration step count");
  cmd->add_option("--tol", f.tol, "override the default assertion tolerances");
  f.seed_opt = cmd->add_option("--seed", f.seed, "override the scenario seed");
  cmd->add_option("--out", f.out_path, "write the JSON report to this file");
  cmd->add_option("--format", f.format, "table handling: json (inline) or csv (files)")
      ->check(CLI::IsMember({"json", "csv"}));
}

ScenarioSpec load_spec(const Flags& f) {
  ScenarioSpec spec = load_scenario(f.scenario_path);
  if (f.seed_opt != nullptr && f.seed_opt->count() > 0) spec.seed = f.seed;
  return spec;
}

void echo_parameters(RunReport& rep, const Flags& f) {
  rep.parameters.emplace_back("scenario", f.scenario_path);
  rep.parameters.emplace_back("h", std::to_string(f.h));
  rep.parameters.emplace_back("du", std::to_string(f.du));
  rep.parameters.emplace_back("steps", std::to_string(f.steps));
  rep.parameters.emplace_back("tol", std::to_string(f.tol));
  rep.parameters.emplace_back("seed", std::to_string(f.seed));
  rep.parameters.emplace_back("format", f.format);
}

int finish(RunReport& rep, const Flags& f, Clock::time_point t0) {
  rep.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  const std::string text = rep.to_json();
  if (f.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(f.out_path);
    if (!out) throw ValidationError(f.out_path, "cannot write report file");
    out << text;
  }
  if (f.format == "csv") {
    std::string dir = ".";
    if (!f.out_path.empty()) {
      const std::size_t slash = f.out_path.find_last_of('/');
      if (slash != std::string::npos) dir = f.out_path.substr(0, slash);
    }
    write_tables_csv(rep, dir);
  }
  return rep.passed() ? 0 : 1;
}

// Records the measured convergence order when the residual is above the
// roundoff floor; an identically-satisfied equation has no order to measure.
void check_order(RunReport& rep, const std::string& name, double r_h, double r_h2) {
  if (r_h < 1e-10) return;
  const double order = std::log2(r_h / r_h2);
  rep.check_flag(name, std::abs(order - 2.0) <= 0.5, order, 0.5);
}

// --- verify -------------------------------------------------------------------

int cmd_verify(const Flags& f, Clock::time_point t0) {
  const ScenarioSpec spec = load_spec(f);
  const BuiltScenario b = build(spec);
  RunReport rep;
  rep.command = "verify";
  rep.scenario = spec.name;
  echo_parameters(rep, f);

  const StencilConfig cfg{f.h}, cfg2{f.h / 2};
  const double c = b.constants.c;
  Table residuals{"residuals",
                  {"probe", "first_h", "first_h2", "second_h", "second_h2", "poynting_h",
                   "poynting_h2"},
                  {}};
  Table invariants{"invariants", {"probe", "e_dot_b", "det_f", "det_dual", "wedge"}, {}};

  double id_det = 0, id_dual = 0, id_wedge = 0;
  double r1h = 0, r1h2 = 0, r2h = 0, r2h2 = 0, pyh = 0, pyh2 = 0;
  for (std::size_t i = 0; i < kProbes.size(); ++i) {
    const SpacetimeEvent& x = kProbes[i];
    const EMFieldSample fld = b.field.sample(x);
    const TwoFormMatrix wf = omega_f(fld);
    const TwoFormMatrix wd = omega_f_star(fld, b.medium);
    const double eb = dot(fld.E, fld.B);
    const double eta = b.medium.eta;
    id_det = std::max(id_det, rel(det_2form(wf), eb * eb));
    id_dual = std::max(id_dual, rel(det_2form(wd), eta * eta * eb * eb));
    id_wedge = std::max(id_wedge, rel(wedge_22(wf, wd), eta * norm2(fld.E) - norm2(fld.B)));
    invariants.rows.push_back(
        {double(i), eb, det_2form(wf), det_2form(wd), wedge_22(wf, wd)});

    const double a1 = maxwell_residual_first(b.field, x, cfg).max_abs();
    const double a2 = maxwell_residual_first(b.field, x, cfg2).max_abs();
    const double b1 = maxwell_residual_second(b.field, b.medium, b.source, x, cfg, c).max_abs();
    const double b2 = maxwell_residual_second(b.field, b.medium, b.source, x, cfg2, c).max_abs();
    const double p1 = std::abs(poynting_balance(b.field, b.medium, b.source, x, cfg, c));
    const double p2 = std::abs(poynting_balance(b.field, b.medium, b.source, x, cfg2, c));
    r1h = std::max(r1h, a1);
    r1h2 = std::max(r1h2, a2);
    r2h = std::max(r2h, b1);
    r2h2 = std::max(r2h2, b2);
    pyh = std::max(pyh, p1);
    pyh2 = std::max(pyh2, p2);
    residuals.rows.push_back({double(i), a1, a2, b1, b2, p1, p2});
  }
  rep.tables = {residuals, invariants};

  rep.check("det_identity_rel", id_det, tol_or(f, 1e-10));
  rep.check("det_dual_identity_rel", id_dual, tol_or(f, 1e-10));
  rep.check("wedge_pairing_rel", id_wedge, tol_or(f, 1e-10));
  rep.check("first_group_residual", r1h, tol_or(f, 1e-3));
  rep.check("second_group_residual", r2h, tol_or(f, 1e-3));
  rep.check("poynting_residual", pyh, tol_or(f, 1e-3));
  check_order(rep, "first_group_order", r1h, r1h2);
  check_order(rep, "second_group_order", r2h, r2h2);
  check_order(rep, "poynting_order", pyh, pyh2);
  return finish(rep, f, t0);
}

// --- particle -------------------------------------------------------------------

Trajectory run_particle(const ParticleSpec& part, const EMField& field, const Flags& f,
                        double c) {
  IntegratorConfig cfg;
  cfg.du = f.du;
  cfg.steps = f.steps;
  const ExtendedRhs rhs = make_dyon_rhs(field, part.charges, c);
  const HamiltonianFn monitor = [c](const ExtendedState& s) { return hamiltonian_free(s, c); };
  return integrate(part.state, rhs, cfg, c, monitor);
}

int cmd_particle(const Flags& f, Clock::time_point t0) {
  const ScenarioSpec spec = load_spec(f);
  const BuiltScenario b = build(spec);
  if (b.particles.empty()) throw ValidationError("particles", "scenario has no particles");
  RunReport rep;
  rep.command = "particle";
  rep.scenario = spec.name;
  echo_parameters(rep, f);
  const double c = b.constants.c;

  std::vector<Trajectory> trajectories;
  for (std::size_t i = 0; i < b.particles.size(); ++i) {
    const ParticleSpec& part = b.particles[i];
    const std::string tag = "particle" + std::to_string(i);
    const Trajectory tr = run_particle(part, b.field, f, c);
    trajectories.push_back(tr);

    Table t{"particle_" + std::to_string(i),
            {"u", "q0", "q1", "q2", "q3", "p0", "p1", "p2", "p3", "H"},
            {}};
    for (const TrajectorySample& s : tr.samples)
      t.rows.push_back({s.u, s.state.q.q0, s.state.q.q.x, s.state.q.q.y, s.state.q.q.z,
                        s.state.p.v0, s.state.p.v.x, s.state.p.v.y, s.state.p.v.z,
                        s.hamiltonian});
    rep.tables.push_back(std::move(t));

    const double h0 = tr.samples.front().hamiltonian;
    double h_drift = 0;
    for (const TrajectorySample& s : tr.samples)
      h_drift = std::max(h_drift, std::abs(s.hamiltonian - h0) / std::abs(h0));
    rep.check(tag + "_H_drift_rel", h_drift, tol_or(f, 1e-8));

    if (part.charges.q_e == 0.0 && part.charges.q_m == 0.0) {
      const FourVector p0 = tr.samples.front().state.p;
      double dev = 0;
      for (const TrajectorySample& s : tr.samples)
        for (int mu = 0; mu < 4; ++mu)
          dev = std::max(dev, std::abs(s.state.p[mu] - p0[mu]));
      rep.check(tag + "_momentum_const", dev, 0.0);
    }

    const LabFrameResult lab = lab_frame(tr);
    rep.check(tag + "_velocity_mismatch", lab.max_velocity_mismatch,
              tol_or(f, std::max(10 * f.du * f.du, 1e-10)));

    // Energy theorem dE/dt = q_e E.v + q_m B.v along the actual flow.
    double worst_energy = 0;
    for (std::size_t k = 1; k + 1 < lab.rows.size(); ++k) {
      const LabSample& lo = lab.rows[k - 1];
      const LabSample& mid = lab.rows[k];
      const LabSample& hi = lab.rows[k + 1];
      const double de_dt = (hi.energy - lo.energy) / (hi.t - lo.t);
      const EMFieldSample fld = b.field.sample({c * mid.t, mid.q});
      const double power =
          part.charges.q_e * dot(fld.E, mid.v) + part.charges.q_m * dot(fld.B, mid.v);
      worst_energy = std::max(worst_energy, std::abs(de_dt - power));
    }
    rep.check(tag + "_energy_theorem", worst_energy, tol_or(f, std::max(f.du * f.du, 1e-8)));

    // Analytic circular-orbit oracle for an electric charge in a uniform pure
    // magnetic field entered perpendicular to it.
    if (spec.field.kind == FieldKind::Uniform && norm(spec.field.E) == 0.0 &&
        norm(spec.field.B) > 0.0 && part.charges.q_e != 0.0 && part.charges.q_m == 0.0 &&
        std::abs(dot(part.state.p.v, spec.field.B)) < 1e-14 * norm(spec.field.B)) {
      const Vec3 B = spec.field.B;
      const double radius = norm(part.state.p.v) * c / (std::abs(part.charges.q_e) * norm(B));
      const Vec3 center =
          part.state.q.q + (c / (part.charges.q_e * norm2(B))) * cross(part.state.p.v, B);
      double worst = 0;
      for (const TrajectorySample& s : tr.samples)
        worst = std::max(worst, std::abs(norm(s.state.q.q - center) - radius) / radius);
      rep.check(tag + "_gyro_radius_rel", worst, tol_or(f, 1e-6));
    }
  }

  // A two-particle scenario pairing charges (g, 0) and (0, g) on the same
  // initial state probes the duality: the magnetic particle in (E, B) must
  // trace the electric particle's path through (B, -E).
  if (b.particles.size() == 2) {
    int ie = -1, im = -1;
    const ParticleCharges c0 = b.particles[0].charges, c1 = b.particles[1].charges;
    if (c0.q_m == 0.0 && c1.q_e == 0.0 && c0.q_e == c1.q_m && c0.q_e != 0.0) {
      ie = 0;
      im = 1;
    } else if (c1.q_m == 0.0 && c0.q_e == 0.0 && c1.q_e == c0.q_m && c1.q_e != 0.0) {
      ie = 1;
      im = 0;
    }
    if (ie >= 0) {
      EMField dual;
      dual.sample = [src = b.field.sample](const SpacetimeEvent& x) {
        const EMFieldSample fld = src(x);
        return EMFieldSample{fld.B, -1.0 * fld.E};
      };
      const Trajectory te = run_particle(b.particles[ie], dual, f, c);
      const Trajectory& tm = trajectories[std::size_t(im)];
      double worst = 0;
      for (std::size_t k = 0; k < te.samples.size(); ++k) {
        for (int mu = 0; mu < 4; ++mu) {
          worst = std::max(worst, std::abs(te.samples[k].state.q[mu] - tm.samples[k].state.q[mu]));
          worst = std::max(worst, std::abs(te.samples[k].state.p[mu] - tm.samples[k].state.p[mu]));
        }
      }
      rep.check("duality_pair_match", worst, tol_or(f, 1e-8));
    }
  }
  return finish(rep, f, t0);
}

// --- rays -----------------------------------------------------------------------

int cmd_rays(const Flags& f, Clock::time_point t0) {
  const ScenarioSpec spec = load_spec(f);
  const BuiltScenario b = build(spec);
  if (b.particles.empty())
    throw ValidationError("particles", "rays command reads initial (q, p) from particles");
  RunReport rep;
  rep.command = "rays";
  rep.scenario = spec.name;
  echo_parameters(rep, f);
  const double c = b.constants.c;
  const double t_span = f.du * f.steps;

  for (std::size_t i = 0; i < b.particles.size(); ++i) {
    const std::string tag = "ray" + std::to_string(i);
    const RayState r0{b.particles[i].state.q.q, b.particles[i].state.p.v};
    const std::vector<RayPathSample> path = trace_ray(r0, b.index, t_span, f.steps, c);

    Table t{"ray_" + std::to_string(i),
            {"t", "q1", "q2", "q3", "p1", "p2", "p3", "h_sp"},
            {}};
    for (const RayPathSample& s : path)
      t.rows.push_back({s.t, s.state.q.x, s.state.q.y, s.state.q.z, s.state.p.x, s.state.p.y,
                        s.state.p.z, s.h_sp});
    rep.tables.push_back(std::move(t));

    double drift = 0;
    for (const RayPathSample& s : path)
      drift = std::max(drift, std::abs(s.h_sp - path.front().h_sp) / path.front().h_sp);
    rep.check(tag + "_h_sp_drift_rel", drift, tol_or(f, 1e-8));

    if (!spec.medium.profile) continue;
    const IndexProfileSpec& prof = *spec.medium.profile;

    if (prof.kind == IndexProfileSpec::Kind::Ramp) {
      // Stratified along q3: transverse momentum is a constant of the motion
      // and Snell's law follows from it plus h_sp conservation.
      const RayState& last = path.back().state;
      double p_t_dev = 0;
      for (const RayPathSample& s : path) {
        p_t_dev = std::max(p_t_dev, std::abs(s.state.p.x - r0.p.x));
        p_t_dev = std::max(p_t_dev, std::abs(s.state.p.y - r0.p.y));
      }
      rep.check(tag + "_transverse_p_dev", p_t_dev, tol_or(f, 1e-12));

      const double sin_in = std::hypot(r0.p.x, r0.p.y) / norm(r0.p);
      const double sin_out = std::hypot(last.p.x, last.p.y) / norm(last.p);
      if (sin_in > 1e-12) {
        const double lhs = std::sqrt(b.index.eta(last.q)) * sin_out;
        const double rhs = std::sqrt(b.index.eta(r0.q)) * sin_in;
        rep.check(tag + "_snell_rel", std::abs(lhs / rhs - 1.0), tol_or(f, 1e-3));
      }
    }

    if (prof.kind == IndexProfileSpec::Kind::Grin && prof.alpha != 0.0) {
      // Transverse oscillation period in q3 against the paraxial 2 pi / alpha.
      std::vector<double> crossings;
      for (std::size_t k = 1; k < path.size(); ++k) {
        const double x0 = path[k - 1].state.q.x, x1 = path[k].state.q.x;
        if ((x0 > 0) != (x1 > 0)) {
          const double w = x0 / (x0 - x1);
          crossings.push_back(path[k - 1].state.q.z +
                              w * (path[k].state.q.z - path[k - 1].state.q.z));
        }
      }
      if (crossings.size() < 3) {
        rep.check_flag(tag + "_grin_period_rel", false, double(crossings.size()), 0.0);
      } else {
        const double period =
            2.0 * (crossings.back() - crossings.front()) / double(crossings.size() - 1);
        const double expected = 2.0 * M_PI / prof.alpha;
        rep.check(tag + "_grin_period_rel", std::abs(period - expected) / expected,
                  tol_or(f, 0.01));
      }
    }
  }
  return finish(rep, f, t0);
}

// --- wave -----------------------------------------------------------------------

int cmd_wave(const Flags& f, Clock::time_point t0) {
  const ScenarioSpec spec = load_spec(f);
  if (spec.field.kind != FieldKind::PlaneWave && !spec.grid)
    throw ValidationError("field", "wave command needs a plane_wave field or a grid block");
  BuiltScenario b = build(spec);
  RunReport rep;
  rep.command = "wave";
  rep.scenario = spec.name;
  echo_parameters(rep, f);

  if (spec.grid) {
    PhotonGridState& grid = *b.grid;
    EvolveConfig ec;
    ec.steps = f.steps;
    ec.dt = f.du;
    ec.monitor_every = std::max(1, f.steps / 100);
    ec.hbar = b.constants.hbar;
    const std::vector<MonitorRow> rows = evolve(grid, b.index, b.constants.c, ec);

    Table monitor{"grid_monitor", {"step", "t", "total_n", "H", "w_balance"}, {}};
    for (const MonitorRow& r : rows)
      monitor.rows.push_back({double(r.step), r.t, r.total_density, r.hamiltonian, r.w_balance});
    rep.tables.push_back(std::move(monitor));

    bool periodic = true;
    for (int d = 0; d < 3; ++d)
      if (grid.grid.n[d] > 1 && grid.grid.bc[d] != Boundary::Periodic) periodic = false;
    if (periodic) {
      double mass_drift = 0;
      for (const MonitorRow& r : rows)
        mass_drift = std::max(mass_drift, std::abs(r.total_density - rows.front().total_density));
      rep.check("grid_total_density_drift", mass_drift, tol_or(f, 1e-12 * f.steps));
    }
    double h_drift = 0;
    for (const MonitorRow& r : rows)
      h_drift = std::max(h_drift, std::abs(r.hamiltonian - rows.front().hamiltonian) /
                                      std::abs(rows.front().hamiltonian));
    rep.check("grid_H_drift_rel", h_drift, tol_or(f, 1e-3));
  }

  if (spec.field.kind != FieldKind::PlaneWave) return finish(rep, f, t0);

  const Vec3 k = spec.field.k;
  const Vec3 P = spec.field.polarization;
  const double k0 = norm(k) / std::sqrt(b.medium.eta);
  const WaveData wave{[k, k0](const SpacetimeEvent& x) { return dot(k, x.q) - k0 * x.q0; },
                      [P](const SpacetimeEvent&) { return P; }};
  const StencilConfig cfg{f.h};
  // Null-ness of the discretized wave field is only as good as the stencil.
  const double null_tol = std::max(100.0 * f.h * f.h, 1e-6);

  Table probes{"wave_probes", {"probe", "k0", "k_norm", "align", "disp", "V3"}, {}};
  double eik = 0, align = 0, disp = 0, contraction = 0, v_norm = 0;
  for (std::size_t i = 0; i < kProbes.size(); ++i) {
    const SpacetimeEvent& x = kProbes[i];
    eik = std::max(eik, std::abs(eikonal_residual(wave.phi, b.medium, x, cfg)));
    const auto [a, d] = dispersion_check(wave, b.medium, x, cfg, null_tol);
    align = std::max(align, std::abs(a));
    disp = std::max(disp, std::abs(d));

    const EMFieldSample fld = b.field.sample(x);
    const auto vec = characteristic_vector(fld, b.medium);
    double v3 = 0.0;
    if (vec) {
      v3 = vec->V.z;
      const OneForm c1 = interior_product(vec->as_four_vector(), omega_f(fld));
      const OneForm c2 = interior_product(vec->as_four_vector(), omega_f_star(fld, b.medium));
      for (int mu = 0; mu < 4; ++mu) {
        contraction = std::max(contraction, std::abs(c1.a[mu]));
        contraction = std::max(contraction, std::abs(c2.a[mu]));
      }
      v_norm = std::max(v_norm,
                        std::abs(norm2(vec->V) - vec->V0 * vec->V0 / b.medium.eta));
    }
    const WaveVectors wv = wave_vectors(wave.phi, x, cfg);
    probes.rows.push_back({double(i), wv.k0, norm(wv.k), a, d, v3});
  }
  rep.tables.push_back(std::move(probes));
  rep.check("eikonal_residual", eik, tol_or(f, 1e-8));
  rep.check("dispersion_alignment", align, tol_or(f, 1e-8));
  rep.check("dispersion_residual", disp, tol_or(f, 1e-7));
  rep.check("contraction_residual", contraction, tol_or(f, 1e-10));
  rep.check("v_squared_identity", v_norm, tol_or(f, 1e-10));
  return finish(rep, f, t0);
}

// --- monopole ---------------------------------------------------------------------

int cmd_monopole(const Flags& f, Clock::time_point t0) {
  const ScenarioSpec spec = load_spec(f);
  if (spec.field.kind != FieldKind::MonopoleB)
    throw ValidationError("field", "monopole command needs a monopole_b scenario");
  if (spec.field.charge == 0.0) throw ValidationError("field.charge", "must be nonzero");
  build(spec);  // runs the axis validation
  RunReport rep;
  rep.command = "monopole";
  rep.scenario = spec.name;
  echo_parameters(rep, f);

  const double q_m = spec.medium.mu_r * spec.field.charge;  // total flux
  const double a = q_m / (4.0 * M_PI);
  const double flux = flux_integral(a, SphereMesh{512, 1024});
  rep.check("flux_match_rel", flux / (4.0 * M_PI * a) - 1.0, tol_or(f, 1e-10));

  Table loops{"monopole_loops", {"theta", "loop", "flux"}, {}};
  double loop_dev = 0;
  for (double theta : {M_PI / 4, M_PI / 2, 3 * M_PI / 4}) {
    const double loop = loop_integral(a, theta, 4096);
    loop_dev = std::max(loop_dev, std::abs(loop - flux));
    loops.rows.push_back({theta, loop, flux});
  }
  rep.check("loop_vs_flux", loop_dev, tol_or(f, 1e-9));

  const auto [n, res] = dirac_check(spec.constants.e_unit, q_m, spec.constants.h_planck,
                                    spec.constants.c);
  rep.check("dirac_integer_residual", res, tol_or(f, 1e-12));
  Table quant{"quantization", {"q_e", "q_m", "n", "residual"}, {}};
  quant.rows.push_back({spec.constants.e_unit, q_m, double(n), res});
  rep.tables = {loops, quant};
  return finish(rep, f, t0);
}

// --- lorentz ----------------------------------------------------------------------

double urand_pm(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

Vec3 random_vec(std::mt19937_64& rng) {
  return {urand_pm(rng), urand_pm(rng), urand_pm(rng)};
}

Vec3 random_unit(std::mt19937_64& rng) {
  Vec3 v = random_vec(rng);
  if (norm(v) < 1e-6) v = {1, 0, 0};
  return (1.0 / norm(v)) * v;
}

LorentzMatrix random_proper(std::mt19937_64& rng, double beta_max) {
  const LorentzMatrix r1 = rotation(random_unit(rng), urand_pm(rng) * M_PI);
  const LorentzMatrix r2 = rotation(random_unit(rng), urand_pm(rng) * M_PI);
  const double b = beta_max * 0.999 * std::abs(urand_pm(rng));
  return r2 * boost(b * random_unit(rng)) * r1;
}

int cmd_lorentz(const Flags& f, Clock::time_point t0) {
  RunReport rep;
  rep.command = "lorentz";
  rep.scenario = f.scenario_path.empty() ? "(none)" : f.scenario_path;
  echo_parameters(rep, f);

  std::mt19937_64 rng(f.seed_opt != nullptr && f.seed_opt->count() > 0 ? f.seed : 1);
  const int trials = 1000;
  double worst_dual = 0, worst_pf = 0, worst_wedge = 0, worst_orth = 0;
  for (int i = 0; i < trials; ++i) {
    const LorentzMatrix lam = random_proper(rng, 0.99);
    const EMFieldSample fld{random_vec(rng), random_vec(rng)};
    worst_dual = std::max(worst_dual, dual_invariance_residual(lam, fld));
    const auto [d_pf, d_wedge] = scalar_invariants_check(lam, fld);
    worst_pf = std::max(worst_pf, d_pf);
    worst_wedge = std::max(worst_wedge, d_wedge);
    worst_orth = std::max(worst_orth, lam.orthogonality_residual());
  }
  rep.check("vacuum_dual_invariance", worst_dual, tol_or(f, 1e-10));
  rep.check("pfaffian_invariance", worst_pf, tol_or(f, 1e-10));
  rep.check("wedge_invariance", worst_wedge, tol_or(f, 1e-10));
  rep.check("orthogonality_residual", worst_orth, tol_or(f, 1e-11));

  // Stored counterexample: the boosted dual form disagrees with the dual of
  // the boosted fields as soon as eta != 1.
  const double broken = dual_invariance_residual_eta(boost({0.6, 0, 0}),
                                                     {{0, 1, 0}, {0, 0, 0}}, 2.0);
  rep.check_flag("medium_dual_noninvariance", broken > 0.1, broken, 0.1);

  Table t{"lorentz_suite",
          {"trials", "worst_dual", "worst_pfaffian", "worst_wedge", "counterexample"},
          {{double(trials), worst_dual, worst_pf, worst_wedge, broken}}};
  rep.tables = {t};
  return finish(rep, f, t0);
}

// --- characteristic -----------------------------------------------------------------

int cmd_characteristic(const Flags& f, Clock::time_point t0) {
  const ScenarioSpec spec = load_spec(f);
  const BuiltScenario b = build(spec);
  RunReport rep;
  rep.command = "characteristic";
  rep.scenario = spec.name;
  echo_parameters(rep, f);

  Table t{"characteristic_probes", {"probe", "exists", "V1", "V2", "V3"}, {}};
  int evaluated = 0, found = 0;
  double contraction = 0, v_norm = 0;
  for (std::size_t i = 0; i < kProbes.size(); ++i) {
    const EMFieldSample fld = b.field.sample(kProbes[i]);
    std::optional<CharacteristicVector> vec;
    try {
      vec = characteristic_vector(fld, b.medium);
    } catch (const DegenerateField&) {
      continue;  // vanishing field at this probe: nothing to test
    }
    ++evaluated;
    if (!vec) {
      t.rows.push_back({double(i), 0.0, 0.0, 0.0, 0.0});
      continue;
    }
    ++found;
    t.rows.push_back({double(i), 1.0, vec->V.x, vec->V.y, vec->V.z});
    const OneForm c1 = interior_product(vec->as_four_vector(), omega_f(fld));
    const OneForm c2 = interior_product(vec->as_four_vector(), omega_f_star(fld, b.medium));
    for (int mu = 0; mu < 4; ++mu) {
      contraction = std::max(contraction, std::abs(c1.a[mu]));
      contraction = std::max(contraction, std::abs(c2.a[mu]));
    }
    v_norm = std::max(v_norm, std::abs(norm2(vec->V) - vec->V0 * vec->V0 / b.medium.eta));
  }
  rep.tables = {t};
  rep.check_flag("existence_uniform_across_probes", found == 0 || found == evaluated,
                 double(found), double(evaluated));
  if (found > 0) {
    rep.check("contraction_residual", contraction, tol_or(f, 1e-10));
    rep.check("v_squared_identity", v_norm, tol_or(f, 1e-10));
  } else {
    rep.check_flag("non_null_has_no_characteristic", true, 0.0, 0.0);
  }
  return finish(rep, f, t0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"electromagnetic 2-form toolkit: verify identities, integrate charges and "
               "dyons, trace rays, evolve the photon grid, and run quantization and "
               "invariance suites"};
  // --h is the stencil step, so help keeps only its long spelling.
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  Flags fv, fp, fr, fw, fm, fl, fc;
  CLI::App* verify = app.add_subcommand("verify", "Maxwell residuals and algebraic identities");
  attach_common(verify, fv, true);
  CLI::App* particle = app.add_subcommand("particle", "extended phase-space trajectories");
  attach_common(particle, fp, true);
  CLI::App* rays = app.add_subcommand("rays", "single-photon ray tracing");
  attach_common(rays, fr, true);
  CLI::App* wave = app.add_subcommand("wave", "eikonal and dispersion checks");
  attach_common(wave, fw, true);
  CLI::App* monopole = app.add_subcommand("monopole", "flux integrality and Dirac condition");
  attach_common(monopole, fm, true);
  CLI::App* lorentz = app.add_subcommand("lorentz", "random-transformation invariance suite");
  attach_common(lorentz, fl, false);
  CLI::App* characteristic =
      app.add_subcommand("characteristic", "characteristic vector of the scenario field");
  attach_common(characteristic, fc, true);

  CLI11_PARSE(app, argc, argv);

  const Clock::time_point t0 = Clock::now();
  try {
    if (app.got_subcommand(verify)) return cmd_verify(fv, t0);
    if (app.got_subcommand(particle)) return cmd_particle(fp, t0);
    if (app.got_subcommand(rays)) return cmd_rays(fr, t0);
    if (app.got_subcommand(wave)) return cmd_wave(fw, t0);
    if (app.got_subcommand(monopole)) return cmd_monopole(fm, t0);
    if (app.got_subcommand(lorentz)) return cmd_lorentz(fl, t0);
    if (app.got_subcommand(characteristic)) return cmd_characteristic(fc, t0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
