// Acceptance gate: nine criteria, one line each, exit 0 iff all pass.
// argv[1] = path to the emtool binary, argv[2] = path to the scenario catalog.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emforms/characteristic.hpp"
#include "emforms/dynamics.hpp"
#include "emforms/em_forms.hpp"
#include "emforms/errors.hpp"
#include "emforms/geometry.hpp"
#include "emforms/lorentz.hpp"
#include "emforms/photon_flow.hpp"
#include "emforms/scenarios.hpp"
#include "emforms/topology.hpp"

namespace {

using namespace emforms;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double urand(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double urand_pm(std::mt19937_64& rng) { return 2.0 * urand(rng) - 1.0; }
Vec3 random_vec(std::mt19937_64& rng) { return {urand_pm(rng), urand_pm(rng), urand_pm(rng)}; }

Vec3 random_unit(std::mt19937_64& rng) {
  Vec3 v = random_vec(rng);
  if (norm(v) < 1e-6) v = {1, 0, 0};
  return (1.0 / norm(v)) * v;
}

double rel(double measured, double expected) {
  return std::abs(measured - expected) / std::max(1.0, std::abs(expected));
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

const std::vector<SpacetimeEvent> kProbes = {
    {0.2, {0.3, -0.2, 0.4}},
    {0.5, {-0.4, 0.25, 0.3}},
    {0.8, {0.2, 0.5, -0.35}},
    {0.3, {-0.3, -0.4, 0.5}},
};

// --- 1: algebraic identities -------------------------------------------------

Outcome identities() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const EMFieldSample f{random_vec(rng), random_vec(rng)};
    const double eta = 0.25 + 3.75 * urand(rng);
    const Medium m(eta, 1.0);
    const TwoFormMatrix wf = omega_f(f);
    const TwoFormMatrix wd = omega_f_star(f, m);
    const double eb = dot(f.E, f.B);
    worst = std::max(worst, rel(det_2form(wf), eb * eb));
    worst = std::max(worst, rel(det_2form(wd), eta * eta * eb * eb));
    worst = std::max(worst, rel(wedge_22(wf, wd), eta * norm2(f.E) - norm2(f.B)));
  }
  return {worst < 1e-10, "worst rel " + sci(worst) + " over 1000 samples"};
}

// --- 2: exactness of the field form ------------------------------------------

Outcome exactness() {
  double lo = 10, hi = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioSpec spec;
    spec.field.kind = FieldKind::FromPotentials;
    spec.seed = seed;
    const BuiltScenario b = build(spec);
    const TwoFormSampler samp = [f = b.field.sample](const SpacetimeEvent& x) {
      return omega_f(f(x));
    };
    double r_h = 0, r_h2 = 0;
    for (const SpacetimeEvent& x : kProbes) {
      r_h = std::max(r_h, exterior_derivative_2form(samp, x, {2e-2}).max_abs());
      r_h2 = std::max(r_h2, exterior_derivative_2form(samp, x, {1e-2}).max_abs());
    }
    const double order = std::log2(r_h / r_h2);
    lo = std::min(lo, order);
    hi = std::max(hi, order);
  }
  return {lo >= 1.8 && hi <= 2.2,
          "d(omega) convergence orders in [" + sci(lo) + ", " + sci(hi) + "] across 5 potentials"};
}

// --- 3: Maxwell residuals ------------------------------------------------------

ScenarioSpec plane_wave_spec(double eps_r, double mu_r) {
  ScenarioSpec spec;
  spec.medium.eps_r = eps_r;
  spec.medium.mu_r = mu_r;
  spec.field.kind = FieldKind::PlaneWave;
  spec.field.amplitude = 0.8;
  spec.field.k = {0, 0, 2};
  spec.field.polarization = {1, 0, 0};
  return spec;
}

Outcome maxwell_residuals() {
  // Source-free wave at eta = 1: the residuals sit at the roundoff floor for
  // any h (the stencil errors of the two groups cancel against each other),
  // so magnitude is checkable but order is not.
  const BuiltScenario vac = build(plane_wave_spec(1.0, 1.0));
  double floor_resid = 0.0;
  for (const SpacetimeEvent& x : kProbes) {
    floor_resid = std::max(floor_resid, maxwell_residual_first(vac.field, x, {1e-3}).max_abs());
    floor_resid = std::max(
        floor_resid,
        maxwell_residual_second(vac.field, vac.medium, vac.source, x, {1e-3}, 1.0).max_abs());
    floor_resid = std::max(
        floor_resid, std::abs(poynting_balance(vac.field, vac.medium, vac.source, x, {1e-3}, 1.0)));
  }

  // The same wave in a dielectric has h^2 truncation in every residual, which
  // makes the convergence order measurable.
  const BuiltScenario med = build(plane_wave_spec(1.5, 1.5));
  double r1 = 0, r1h = 0, r2 = 0, r2h = 0, py = 0, pyh = 0;
  for (const SpacetimeEvent& x : kProbes) {
    r1 = std::max(r1, maxwell_residual_first(med.field, x, {1e-3}).max_abs());
    r1h = std::max(r1h, maxwell_residual_first(med.field, x, {5e-4}).max_abs());
    r2 = std::max(r2, maxwell_residual_second(med.field, med.medium, med.source, x, {1e-3}, 1.0)
                          .max_abs());
    r2h = std::max(r2h, maxwell_residual_second(med.field, med.medium, med.source, x, {5e-4}, 1.0)
                            .max_abs());
    py = std::max(py, std::abs(poynting_balance(med.field, med.medium, med.source, x, {1e-3}, 1.0)));
    pyh = std::max(pyh,
                   std::abs(poynting_balance(med.field, med.medium, med.source, x, {5e-4}, 1.0)));
  }
  const double o1 = std::log2(r1 / r1h), o2 = std::log2(r2 / r2h), o3 = std::log2(py / pyh);

  // Static checks on the Coulomb field away from the origin.
  ScenarioSpec cs;
  cs.field.kind = FieldKind::Coulomb;
  cs.field.charge = 2.0;
  const BuiltScenario cb = build(cs);
  double coul = 0.0;
  for (const SpacetimeEvent& x : kProbes) {
    coul = std::max(coul, maxwell_residual_first(cb.field, x, {1e-4}).max_abs());
    coul = std::max(
        coul, maxwell_residual_second(cb.field, cb.medium, cb.source, x, {1e-4}, 1.0).max_abs());
    coul = std::max(coul,
                    std::abs(poynting_balance(cb.field, cb.medium, cb.source, x, {1e-4}, 1.0)));
  }

  const bool orders_ok = std::abs(o1 - 2) <= 0.2 && std::abs(o2 - 2) <= 0.2 && std::abs(o3 - 2) <= 0.2;
  const bool pass = floor_resid < 1e-9 && orders_ok && coul < 1e-5;
  return {pass, "vacuum wave floor " + sci(floor_resid) + "; orders " + sci(o1) + "/" + sci(o2) +
                    "/" + sci(o3) + "; coulomb worst " + sci(coul)};
}

// --- 4: monopole flux and quantization ----------------------------------------

Outcome monopole_flux() {
  double worst_flux = 0, worst_loop = 0;
  for (double a : {0.25, 1.0, 7.0}) {
    const double flux = flux_integral(a, SphereMesh{512, 1024});
    worst_flux = std::max(worst_flux, std::abs(flux / (4.0 * M_PI * a) - 1.0));
    for (double theta : {M_PI / 4, M_PI / 2, 3 * M_PI / 4})
      worst_loop = std::max(worst_loop, std::abs(loop_integral(a, theta, 4096) - flux));
  }

  bool dirac_ok = true;
  const double cases[3][4] = {{2, 1, 1, 1}, {1, 1, 1, 1}, {3, 2.5, 2.5, 3}};
  const long long expected[3] = {2, 1, 1};
  for (int i = 0; i < 3; ++i) {
    const auto [n, res] = dirac_check(cases[i][0], cases[i][1], cases[i][2], cases[i][3]);
    if (n != expected[i] || res != 0.0) dirac_ok = false;
  }
  return {worst_flux < 1e-10 && worst_loop < 1e-9 && dirac_ok,
          "flux rel " + sci(worst_flux) + ", loop dev " + sci(worst_loop) +
              ", dirac integers exact"};
}

// --- 5: Lorentz invariance -------------------------------------------------------

Outcome lorentz_invariance() {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const LorentzMatrix r1 = rotation(random_unit(rng), urand_pm(rng) * M_PI);
    const LorentzMatrix r2 = rotation(random_unit(rng), urand_pm(rng) * M_PI);
    const LorentzMatrix lam = r2 * boost((0.99 * urand(rng)) * random_unit(rng)) * r1;
    const EMFieldSample f{random_vec(rng), random_vec(rng)};
    worst = std::max(worst, dual_invariance_residual(lam, f));
  }
  const double broken =
      dual_invariance_residual_eta(boost({0.6, 0, 0}), {{0, 1, 0}, {0, 0, 0}}, 2.0);
  return {worst < 1e-10 && broken >= 0.1,
          "vacuum worst " + sci(worst) + "; eta=2 counterexample " + sci(broken)};
}

// --- 6: extended-phase-space dynamics ---------------------------------------------

EMField uniform_field(const Vec3& E, const Vec3& B) {
  EMField f;
  f.sample = [E, B](const SpacetimeEvent&) { return EMFieldSample{E, B}; };
  return f;
}

Outcome dynamics_suite() {
  // Free particle: momenta bitwise constant.
  const ExtendedState free0{{0, {0, 0, 0}}, {-std::sqrt(2.0), {1, 0, 0}}};
  const Trajectory tf = integrate(free0, make_dyon_rhs(uniform_field({}, {}), {0, 0}, 1.0),
                                  {1e-3, 1000, IntegrationMethod::RK4, 1e-10}, 1.0, nullptr);
  bool bitwise = true;
  for (const TrajectorySample& s : tf.samples)
    for (int mu = 0; mu < 4; ++mu)
      if (s.state.p[mu] != free0.p[mu]) bitwise = false;

  // Gyro orbit: unit charge, B = z-hat, |p| = 1: circle of radius 1 about
  // (0,-1,0), one u-period 2*pi.
  const ExtendedState g0{{0, {0, 0, 0}}, {-std::sqrt(2.0), {1, 0, 0}}};
  const Trajectory tg =
      integrate(g0, make_dyon_rhs(uniform_field({}, {0, 0, 1}), {1.0, 0.0}, 1.0),
                {2.0 * M_PI / 1000, 1000, IntegrationMethod::RK4, 1e-10}, 1.0, nullptr);
  double radius_err = 0.0;
  for (const TrajectorySample& s : tg.samples)
    radius_err = std::max(radius_err, std::abs(norm(s.state.q.q - Vec3{0, -1, 0}) - 1.0));

  // Energy theorem along the flow, dE/dt = q_e E . v by centered differences.
  const Vec3 E{0.3, 0.1, 0.0};
  const ExtendedState e0{{0, {0, 0, 0}}, {-2.0, {0.2, -0.1, 0.4}}};
  const Trajectory te = integrate(e0, make_dyon_rhs(uniform_field(E, {0, 0, 0.2}), {1.0, 0.0}, 1.0),
                                  {1e-4, 500, IntegrationMethod::RK4, 1e-10}, 1.0, nullptr);
  const LabFrameResult lab = lab_frame(te);
  double energy_resid = 0.0;
  for (std::size_t i = 1; i + 1 < lab.rows.size(); ++i) {
    const double dt = lab.rows[i + 1].t - lab.rows[i - 1].t;
    const double dE = lab.rows[i + 1].energy - lab.rows[i - 1].energy;
    energy_resid = std::max(energy_resid, std::abs(dE / dt - dot(E, lab.rows[i].v)));
  }

  // Duality pair: magnetic charge in (E,B) matches electric charge in (B,-E).
  const Vec3 Ed{0.3, 0.1, 0.0}, Bd{0.2, -0.4, 0.5};
  const ExtendedState d0{{0, {0.5, 0, 0}}, {-2.0, {0.1, 0.3, -0.2}}};
  const IntegratorConfig dcfg{1e-3, 500, IntegrationMethod::RK4, 1e-10};
  const Trajectory ta =
      integrate(d0, make_dyon_rhs(uniform_field(Ed, Bd), {0.0, 1.3}, 1.0), dcfg, 1.0, nullptr);
  const Trajectory tb = integrate(d0, make_dyon_rhs(uniform_field(Bd, -1.0 * Ed), {1.3, 0.0}, 1.0),
                                  dcfg, 1.0, nullptr);
  double duality = 0.0;
  for (std::size_t i = 0; i < ta.samples.size(); ++i) {
    const ExtendedState& a = ta.samples[i].state;
    const ExtendedState& b = tb.samples[i].state;
    duality = std::max({duality, std::abs(a.q.q0 - b.q.q0), norm(a.q.q - b.q.q),
                        std::abs(a.p.v0 - b.p.v0), norm(a.p.v - b.p.v)});
  }

  const bool pass = bitwise && radius_err < 1e-6 && energy_resid < 1e-8 && duality < 1e-8;
  return {pass, std::string("p ") + (bitwise ? "bitwise" : "DRIFTED") + ", radius err " +
                    sci(radius_err) + ", energy " + sci(energy_resid) + ", duality " +
                    sci(duality)};
}

// --- 7: characteristic vector and eikonal -------------------------------------------

Outcome characteristic_suite() {
  // Null plane wave in a dielectric: V exists, annihilates both forms, and
  // squares to V0^2/eta.
  const BuiltScenario b = build(plane_wave_spec(1.5, 1.5));
  double contraction = 0, v_norm = 0;
  bool exists = true;
  for (const SpacetimeEvent& x : kProbes) {
    const EMFieldSample f = b.field.sample(x);
    const auto vec = characteristic_vector(f, b.medium);
    if (!vec) {
      exists = false;
      continue;
    }
    const OneForm c1 = interior_product(vec->as_four_vector(), omega_f(f));
    const OneForm c2 = interior_product(vec->as_four_vector(), omega_f_star(f, b.medium));
    for (int mu = 0; mu < 4; ++mu)
      contraction = std::max({contraction, std::abs(c1.a[mu]), std::abs(c2.a[mu])});
    v_norm = std::max(v_norm, std::abs(norm2(vec->V) - vec->V0 * vec->V0 / b.medium.eta));
  }

  // Non-null fields produce no characteristic vector.
  const Medium vac;
  const bool none_a = !characteristic_vector({{1, 0, 0}, {0, 2, 0}}, vac).has_value();
  const bool none_b = !characteristic_vector({{1, 0, 0}, {2, 0, 0}}, vac).has_value();

  // Dispersion residuals shrink at order 2 on a curved (spherical) phase.
  const WaveData w{[](const SpacetimeEvent& x) { return norm(x.q) - x.q0; },
                   [](const SpacetimeEvent& x) {
                     const Vec3 k = (1.0 / norm(x.q)) * x.q;
                     const Vec3 p = cross(k, Vec3{0, 0, 1});
                     return (1.0 / norm(p)) * p;
                   }};
  const SpacetimeEvent x{0.0, {1.0, 0.3, -0.2}};
  const auto [a1, d1] = dispersion_check(w, vac, x, {1e-2}, 1e-2);
  const auto [a2, d2] = dispersion_check(w, vac, x, {5e-3}, 1e-2);
  const double order = std::log2(std::abs(d1) / std::abs(d2));
  const auto [a3, d3] = dispersion_check(w, vac, x, {1e-4});
  (void)a1;
  (void)a2;

  const bool pass = exists && contraction < 1e-10 && v_norm < 1e-10 && none_a && none_b &&
                    std::abs(order - 2) <= 0.2 && std::abs(a3) < 1e-8 && std::abs(d3) < 1e-7;
  return {pass, "contraction " + sci(contraction) + ", V^2 residual " + sci(v_norm) +
                    ", dispersion order " + sci(order) + ", non-null -> none"};
}

// --- 8: photon flow -------------------------------------------------------------------

IndexField ramp_index(double eta1, double eta2, double z0, double width) {
  return {[=](const Vec3& q) {
            const double s = 1.0 / (1.0 + std::exp(-(q.z - z0) / width));
            return eta1 + (eta2 - eta1) * s;
          },
          [=](const Vec3& q) {
            const double s = 1.0 / (1.0 + std::exp(-(q.z - z0) / width));
            return Vec3{0.0, 0.0, (eta2 - eta1) * s * (1.0 - s) / width};
          }};
}

Outcome photon_flow_suite(const std::string& dir) {
  // Periodic blob advection from the shipped scenario: total density drift per
  // step and functional-Hamiltonian drift over 1000 steps at dx = 1/256.
  const ScenarioSpec spec = load_scenario(dir + "/blob_advection.json");
  BuiltScenario b = build(spec);
  PhotonGridState& grid = *b.grid;
  EvolveConfig ec;
  ec.steps = 1000;
  ec.dt = 1.0 / 1024.0;
  ec.monitor_every = 10;
  const std::vector<MonitorRow> rows = evolve(grid, b.index, 1.0, ec);
  double mass_drift = 0, h_drift = 0;
  for (const MonitorRow& r : rows) {
    mass_drift = std::max(mass_drift, std::abs(r.total_density / rows.front().total_density - 1.0));
    h_drift = std::max(h_drift, std::abs(r.hamiltonian - rows.front().hamiltonian) /
                                    std::abs(rows.front().hamiltonian));
  }
  const double mass_per_step = mass_drift / ec.steps;

  // Snell across the smooth index step, 30 degrees incidence.
  const IndexField ramp = ramp_index(1.0, 2.25, 0.0, 0.05);
  const std::vector<RayPathSample> snell_path =
      trace_ray({{0, 0, -0.5}, {0.5, 0, std::sqrt(3.0) / 2.0}}, ramp, 1.5, 3000, 1.0);
  const RayState& last = snell_path.back().state;
  const double sin_out = std::hypot(last.p.x, last.p.y) / norm(last.p);
  const double snell = std::abs(std::sqrt(2.25) * sin_out / (1.0 * 0.5) - 1.0);

  // GRIN oscillation period against the paraxial 2 pi / alpha.
  const double n0 = 1.5, alpha = 0.5;
  const IndexField grin{
      [=](const Vec3& q) { return n0 * n0 * (1.0 - alpha * alpha * q.x * q.x); },
      [=](const Vec3& q) { return Vec3{-2.0 * n0 * n0 * alpha * alpha * q.x, 0.0, 0.0}; }};
  const std::vector<RayPathSample> grin_path =
      trace_ray({{1e-3, 0, 0}, {0, 0, 1}}, grin, 30.0, 30000, 1.0);
  std::vector<double> crossings;
  for (std::size_t i = 1; i < grin_path.size(); ++i) {
    const double x0 = grin_path[i - 1].state.q.x, x1 = grin_path[i].state.q.x;
    if ((x0 > 0) != (x1 > 0))
      crossings.push_back(grin_path[i - 1].state.q.z +
                          x0 / (x0 - x1) *
                              (grin_path[i].state.q.z - grin_path[i - 1].state.q.z));
  }
  double period_err = 1.0;
  if (crossings.size() >= 3) {
    const double period =
        2.0 * (crossings.back() - crossings.front()) / double(crossings.size() - 1);
    period_err = std::abs(period - 2.0 * M_PI / alpha) / (2.0 * M_PI / alpha);
  }

  const bool pass = mass_per_step < 1e-12 && h_drift < 1e-3 && snell < 1e-3 && period_err < 0.01;
  return {pass, "mass/step " + sci(mass_per_step) + ", H drift " + sci(h_drift) + ", snell " +
                    sci(snell) + ", grin period " + sci(period_err)};
}

// --- 9: end-to-end CLI -------------------------------------------------------------------

int run_command(const std::string& cmd) {
  const int ret = std::system(cmd.c_str());
  if (ret == -1) return -1;
  return WIFEXITED(ret) ? WEXITSTATUS(ret) : -1;
}

Outcome end_to_end(const std::string& emtool, const std::string& dir) {
  const std::string report_path = "acceptance_verify_report.json";
  const int good = run_command("\"" + emtool + "\" verify --scenario \"" + dir +
                               "/plane_wave.json\" --out " + report_path);

  bool populated = false;
  std::string shape = "report unreadable";
  std::ifstream in(report_path);
  if (in) {
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      populated = j.at("command") == "verify" && !j.at("scenario").get<std::string>().empty() &&
                  j.at("assertions").size() >= 6 && j.at("tables").size() >= 2 &&
                  j.at("passed").get<bool>() && j.at("wall_time_s").get<double>() >= 0.0;
      shape = "report has " + std::to_string(j.at("assertions").size()) + " assertions, " +
              std::to_string(j.at("tables").size()) + " tables";
    } catch (const std::exception& e) {
      shape = e.what();
    }
  }

  const int bad = run_command("\"" + emtool + "\" verify --scenario \"" + dir +
                              "/plane_wave_bad_source.json\" --out acceptance_bad_report.json");

  const bool pass = good == 0 && populated && bad == 1;
  return {pass, "good exit " + std::to_string(good) + ", corrupted exit " + std::to_string(bad) +
                    ", " + shape};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <emtool-path> <scenarios-dir>\n";
    return 2;
  }
  const std::string emtool = argv[1], dir = argv[2];

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"algebraic det/wedge identities, 1000 random fields", [] { return identities(); }},
      {"exactness: d(omega_f) converges at order 2 for 5 random potentials",
       [] { return exactness(); }},
      {"Maxwell residuals: plane wave at order 2, Coulomb static checks",
       [] { return maxwell_residuals(); }},
      {"monopole flux integrality and Dirac condition", [] { return monopole_flux(); }},
      {"Lorentz invariance at eta = 1 and its eta = 2 counterexample",
       [] { return lorentz_invariance(); }},
      {"dynamics: free/gyro/energy-theorem/duality", [] { return dynamics_suite(); }},
      {"characteristic vector and eikonal dispersion", [] { return characteristic_suite(); }},
      {"photon flow: conservation, H drift, Snell, GRIN",
       [&dir] { return photon_flow_suite(dir); }},
      {"end-to-end: verify exits 0 on the shipped wave, 1 when corrupted",
       [&] { return end_to_end(emtool, dir); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "[" << (i + 1) << "/9] " << criteria[i].first << " ... "
              << (o.pass ? "PASS" : "FAIL") << "  (" << o.detail << ")\n";
  }
  std::cout << (failed == 0 ? "acceptance: 9/9 criteria passed\n"
                            : "acceptance: " + std::to_string(9 - failed) + "/9 criteria passed\n");
  return failed == 0 ? 0 : 1;
}
