#include "emforms/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include <json.hpp>

#include "emforms/errors.hpp"
#include "emforms/topology.hpp"

namespace emforms {

namespace {

using nlohmann::json;

// --- polynomial potentials --------------------------------------------------

struct Poly4 {
  std::vector<PolyTerm> terms;

  double eval(const SpacetimeEvent& x) const {
    double sum = 0.0;
    for (const PolyTerm& t : terms) {
      double v = t.coeff;
      for (int mu = 0; mu < 4; ++mu)
        for (int e = 0; e < t.exp[mu]; ++e) v *= x[mu];
      sum += v;
    }
    return sum;
  }

  Poly4 derivative(int mu) const {
    Poly4 d;
    for (const PolyTerm& t : terms) {
      if (t.exp[mu] == 0) continue;
      PolyTerm dt = t;
      dt.coeff *= t.exp[mu];
      dt.exp[mu] -= 1;
      d.terms.push_back(dt);
    }
    return d;
  }
};

// All monomials of total degree <= 4 with coefficients uniform in [-1/2, 1/2],
// drawn from a seeded generator; bit-reproducible across platforms (the raw
// engine output is portable, distributions are not, so we scale manually).
// Degree 4 keeps the quartic terms that make central-difference truncation
// visible: cubics are differenced exactly, which would turn every stencil
// convergence study on these potentials into a roundoff measurement.
Poly4 random_poly4(std::mt19937_64& rng) {
  Poly4 p;
  for (int e0 = 0; e0 <= 4; ++e0)
    for (int e1 = 0; e1 + e0 <= 4; ++e1)
      for (int e2 = 0; e2 + e1 + e0 <= 4; ++e2)
        for (int e3 = 0; e3 + e2 + e1 + e0 <= 4; ++e3) {
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          p.terms.push_back({u - 0.5, {e0, e1, e2, e3}});
        }
  return p;
}

EMField field_from_poly_potentials(const std::array<Poly4, 4>& A) {
  // dd[mu][nu] = d(A_nu)/d(q_mu)
  auto dd = std::make_shared<std::array<std::array<Poly4, 4>, 4>>();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) (*dd)[mu][nu] = A[nu].derivative(mu);
  auto pots = std::make_shared<std::array<Poly4, 4>>(A);

  EMField f;
  f.sample = [dd](const SpacetimeEvent& x) {
    auto D = [&](int mu, int nu) { return (*dd)[mu][nu].eval(x); };
    EMFieldSample s;
    // E_i = d_i A_0 - d_0 A_i,  B = curl A
    s.E = {D(1, 0) - D(0, 1), D(2, 0) - D(0, 2), D(3, 0) - D(0, 3)};
    s.B = {D(2, 3) - D(3, 2), D(3, 1) - D(1, 3), D(1, 2) - D(2, 1)};
    return s;
  };
  f.potential = [pots](const SpacetimeEvent& x) {
    return PotentialSample{{(*pots)[1].eval(x), (*pots)[2].eval(x), (*pots)[3].eval(x)},
                           -(*pots)[0].eval(x)};
  };
  return f;
}

Poly4 poly_from_terms(const std::vector<PolyTerm>& terms) { return Poly4{terms}; }

// --- field builders ----------------------------------------------------------

EMField build_uniform(const Vec3& E, const Vec3& B) {
  EMField f;
  f.sample = [E, B](const SpacetimeEvent&) { return EMFieldSample{E, B}; };
  // V = -E.q and A = (B x r)/2 reproduce the constant fields exactly.
  f.potential = [E, B](const SpacetimeEvent& x) {
    return PotentialSample{0.5 * cross(B, x.q), -dot(E, x.q)};
  };
  return f;
}

EMField build_plane_wave(const FieldSpec& fs, double eta) {
  const double kn = norm(fs.k);
  const double k0 = kn / std::sqrt(eta);
  const Vec3 k = fs.k;
  const Vec3 P = fs.polarization;
  const double a = fs.amplitude;
  EMField f;
  f.sample = [k, k0, P, a](const SpacetimeEvent& x) {
    const double psi = dot(k, x.q) - k0 * x.q0;
    const double cp = std::cos(psi);
    return EMFieldSample{(a * cp) * P, (a * cp / k0) * cross(k, P)};
  };
  f.potential = [k, k0, P, a](const SpacetimeEvent& x) {
    const double psi = dot(k, x.q) - k0 * x.q0;
    return PotentialSample{(a / k0 * std::sin(psi)) * P, 0.0};
  };
  return f;
}

EMField build_coulomb(double q, double eps_r) {
  EMField f;
  const double scale = q / (4.0 * 3.14159265358979323846 * eps_r);
  f.sample = [scale](const SpacetimeEvent& x) {
    const double r = norm(x.q);
    return EMFieldSample{(scale / (r * r * r)) * x.q, {}};
  };
  f.potential = [scale](const SpacetimeEvent& x) {
    return PotentialSample{{}, scale / norm(x.q)};
  };
  return f;
}

EMField build_monopole_b(double q, double mu_r, const Vec3& axis) {
  const double strength = mu_r * q / (4.0 * 3.14159265358979323846);
  EMField f;
  f.sample = [strength](const SpacetimeEvent& x) {
    const double r = norm(x.q);
    return EMFieldSample{{}, (strength / (r * r * r)) * x.q};
  };
  // String potential: B = curl G away from the excluded ray.
  const MonopoleConfig mc{strength, axis};
  f.potential = [mc](const SpacetimeEvent& x) {
    return PotentialSample{monopole_potential(mc, x.q), 0.0};
  };
  return f;
}

EMField build_custom(const FieldSpec& fs) {
  auto polys = std::make_shared<std::array<Poly4, 6>>();
  for (int i = 0; i < 3; ++i) {
    (*polys)[i] = poly_from_terms(fs.custom_E[i]);
    (*polys)[i + 3] = poly_from_terms(fs.custom_B[i]);
  }
  EMField f;
  f.sample = [polys](const SpacetimeEvent& x) {
    EMFieldSample s;
    for (int i = 0; i < 3; ++i) {
      s.E[i] = (*polys)[i].eval(x);
      s.B[i] = (*polys)[i + 3].eval(x);
    }
    return s;
  };
  return f;
}

IndexField build_index(const MediumSpec& m) {
  if (!m.profile) return uniform_index(m.eps_r * m.mu_r);
  const IndexProfileSpec p = *m.profile;
  switch (p.kind) {
    case IndexProfileSpec::Kind::Uniform:
      return uniform_index(p.eta);
    case IndexProfileSpec::Kind::Grin:
      return {[p](const Vec3& q) { return p.n0 * p.n0 * (1.0 - p.alpha * p.alpha * q.x * q.x); },
              [p](const Vec3& q) {
                return Vec3{-2.0 * p.n0 * p.n0 * p.alpha * p.alpha * q.x, 0.0, 0.0};
              }};
    case IndexProfileSpec::Kind::Ramp:
    default:
      return {[p](const Vec3& q) {
                const double s = 1.0 / (1.0 + std::exp(-(q.z - p.z0) / p.width));
                return p.eta1 + (p.eta2 - p.eta1) * s;
              },
              [p](const Vec3& q) {
                const double s = 1.0 / (1.0 + std::exp(-(q.z - p.z0) / p.width));
                return Vec3{0.0, 0.0, (p.eta2 - p.eta1) * s * (1.0 - s) / p.width};
              }};
  }
}

PhotonGridState build_grid(const GridInitSpec& gs) {
  PhotonGridState s;
  s.grid = gs.grid;
  s.k_bg = gs.k_bg;
  const std::size_t count = s.grid.cell_count();
  s.phi.assign(count, 0.0);
  s.n.assign(count, 0.0);
  for (int k = 0; k < s.grid.n[2]; ++k)
    for (int j = 0; j < s.grid.n[1]; ++j)
      for (int i = 0; i < s.grid.n[0]; ++i) {
        const std::size_t ci = s.grid.index(i, j, k);
        if (gs.density == GridInitSpec::DensityInit::Uniform) {
          s.n[ci] = gs.density_value;
        } else {
          const Vec3 d = s.grid.center(i, j, k) - gs.blob_center;
          s.n[ci] = gs.density_value * std::exp(-norm2(d) / (2.0 * gs.blob_sigma * gs.blob_sigma));
        }
      }
  s.validate();
  return s;
}

}  // namespace

BuiltScenario build(const ScenarioSpec& spec) {
  BuiltScenario out;
  out.constants = spec.constants;
  out.seed = spec.seed;
  out.medium = Medium(spec.medium.eps_r, spec.medium.mu_r);
  out.index = build_index(spec.medium);
  out.particles = spec.particles;

  switch (spec.field.kind) {
    case FieldKind::Uniform:
      out.field = build_uniform(spec.field.E, spec.field.B);
      break;
    case FieldKind::PlaneWave: {
      if (norm(spec.field.k) == 0.0)
        throw ValidationError("field.k", "plane wave needs a nonzero wave vector");
      const double kp = std::abs(dot(spec.field.k, spec.field.polarization));
      if (kp > 1e-9 * norm(spec.field.k) * norm(spec.field.polarization))
        throw ValidationError("field.polarization", "must be transverse to k");
      out.field = build_plane_wave(spec.field, out.medium.eta);
      break;
    }
    case FieldKind::Coulomb:
      out.field = build_coulomb(spec.field.charge, spec.medium.eps_r);
      break;
    case FieldKind::MonopoleB: {
      const double an = norm(spec.field.axis);
      if (std::abs(an - 1.0) > 1e-12)
        throw ValidationError("field.axis", "string axis must be a unit vector");
      out.field = build_monopole_b(spec.field.charge, spec.medium.mu_r, spec.field.axis);
      break;
    }
    case FieldKind::FromPotentials: {
      if (spec.field.potential_name != "random_poly4")
        throw ValidationError("field.potential", "unknown potential name: " + spec.field.potential_name);
      std::mt19937_64 rng(spec.seed);
      std::array<Poly4, 4> A;
      for (int mu = 0; mu < 4; ++mu) A[mu] = random_poly4(rng);
      out.field = field_from_poly_potentials(A);
      break;
    }
    case FieldKind::Custom:
      out.field = build_custom(spec.field);
      break;
  }

  if (spec.source) {
    const SourceSpec s = *spec.source;
    out.source = [s](const SpacetimeEvent&) { return SourceSample{s.rho, s.j}; };
  } else {
    out.source = [](const SpacetimeEvent&) { return SourceSample{}; };
  }

  if (spec.grid) out.grid = build_grid(*spec.grid);
  return out;
}

// --- JSON layer ---------------------------------------------------------------

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path, what);
}

void check_keys(const json& o, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

double num(const json& o, const std::string& path, const char* key, double fallback) {
  if (!o.contains(key)) return fallback;
  const json& v = o.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

Vec3 vec3(const json& o, const std::string& path, const char* key, const Vec3& fallback) {
  if (!o.contains(key)) return fallback;
  const json& v = o.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number())
    fail(path + "." + key, "expected an array of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::vector<PolyTerm> poly_terms(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of [coeff, e0, e1, e2, e3] rows");
  std::vector<PolyTerm> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& row = v[i];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != 5) fail(rp, "expected [coeff, e0, e1, e2, e3]");
    PolyTerm t;
    if (!row[0].is_number()) fail(rp, "coefficient must be a number");
    t.coeff = row[0].get<double>();
    for (int mu = 0; mu < 4; ++mu) {
      if (!row[mu + 1].is_number_integer()) fail(rp, "exponents must be integers");
      const int e = row[mu + 1].get<int>();
      if (e < 0 || e > 8) fail(rp, "exponents must be in [0, 8]");
      t.exp[mu] = e;
    }
    out.push_back(t);
  }
  return out;
}

FieldSpec parse_field(const json& o) {
  if (!o.is_object()) fail("field", "expected an object");
  if (!o.contains("type")) fail("field.type", "required");
  const std::string type = o.at("type").get<std::string>();
  FieldSpec f;
  if (type == "uniform") {
    check_keys(o, "field", {"type", "E", "B"});
    f.kind = FieldKind::Uniform;
    f.E = vec3(o, "field", "E", {});
    f.B = vec3(o, "field", "B", {});
  } else if (type == "plane_wave") {
    check_keys(o, "field", {"type", "amplitude", "k", "polarization"});
    f.kind = FieldKind::PlaneWave;
    f.amplitude = num(o, "field", "amplitude", 1.0);
    f.k = vec3(o, "field", "k", {0, 0, 1});
    f.polarization = vec3(o, "field", "polarization", {1, 0, 0});
  } else if (type == "coulomb") {
    check_keys(o, "field", {"type", "charge"});
    f.kind = FieldKind::Coulomb;
    f.charge = num(o, "field", "charge", 1.0);
  } else if (type == "monopole_b") {
    check_keys(o, "field", {"type", "charge", "axis"});
    f.kind = FieldKind::MonopoleB;
    f.charge = num(o, "field", "charge", 1.0);
    f.axis = vec3(o, "field", "axis", {0, 0, 1});
  } else if (type == "from_potentials") {
    check_keys(o, "field", {"type", "potential"});
    f.kind = FieldKind::FromPotentials;
    f.potential_name = o.contains("potential") ? o.at("potential").get<std::string>()
                                               : std::string("random_poly4");
  } else if (type == "custom") {
    check_keys(o, "field", {"type", "E1", "E2", "E3", "B1", "B2", "B3"});
    f.kind = FieldKind::Custom;
    const char* keys[6] = {"E1", "E2", "E3", "B1", "B2", "B3"};
    for (int i = 0; i < 6; ++i) {
      if (!o.contains(keys[i])) continue;
      auto terms = poly_terms(o.at(keys[i]), std::string("field.") + keys[i]);
      if (i < 3)
        f.custom_E[i] = std::move(terms);
      else
        f.custom_B[i - 3] = std::move(terms);
    }
  } else {
    fail("field.type", "unknown field type: " + type);
  }
  return f;
}

IndexProfileSpec parse_profile(const json& o) {
  if (!o.is_object() || !o.contains("type")) fail("medium.index_profile.type", "required");
  const std::string type = o.at("type").get<std::string>();
  IndexProfileSpec p;
  if (type == "uniform") {
    check_keys(o, "medium.index_profile", {"type", "eta"});
    p.kind = IndexProfileSpec::Kind::Uniform;
    p.eta = num(o, "medium.index_profile", "eta", 1.0);
    if (!(p.eta > 0)) fail("medium.index_profile.eta", "must be > 0");
  } else if (type == "grin") {
    check_keys(o, "medium.index_profile", {"type", "n0", "alpha"});
    p.kind = IndexProfileSpec::Kind::Grin;
    p.n0 = num(o, "medium.index_profile", "n0", 1.0);
    p.alpha = num(o, "medium.index_profile", "alpha", 0.0);
  } else if (type == "ramp") {
    check_keys(o, "medium.index_profile", {"type", "eta1", "eta2", "z0", "width"});
    p.kind = IndexProfileSpec::Kind::Ramp;
    p.eta1 = num(o, "medium.index_profile", "eta1", 1.0);
    p.eta2 = num(o, "medium.index_profile", "eta2", 1.0);
    p.z0 = num(o, "medium.index_profile", "z0", 0.0);
    p.width = num(o, "medium.index_profile", "width", 1.0);
    if (!(p.width > 0)) fail("medium.index_profile.width", "must be > 0");
  } else {
    fail("medium.index_profile.type", "unknown profile type: " + type);
  }
  return p;
}

GridInitSpec parse_grid(const json& o) {
  check_keys(o, "grid",
             {"dims", "n", "dx", "origin", "bc", "k_bg", "density"});
  GridInitSpec g;
  g.grid.dims = static_cast<int>(num(o, "grid", "dims", 1));
  const Vec3 nv = vec3(o, "grid", "n", {1, 1, 1});
  const Vec3 dxv = vec3(o, "grid", "dx", {1, 1, 1});
  const Vec3 ov = vec3(o, "grid", "origin", {});
  for (int d = 0; d < 3; ++d) {
    g.grid.n[d] = static_cast<int>(nv[d]);
    g.grid.dx[d] = dxv[d];
    g.grid.origin[d] = ov[d];
  }
  if (o.contains("bc")) {
    const json& bc = o.at("bc");
    if (!bc.is_array() || bc.size() != 3) fail("grid.bc", "expected 3 entries");
    for (int d = 0; d < 3; ++d) {
      const std::string b = bc[d].get<std::string>();
      if (b == "periodic")
        g.grid.bc[d] = Boundary::Periodic;
      else if (b == "outflow")
        g.grid.bc[d] = Boundary::Outflow;
      else
        fail("grid.bc", "must be periodic or outflow");
    }
  }
  g.k_bg = vec3(o, "grid", "k_bg", {});
  if (o.contains("density")) {
    const json& dv = o.at("density");
    if (!dv.is_object() || !dv.contains("type")) fail("grid.density.type", "required");
    const std::string type = dv.at("type").get<std::string>();
    if (type == "uniform") {
      check_keys(dv, "grid.density", {"type", "value"});
      g.density = GridInitSpec::DensityInit::Uniform;
      g.density_value = num(dv, "grid.density", "value", 1.0);
    } else if (type == "gaussian") {
      check_keys(dv, "grid.density", {"type", "amplitude", "center", "sigma"});
      g.density = GridInitSpec::DensityInit::Gaussian;
      g.density_value = num(dv, "grid.density", "amplitude", 1.0);
      g.blob_center = vec3(dv, "grid.density", "center", {});
      g.blob_sigma = num(dv, "grid.density", "sigma", 0.1);
      if (!(g.blob_sigma > 0)) fail("grid.density.sigma", "must be > 0");
    } else {
      fail("grid.density.type", "unknown density init: " + type);
    }
  }
  return g;
}

json poly_terms_json(const std::vector<PolyTerm>& terms) {
  json rows = json::array();
  for (const PolyTerm& t : terms)
    rows.push_back({t.coeff, t.exp[0], t.exp[1], t.exp[2], t.exp[3]});
  return rows;
}

json vec3_json(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

namespace {

ScenarioSpec parse_validated(const json& root) {
  if (!root.is_object()) throw ValidationError("", "top level must be an object");
  check_keys(root, "",
             {"schema_version", "name", "constants", "medium", "field", "source", "particles",
              "grid", "seed"});

  ScenarioSpec spec;
  if (!root.contains("schema_version")) fail("schema_version", "required");
  spec.schema_version = root.at("schema_version").get<int>();
  if (spec.schema_version != 1) fail("schema_version", "only version 1 is supported");
  spec.name = root.contains("name") ? root.at("name").get<std::string>() : "";

  if (root.contains("constants")) {
    const json& c = root.at("constants");
    check_keys(c, "constants", {"c", "hbar", "h_planck", "e_unit"});
    spec.constants.c = num(c, "constants", "c", 1.0);
    spec.constants.hbar = num(c, "constants", "hbar", 1.0);
    spec.constants.h_planck = num(c, "constants", "h_planck", 1.0);
    spec.constants.e_unit = num(c, "constants", "e_unit", 1.0);
    if (!(spec.constants.c > 0)) fail("constants.c", "must be > 0");
  }

  if (root.contains("medium")) {
    const json& m = root.at("medium");
    check_keys(m, "medium", {"eps_r", "mu_r", "index_profile"});
    spec.medium.eps_r = num(m, "medium", "eps_r", 1.0);
    spec.medium.mu_r = num(m, "medium", "mu_r", 1.0);
    if (!(spec.medium.eps_r > 0)) fail("medium.eps_r", "must be > 0");
    if (!(spec.medium.mu_r > 0)) fail("medium.mu_r", "must be > 0");
    if (m.contains("index_profile")) spec.medium.profile = parse_profile(m.at("index_profile"));
  }

  if (!root.contains("field")) fail("field", "required");
  spec.field = parse_field(root.at("field"));

  if (root.contains("source")) {
    const json& s = root.at("source");
    check_keys(s, "source", {"rho", "j"});
    spec.source = SourceSpec{num(s, "source", "rho", 0.0), vec3(s, "source", "j", {})};
  }

  if (root.contains("particles")) {
    const json& ps = root.at("particles");
    if (!ps.is_array()) fail("particles", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string path = "particles[" + std::to_string(i) + "]";
      const json& p = ps[i];
      if (!p.is_object()) fail(path, "expected an object");
      check_keys(p, path, {"q0", "q", "p0", "p", "q_e", "q_m"});
      if (!p.contains("p0")) fail(path + ".p0", "required (no rest-state default)");
      ParticleSpec part;
      part.state.q.q0 = num(p, path, "q0", 0.0);
      part.state.q.q = vec3(p, path, "q", {});
      part.state.p.v0 = num(p, path, "p0", -1.0);
      part.state.p.v = vec3(p, path, "p", {});
      part.charges.q_e = num(p, path, "q_e", 0.0);
      part.charges.q_m = num(p, path, "q_m", 0.0);
      spec.particles.push_back(part);
    }
  }

  if (root.contains("grid")) spec.grid = parse_grid(root.at("grid"));
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned() && !root.at("seed").is_number_integer())
      fail("seed", "expected an integer");
    spec.seed = root.at("seed").get<std::uint64_t>();
  }
  return spec;
}

}  // namespace

ScenarioSpec parse(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Map the byte offset to line/column for the diagnostic.
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, e.what());
  }
  try {
    return parse_validated(root);
  } catch (const json::exception& e) {
    // Typed access on a wrongly-shaped document (e.g. a string where an
    // object was expected) lands here; report it as a validation failure.
    throw ValidationError("", e.what());
  }
}

std::string serialize(const ScenarioSpec& spec) {
  json root;
  root["schema_version"] = spec.schema_version;
  root["name"] = spec.name;
  root["constants"] = {{"c", spec.constants.c},
                       {"hbar", spec.constants.hbar},
                       {"h_planck", spec.constants.h_planck},
                       {"e_unit", spec.constants.e_unit}};
  json medium = {{"eps_r", spec.medium.eps_r}, {"mu_r", spec.medium.mu_r}};
  if (spec.medium.profile) {
    const IndexProfileSpec& p = *spec.medium.profile;
    json prof;
    switch (p.kind) {
      case IndexProfileSpec::Kind::Uniform:
        prof = {{"type", "uniform"}, {"eta", p.eta}};
        break;
      case IndexProfileSpec::Kind::Grin:
        prof = {{"type", "grin"}, {"n0", p.n0}, {"alpha", p.alpha}};
        break;
      case IndexProfileSpec::Kind::Ramp:
        prof = {{"type", "ramp"}, {"eta1", p.eta1}, {"eta2", p.eta2}, {"z0", p.z0},
                {"width", p.width}};
        break;
    }
    medium["index_profile"] = prof;
  }
  root["medium"] = medium;

  json field;
  switch (spec.field.kind) {
    case FieldKind::Uniform:
      field = {{"type", "uniform"}, {"E", vec3_json(spec.field.E)}, {"B", vec3_json(spec.field.B)}};
      break;
    case FieldKind::PlaneWave:
      field = {{"type", "plane_wave"},
               {"amplitude", spec.field.amplitude},
               {"k", vec3_json(spec.field.k)},
               {"polarization", vec3_json(spec.field.polarization)}};
      break;
    case FieldKind::Coulomb:
      field = {{"type", "coulomb"}, {"charge", spec.field.charge}};
      break;
    case FieldKind::MonopoleB:
      field = {{"type", "monopole_b"}, {"charge", spec.field.charge},
               {"axis", vec3_json(spec.field.axis)}};
      break;
    case FieldKind::FromPotentials:
      field = {{"type", "from_potentials"}, {"potential", spec.field.potential_name}};
      break;
    case FieldKind::Custom: {
      field = {{"type", "custom"}};
      const char* keys[6] = {"E1", "E2", "E3", "B1", "B2", "B3"};
      for (int i = 0; i < 3; ++i) {
        if (!spec.field.custom_E[i].empty()) field[keys[i]] = poly_terms_json(spec.field.custom_E[i]);
        if (!spec.field.custom_B[i].empty())
          field[keys[i + 3]] = poly_terms_json(spec.field.custom_B[i]);
      }
      break;
    }
  }
  root["field"] = field;

  if (spec.source)
    root["source"] = {{"rho", spec.source->rho}, {"j", vec3_json(spec.source->j)}};

  if (!spec.particles.empty()) {
    json ps = json::array();
    for (const ParticleSpec& p : spec.particles)
      ps.push_back({{"q0", p.state.q.q0},
                    {"q", vec3_json(p.state.q.q)},
                    {"p0", p.state.p.v0},
                    {"p", vec3_json(p.state.p.v)},
                    {"q_e", p.charges.q_e},
                    {"q_m", p.charges.q_m}});
    root["particles"] = ps;
  }

  if (spec.grid) {
    const GridInitSpec& g = *spec.grid;
    json gj;
    gj["dims"] = g.grid.dims;
    gj["n"] = {g.grid.n[0], g.grid.n[1], g.grid.n[2]};
    gj["dx"] = {g.grid.dx[0], g.grid.dx[1], g.grid.dx[2]};
    gj["origin"] = {g.grid.origin[0], g.grid.origin[1], g.grid.origin[2]};
    json bc = json::array();
    for (int d = 0; d < 3; ++d)
      bc.push_back(g.grid.bc[d] == Boundary::Periodic ? "periodic" : "outflow");
    gj["bc"] = bc;
    gj["k_bg"] = vec3_json(g.k_bg);
    if (g.density == GridInitSpec::DensityInit::Uniform)
      gj["density"] = {{"type", "uniform"}, {"value", g.density_value}};
    else
      gj["density"] = {{"type", "gaussian"},
                       {"amplitude", g.density_value},
                       {"center", vec3_json(g.blob_center)},
                       {"sigma", g.blob_sigma}};
    root["grid"] = gj;
  }

  root["seed"] = spec.seed;
  return root.dump(2) + "\n";
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace emforms
